"""Normalized wavelength spectra and their Fourier coefficients.

Every built-in spectrum is parameterized by its FWHM so that different shapes
can be compared at equal width. Offsets ``x = lambda - lambda0`` are in the
same length unit as ``lambda0`` (micrometres throughout this package).

=============  ==========================================  =====================
kind           density of the offset x                     shape parameter
=============  ==========================================  =====================
gaussian       N(0, sigma^2)                               sigma = FWHM / 2.3548
uniform        1/w on |x| <= w/2                           full width w = FWHM
triangular     (1 - |x|/w)/w on |x| <= w                   half width w = FWHM
sinc2          sinc^2(x/x0)/x0, sinc(u)=sin(pi u)/(pi u)   first zero x0 = FWHM/0.88589
monochromatic  delta(x)                                    none
=============  ==========================================  =====================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import sici

from . import kernels
from .errors import NumericalError, ValidationError

GAUSS_FWHM_PER_SIGMA = 2.0 * math.sqrt(2.0 * math.log(2.0))
# FWHM of sinc^2(u) in units of its first zero: 2 * root of sinc^2(u) = 1/2
SINC2_FWHM_PER_ZERO = 0.8858929413789047

GAUSS_HALF_SPAN = 8.0  # sigmas
SINC2_ZEROS = 20
QUAD_TOL = 1e-10

_ALIASES = {
    "gauss": "gaussian",
    "gaussian": "gaussian",
    "rect": "uniform",
    "uniform": "uniform",
    "tri": "triangular",
    "triangular": "triangular",
    "sinc": "sinc2",
    "sinc2": "sinc2",
    "mono": "monochromatic",
    "monochromatic": "monochromatic",
    "custom": "custom",
}

_KERNEL_KIND = {
    "gaussian": kernels.GAUSSIAN,
    "uniform": kernels.UNIFORM,
    "triangular": kernels.TRIANGULAR,
    "sinc2": kernels.SINC2,
}

BUILTIN_KINDS = ("gaussian", "uniform", "triangular", "sinc2", "monochromatic")
FIGURE_KINDS = ("gaussian", "sinc2", "triangular", "uniform")


def canonical_kind(name: str) -> str:
    try:
        return _ALIASES[str(name).lower()]
    except KeyError:
        raise ValidationError(
            f"unknown spectrum {name!r}; expected one of {sorted(set(_ALIASES))}"
        ) from None


@dataclass(frozen=True)
class FourierCoeffs:
    """Cosine and sine moments of the offset ``b * (lambda - lambda0)``."""

    i_c: float
    i_s: float

    def __post_init__(self):
        if not (math.isfinite(self.i_c) and math.isfinite(self.i_s)):
            raise ValidationError("Fourier coefficients must be finite")
        if self.i_c**2 + self.i_s**2 > 1.0 + 1e-9:
            raise ValidationError(
                f"|I_c + i I_s| exceeds 1 ({math.hypot(self.i_c, self.i_s):.12g})"
            )


@dataclass(frozen=True)
class SpectralDistribution:
    """A normalized spectral density centred on ``lambda0``.

    ``kind="custom"`` takes an offset density ``pdf(x)`` on a finite
    ``support``; supply ``sampler(rng, n)`` to use it with Monte Carlo.
    """

    kind: str
    lambda0: float
    fwhm: float = 0.0
    pdf: Callable[[float], float] | None = None
    support: tuple[float, float] | None = None
    sampler: Callable | None = None

    def __post_init__(self):
        kind = canonical_kind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not (self.lambda0 > 0 and math.isfinite(self.lambda0)):
            raise ValidationError(f"lambda0 must be finite and > 0, got {self.lambda0!r}")
        if kind in _KERNEL_KIND and not (self.fwhm > 0 and math.isfinite(self.fwhm)):
            raise ValidationError(f"fwhm must be finite and > 0 for {kind}, got {self.fwhm!r}")
        if kind == "custom":
            if self.pdf is None or self.support is None:
                raise ValidationError("custom spectrum needs pdf and support")
            lo, hi = self.support
            if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
                raise ValidationError(f"custom support must be finite with lo < hi, got {self.support}")

    @property
    def scale(self) -> float:
        """Kind-specific shape parameter (see module table)."""
        if self.kind == "gaussian":
            return self.fwhm / GAUSS_FWHM_PER_SIGMA
        if self.kind in ("uniform", "triangular"):
            return self.fwhm
        if self.kind == "sinc2":
            return self.fwhm / SINC2_FWHM_PER_ZERO
        return 0.0

    @property
    def symmetric(self) -> bool:
        return self.kind != "custom"

    def offset_support(self) -> tuple[float, float]:
        """Integration window for the offset; sinc2 tails beyond it are added analytically."""
        w = self.scale
        if self.kind == "gaussian":
            return -GAUSS_HALF_SPAN * w, GAUSS_HALF_SPAN * w
        if self.kind == "uniform":
            return -0.5 * w, 0.5 * w
        if self.kind == "triangular":
            return -w, w
        if self.kind == "sinc2":
            return -SINC2_ZEROS * w, SINC2_ZEROS * w
        if self.kind == "custom":
            return tuple(self.support)
        return 0.0, 0.0

    def density(self, lam):
        """``p(lambda)``; the monochromatic kind has no density and raises."""
        x = np.asarray(lam, dtype=float) - self.lambda0
        w = self.scale
        if self.kind == "gaussian":
            return np.exp(-0.5 * (x / w) ** 2) / (w * math.sqrt(2 * math.pi))
        if self.kind == "uniform":
            return np.where(np.abs(x) <= 0.5 * w, 1.0 / w, 0.0)
        if self.kind == "triangular":
            return np.clip(1.0 - np.abs(x) / w, 0.0, None) / w
        if self.kind == "sinc2":
            return np.sinc(x / w) ** 2 / w
        if self.kind == "custom":
            return np.vectorize(self.pdf, otypes=[float])(x)
        raise ValidationError("monochromatic spectrum has no density")

    def sample_offsets(self, rng: np.random.Generator, n: int) -> np.ndarray:
        w = self.scale
        if self.kind == "gaussian":
            return w * rng.standard_normal(n)
        if self.kind == "uniform":
            return w * (rng.random(n) - 0.5)
        if self.kind == "triangular":
            u = rng.random(n)
            left = u < 0.5
            out = np.empty(n)
            out[left] = w * (np.sqrt(2.0 * u[left]) - 1.0)
            out[~left] = w * (1.0 - np.sqrt(2.0 * (1.0 - u[~left])))
            return out
        if self.kind == "sinc2":
            return w * _sample_sinc2(rng, n)
        if self.kind == "monochromatic":
            return np.zeros(n)
        if self.sampler is None:
            raise ValidationError("custom spectrum needs a sampler for Monte Carlo")
        return np.asarray(self.sampler(rng, n), dtype=float)


def _sample_sinc2(rng, n):
    """Rejection sampling of sinc^2(u) under the envelope 2 / (1 + (pi u)^2).

    The envelope is twice a Cauchy density of scale 1/pi, so half the
    proposals are accepted on average.
    """
    out = np.empty(0)
    while out.size < n:
        m = 2 * (n - out.size) + 64
        u = np.tan(math.pi * (rng.random(m) - 0.5)) / math.pi
        accept = rng.random(m) * 2.0 < np.sinc(u) ** 2 * (1.0 + (math.pi * u) ** 2)
        out = np.concatenate([out, u[accept]])
    return out[:n]


def closed_form_coeffs(spec: SpectralDistribution, b: float) -> FourierCoeffs | None:
    """Characteristic-function values; ``None`` when no closed form is known."""
    w = spec.scale
    kind = spec.kind
    if kind == "monochromatic":
        return FourierCoeffs(1.0, 0.0)
    if kind == "gaussian":
        return FourierCoeffs(math.exp(-0.5 * (b * w) ** 2), 0.0)
    if kind == "uniform":
        return FourierCoeffs(float(np.sinc(b * w / (2 * math.pi))), 0.0)
    if kind == "triangular":
        return FourierCoeffs(float(np.sinc(b * w / (2 * math.pi))) ** 2, 0.0)
    if kind == "sinc2":
        return FourierCoeffs(max(0.0, 1.0 - abs(b) * w / (2 * math.pi)), 0.0)
    return None


def _tail_cos_over_u2(k, u0):
    """``int_{u0}^inf cos(k u) / u^2 du`` for ``u0 > 0``."""
    k = abs(k)
    if k == 0.0:
        return 1.0 / u0
    si, _ = sici(k * u0)
    return math.cos(k * u0) / u0 - k * (0.5 * math.pi - float(si))


def _sinc2_tail(beta, zeros):
    """Cosine moment of sinc^2(u) over |u| > zeros, with beta = b * x0."""
    two_pi = 2.0 * math.pi
    g = _tail_cos_over_u2
    return (g(beta, zeros) - 0.5 * g(two_pi + beta, zeros) - 0.5 * g(two_pi - beta, zeros)) / math.pi**2


def _panel_count(spec, b, lo, hi):
    osc = abs(b) * (hi - lo) / (2 * math.pi)
    lobes = 2 * SINC2_ZEROS if spec.kind == "sinc2" else 0
    n = 16 + int(math.ceil(4 * osc)) + 2 * lobes
    return n + (n % 2)


def quadrature_integral(
    spec: SpectralDistribution, b: float, mode: str, tol: float = QUAD_TOL, max_evals: int = 2_000_000
) -> float:
    """``int p(x) f(b x) dx`` with f = cos, sin or 1 by adaptive Simpson.

    Raises :class:`NumericalError` if any subinterval hits the depth limit or
    the evaluation budget is exhausted.
    """
    if spec.kind == "monochromatic":
        return {"cos": 1.0, "sin": 0.0, "norm": 1.0}[mode]
    mode_code = {"cos": 0, "sin": 1, "norm": 2}[mode]
    lo, hi = spec.offset_support()
    n_panels = _panel_count(spec, b, lo, hi)
    if spec.kind == "custom":
        fn = {0: math.cos, 1: math.sin, 2: lambda _: 1.0}[mode_code]
        pdf = spec.pdf

        def f(x):
            return pdf(x) * fn(b * x)

        value, err, evals, ok = kernels.adaptive_simpson(f, lo, hi, tol, n_panels, max_evals=max_evals)
    else:
        value, err, evals, ok = kernels.fourier_integral(
            _KERNEL_KIND[spec.kind], spec.scale, float(b), mode_code, lo, hi, tol, n_panels,
            max_evals=max_evals,
        )
    if not ok:
        raise NumericalError(
            f"adaptive Simpson did not converge for {spec.kind} spectrum (mode={mode}, b={b})",
            {"kind": spec.kind, "b": b, "mode": mode, "error_estimate": err,
             "evaluations": evals, "panels": n_panels, "tol": tol},
        )
    if spec.kind == "sinc2" and mode_code != 1:
        value += _sinc2_tail(0.0 if mode_code == 2 else b * spec.scale, SINC2_ZEROS)
    return float(value)


def quadrature_coeffs(spec: SpectralDistribution, b: float, tol: float = QUAD_TOL) -> FourierCoeffs:
    return FourierCoeffs(quadrature_integral(spec, b, "cos", tol), quadrature_integral(spec, b, "sin", tol))


def fourier_coeffs(spec: SpectralDistribution, b: float, method: str = "auto") -> FourierCoeffs:
    """``(I_c, I_s)``: mean of cos and sin of ``b * (lambda - lambda0)`` under the spectrum.

    ``method`` is ``"auto"`` (closed form when known), ``"closed"`` or ``"quad"``.
    """
    b = float(b)
    if not math.isfinite(b):
        raise ValidationError(f"b must be finite, got {b!r}")
    if method not in ("auto", "closed", "quad"):
        raise ValidationError(f"method must be auto, closed or quad, got {method!r}")
    if method != "quad":
        fc = closed_form_coeffs(spec, b)
        if fc is not None:
            return fc
        if method == "closed":
            raise ValidationError(f"no closed form for {spec.kind} spectrum")
    return quadrature_coeffs(spec, b)
