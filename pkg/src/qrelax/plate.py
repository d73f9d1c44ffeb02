"""Decoherence of a polarization qubit by a dispersive birefringent phase plate.

Basis order is ``(|V>, |H>)``. A plate of thickness ``h`` and birefringence
``delta_n`` imposes the retardance ``delta(lam) = 2 pi delta_n h / lam`` about
an optical axis at angle ``alpha``. Averaging the monochromatic process over
the spectrum with ``delta`` linearized around ``lambda0`` gives a closed-form
chi matrix of rank at most two.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import kernels
from .errors import ValidationError
from .process import ChiMatrix
from .spectra import FourierCoeffs, SpectralDistribution, canonical_kind, fourier_coeffs

_FD_REL_STEP = 1e-6


@dataclass(frozen=True)
class PlateParams:
    """Plate geometry and material; lengths in micrometres, angles in radians.

    ``delta_fn`` optionally replaces the constant-birefringence retardance
    with a user model ``lam -> delta``; its slope at ``lambda0`` is then taken
    by central difference.
    """

    h: float
    delta_n: float
    alpha: float
    lambda0: float
    delta_fn: Callable[[float], float] | None = None

    def __post_init__(self):
        for name in ("h", "delta_n", "lambda0"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise ValidationError(f"{name} must be finite and > 0, got {v!r}")
        if not math.isfinite(self.alpha):
            raise ValidationError(f"alpha must be finite, got {self.alpha!r}")

    @property
    def a(self) -> float:
        """Retardance at the central wavelength."""
        return optical_length(self.lambda0, self)

    @property
    def b(self) -> float:
        """Slope of the retardance at the central wavelength (rad per unit length)."""
        if self.delta_fn is None:
            return -2.0 * math.pi * self.delta_n * self.h / self.lambda0**2
        step = self.lambda0 * _FD_REL_STEP
        return (self.delta_fn(self.lambda0 + step) - self.delta_fn(self.lambda0 - step)) / (2 * step)

    @property
    def n_z(self) -> float:
        return math.cos(2.0 * self.alpha)

    @property
    def n_x(self) -> float:
        return math.sin(2.0 * self.alpha)

    def with_h(self, h: float) -> "PlateParams":
        return PlateParams(h, self.delta_n, self.alpha, self.lambda0, self.delta_fn)


def plate_unitary(delta: float, alpha: float) -> np.ndarray:
    """Monochromatic Jones matrix ``cos(d/2) I - i sin(d/2) (cos2a Z + sin2a X)``."""
    c, s = math.cos(0.5 * delta), math.sin(0.5 * delta)
    nz, nx = math.cos(2.0 * alpha), math.sin(2.0 * alpha)
    return np.array(
        [[c - 1j * s * nz, -1j * s * nx], [-1j * s * nx, c + 1j * s * nz]], dtype=complex
    )


def optical_length(lam, p: PlateParams):
    """Retardance ``2 pi delta_n h / lam`` (or ``p.delta_fn(lam)``)."""
    arr = np.asarray(lam, dtype=float)
    if np.any(~(arr > 0)):
        raise ValidationError(f"wavelength must be > 0, got {lam!r}")
    if p.delta_fn is not None:
        out = np.vectorize(p.delta_fn, otypes=[float])(arr)
    else:
        out = 2.0 * math.pi * p.delta_n * p.h / arr
    return float(out) if out.ndim == 0 else out


def linearize(p: PlateParams) -> tuple[float, float]:
    return p.a, p.b


def plate_basis(alpha: float) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal pair spanning every plate Choi vector at angle ``alpha``."""
    nz, nx = math.cos(2.0 * alpha), math.sin(2.0 * alpha)
    r = 1.0 / math.sqrt(2.0)
    phi1 = r * np.array([1.0, 0.0, 0.0, 1.0], dtype=complex)
    phi2 = r * np.array([nz, nx, nx, -nz], dtype=complex)
    return phi1, phi2


def plate_rho(a: float, fc: FourierCoeffs) -> np.ndarray:
    """2x2 coefficient matrix of the plate chi matrix in the ``(phi1, phi2)`` basis."""
    ca, sa = math.cos(a), math.sin(a)
    diag = fc.i_c * ca - fc.i_s * sa
    off = fc.i_s * ca + fc.i_c * sa
    return 0.5 * np.array([[1 + diag, 1j * off], [-1j * off, 1 - diag]], dtype=complex)


def analytic_chi(p: PlateParams, spec: SpectralDistribution, method: str = "auto") -> ChiMatrix:
    if abs(spec.lambda0 - p.lambda0) > 1e-12 * p.lambda0:
        raise ValidationError(
            f"spectrum centre {spec.lambda0!r} differs from plate lambda0 {p.lambda0!r}"
        )
    a, b = linearize(p)
    rho = plate_rho(a, fourier_coeffs(spec, b, method))
    basis = np.stack(plate_basis(p.alpha), axis=1)  # columns phi1, phi2
    return ChiMatrix(2, 2.0 * basis @ rho @ basis.conj().T)


def plate_purity(fc: FourierCoeffs) -> float:
    return 0.5 * (1.0 + fc.i_c**2 + fc.i_s**2)


def sample_retardances(
    p: PlateParams, spec: SpectralDistribution, n_samples: int, seed: int = 0, exact_delta: bool = False
) -> np.ndarray:
    if int(n_samples) != n_samples or n_samples < 1:
        raise ValidationError(f"n_samples must be an integer >= 1, got {n_samples!r}")
    rng = np.random.default_rng(seed)
    x = spec.sample_offsets(rng, int(n_samples))
    if exact_delta:
        lam = p.lambda0 + x
        if np.any(lam <= 0):
            raise ValidationError("spectrum samples reach non-positive wavelengths; exact mode undefined")
        return np.ascontiguousarray(optical_length(lam, p), dtype=float)
    a, b = linearize(p)
    return np.ascontiguousarray(a + b * x, dtype=float)


def monte_carlo_chi(
    p: PlateParams,
    spec: SpectralDistribution,
    n_samples: int,
    seed: int = 0,
    exact_delta: bool = False,
) -> ChiMatrix:
    """Average of the monochromatic unitary chi matrices over sampled wavelengths.

    ``exact_delta`` uses the full ``1/lam`` retardance instead of its
    linearization, isolating the linearization error from sampling noise.
    """
    deltas = sample_retardances(p, spec, n_samples, seed, exact_delta)
    acc = kernels.plate_choi_sum(deltas, p.n_z, p.n_x)
    return ChiMatrix(2, acc / deltas.size)


@dataclass(frozen=True)
class PurityPoint:
    h: float
    a: float
    b: float
    i_c: float
    i_s: float
    purity: float


def purity_vs_thickness(
    spec_kind: str,
    width: float,
    alpha: float,
    delta_n: float,
    lambda0: float,
    h_range: Sequence[float],
    method: str = "auto",
) -> list[PurityPoint]:
    """Plate purity over a thickness sweep; ``width`` is the spectrum FWHM."""
    hs = [float(h) for h in h_range]
    if not hs:
        raise ValidationError("h_range must not be empty")
    if any(h2 < h1 for h1, h2 in zip(hs, hs[1:])):
        raise ValidationError("h_range must be ascending")
    spec = SpectralDistribution(canonical_kind(spec_kind), lambda0, width)
    out = []
    for h in hs:
        p = PlateParams(h, delta_n, alpha, lambda0)
        a, b = linearize(p)
        fc = fourier_coeffs(spec, b, method)
        out.append(PurityPoint(h, a, b, fc.i_c, fc.i_s, plate_purity(fc)))
    return out
