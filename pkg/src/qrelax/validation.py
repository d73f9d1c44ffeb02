"""Self-check of the library's physical and numerical invariants.

Each check returns ``(passed, detail)``; :func:`run_all` runs them in a fixed
order with fixed seeds so the report is reproducible.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import unitary_group

from . import channels, kernels, plate, process, spectra, state


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str
    seconds: float


def _random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def check_completeness(trials=1000, seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        ga, gp = rng.random(2)
        worst = max(
            worst,
            channels.completeness_error(channels._amplitude_damping_ops(ga)),
            channels.completeness_error(channels._phase_damping_ops(gp)),
        )
        ch = channels.compose(channels.amplitude_damping(ga), channels.phase_damping(gp))
        worst = max(worst, channels.completeness_error(ch.stack))
        tch = channels.tensor_channel(ch, channels.amplitude_damping(rng.random()))
        worst = max(worst, channels.completeness_error(tch.stack))
    return worst <= 1e-12, f"max |sum E^dag E - I| = {worst:.2e} over {trials} draws"


def check_trace_psd(trials=1000, seed=1):
    rng = np.random.default_rng(seed)
    worst_tr = worst_eig = 0.0
    for _ in range(trials):
        ch = channels.tensor_channel(
            channels.relaxation_channel(channels.relaxation_params(rng.random(), 1 + rng.random(), 1 + rng.random())),
            channels.amplitude_damping(rng.random()),
        )
        out = channels.apply_to_matrix(ch, _random_density(rng, 4))
        worst_tr = max(worst_tr, abs(np.trace(out).real - 1))
        worst_eig = min(worst_eig, state.hermitian_eigenvalues(out)[0])
    ok = worst_tr <= 1e-12 and worst_eig >= -state.PSD_FLOOR
    return ok, f"max trace error {worst_tr:.2e}, min eigenvalue {worst_eig:.2e}"


def check_dephasing_diagonal(trials=200, seed=2):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        rho = _random_density(rng, 2)
        out = channels.apply_to_matrix(channels.phase_damping(rng.random()), rho)
        worst = max(worst, np.max(np.abs(np.diag(out) - np.diag(rho))))
    return worst <= 1e-15, f"max population change {worst:.2e}"


def check_semigroup(seed=3):
    rng = np.random.default_rng(seed)
    worst = 0.0
    basis = [np.array(m, dtype=complex) for m in ([[1, 0], [0, 0]], [[0, 1], [0, 0]], [[0, 0], [1, 0]], [[0, 0], [0, 1]])]
    for _ in range(50):
        t1, t2 = rng.random(2)
        T1 = 0.5 + rng.random()
        T2 = T1 * (0.2 + 1.7 * rng.random())
        for build in (lambda p: channels.amplitude_damping(p.gamma_a), lambda p: channels.phase_damping(p.gamma_p)):
            a = build(channels.relaxation_params(t1, T1, T2))
            b = build(channels.relaxation_params(t2, T1, T2))
            ab = build(channels.relaxation_params(t1 + t2, T1, T2))
            c = channels.compose(a, b)
            for m in basis:
                worst = max(worst, np.max(np.abs(channels.apply_to_matrix(c, m) - channels.apply_to_matrix(ab, m))))
    return worst <= 1e-12, f"max action difference {worst:.2e}"


def check_max_entangled_negativity():
    errs = []
    for s in (2, 3, 4):
        n = state.negativity(state.density_from_pure(state.max_entangled(s)))
        errs.append(abs(n - (s - 1) / 2))
    return max(errs) <= 1e-9, "errors vs (s-1)/2 for s=2,3,4: " + ", ".join(f"{e:.1e}" for e in errs)


def check_local_unitary_invariance(trials=100, seed=4):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(trials):
        rho = state.DensityMatrix(_random_density(rng, 4, rank=2), (2, 2))
        u = np.kron(unitary_group.rvs(2, random_state=rng), unitary_group.rvs(2, random_state=rng))
        moved = u @ rho.matrix @ u.conj().T
        moved = state.DensityMatrix(0.5 * (moved + moved.conj().T), (2, 2))
        worst = max(worst, abs(state.negativity(rho) - state.negativity(moved)))
    return worst <= 1e-9, f"max |N(rho) - N(U rho U^dag)| = {worst:.2e}"


def check_unitary_chi(trials=50, seed=5):
    rng = np.random.default_rng(seed)
    bad = 0
    worst = 0.0
    for _ in range(trials):
        for s in (2, 4):
            chi = process.chi_from_channel(channels.unitary_channel(unitary_group.rvs(s, random_state=rng)))
            ev = chi.eigenvalues()
            bad += chi.rank() != 1
            worst = max(worst, abs(ev[-1] - s), abs(np.trace(chi.matrix).real - s))
    return bad == 0 and worst <= 1e-10, f"non-rank-1 cases {bad}, max error {worst:.2e}"


def check_slicing_convergence():
    spec = process.NoisyGateSpec(process.sqisw(), 1.0, 200, 20.0, 15.0)
    d = process.slicing_convergence(spec)
    return d <= 1e-4, f"trace distance N=200 vs 400: {d:.2e}"


def check_quadrature(seed=6):
    worst = 0.0
    for kind in ("gaussian", "uniform", "triangular", "sinc2"):
        spec = spectra.SpectralDistribution(kind, 0.8, 0.05)
        for b in np.linspace(-50, 50, 21):
            q = spectra.quadrature_coeffs(spec, b)
            c = spectra.closed_form_coeffs(spec, b)
            worst = max(worst, abs(q.i_c - c.i_c), abs(q.i_s))
    return worst <= 1e-8, f"max |closed form - quadrature| = {worst:.2e}"


def _plate_grid(rng, n):
    kinds = spectra.FIGURE_KINDS
    for i in range(n):
        p = plate.PlateParams(
            h=10 ** rng.uniform(1, 3.5), delta_n=0.009, alpha=rng.uniform(0, math.pi), lambda0=0.8
        )
        yield p, spectra.SpectralDistribution(kinds[i % 4], 0.8, rng.uniform(0.005, 0.1))


def check_plate_rank_and_purity(n=100, seed=7):
    rng = np.random.default_rng(seed)
    worst_ev = worst_p = 0.0
    for p, spec in _plate_grid(rng, n):
        chi = plate.analytic_chi(p, spec)
        worst_ev = max(worst_ev, np.max(np.abs(chi.eigenvalues()[:2])))
        fc = spectra.fourier_coeffs(spec, p.b)
        worst_p = max(worst_p, abs(plate.plate_purity(fc) - state.purity(chi.matrix / 2)))
    ok = worst_ev <= 1e-10 and worst_p <= 1e-10
    return ok, f"max small eigenvalue {worst_ev:.2e}, max purity mismatch {worst_p:.2e}"


def check_oracle(n_samples=100_000, seed=8):
    worst = 0.0
    for kind in spectra.FIGURE_KINDS:
        spec = spectra.SpectralDistribution(kind, 0.8, 0.02)
        for h in (50.0, 300.0, 1000.0):
            p = plate.PlateParams(h, 0.01, 0.3, 0.8)
            mc = plate.monte_carlo_chi(p, spec, n_samples, seed)
            worst = max(worst, process.chi_trace_distance(mc, plate.analytic_chi(p, spec)))
    bound = 3 / math.sqrt(n_samples)
    return worst <= bound, f"max trace distance {worst:.2e} (bound {bound:.2e})"


def check_backends(seed=9):
    impls = kernels.available_backends()
    if len(impls) < 2:
        return True, "only the pure-Python backend is available"
    rng = np.random.default_rng(seed)
    deltas = rng.uniform(0, 50, 1000)
    a = impls["cython"].plate_choi_sum(deltas, 0.6, 0.8)
    b = impls["python"].plate_choi_sum(deltas, 0.6, 0.8)
    qa = impls["cython"].fourier_integral(3, 0.05, 12.0, 0, -1.0, 1.0, 1e-10, 64)[0]
    qb = impls["python"].fourier_integral(3, 0.05, 12.0, 0, -1.0, 1.0, 1e-10, 64)[0]
    worst = max(np.max(np.abs(a - b)) / deltas.size, abs(qa - qb))
    return worst <= 1e-12, f"max backend difference {worst:.2e}"


CHECKS: list[tuple[str, Callable]] = [
    ("channel-completeness", check_completeness),
    ("channel-trace-psd", check_trace_psd),
    ("dephasing-keeps-populations", check_dephasing_diagonal),
    ("relaxation-semigroup", check_semigroup),
    ("max-entangled-negativity", check_max_entangled_negativity),
    ("negativity-local-unitary-invariance", check_local_unitary_invariance),
    ("unitary-chi-rank-one", check_unitary_chi),
    ("slicing-convergence", check_slicing_convergence),
    ("closed-form-vs-quadrature", check_quadrature),
    ("plate-rank-and-purity", check_plate_rank_and_purity),
    ("monte-carlo-oracle", check_oracle),
    ("kernel-backends-agree", check_backends),
]


def run_all() -> list[CheckResult]:
    out = []
    for name, fn in CHECKS:
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed report
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(CheckResult(name, bool(ok), detail, time.perf_counter() - t0))
    return out
