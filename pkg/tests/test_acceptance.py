"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run alone with ``pytest tests/test_acceptance.py``; the terminal summary lists
one PASS/FAIL line per criterion.
"""

import math
import time

import numpy as np
import pytest

from qrelax import channels as ch
from qrelax import cli
from qrelax import plate as pl
from qrelax import process as pr
from qrelax import spectra as sp
from qrelax import state

from oracles import brute_negativity, jacobi_eigenvalues, random_density, trace_norm_distance

acceptance = pytest.mark.acceptance
FIG_T1, FIG_T2 = 20.0, 15.0
LAM0 = 0.8


@acceptance(1, "channel law: completeness and trace/PSD preservation, < 5 s")
def test_channel_law():
    rng = np.random.default_rng(101)
    start = time.perf_counter()
    worst_complete = worst_trace = 0.0
    lowest_eig = math.inf
    for _ in range(1000):
        ga, gp, gb, gq = rng.random(4)
        local = ch.compose(ch.amplitude_damping(ga), ch.phase_damping(gp))
        other = ch.compose(ch.phase_damping(gq), ch.amplitude_damping(gb))
        pair = ch.tensor_channel(local, other)
        for c in (ch.amplitude_damping(ga), ch.phase_damping(gp), local, pair):
            worst_complete = max(worst_complete, ch.completeness_error(c.stack))
        rho = random_density(rng, 4)
        out = ch.apply_channel(pair, rho).matrix
        worst_trace = max(worst_trace, abs(np.trace(out).real - 1))
        lowest_eig = min(lowest_eig, np.linalg.eigvalsh(out)[0])
    elapsed = time.perf_counter() - start
    assert worst_complete <= 1e-12
    assert worst_trace <= 1e-12
    assert lowest_eig >= -state.PSD_FLOOR
    assert elapsed < 5.0


@acceptance(2, "negativity oracle: max-entangled (s-1)/2, products 0")
def test_negativity_oracle():
    rng = np.random.default_rng(102)
    for s in (2, 3, 4):
        rho = state.density_from_pure(state.max_entangled(s))
        want = (s - 1) / 2
        assert abs(state.negativity(rho) - want) <= 1e-9
        assert abs(brute_negativity(rho.matrix, s, s) - want) <= 1e-9
    for _ in range(20):
        da, db = rng.integers(2, 4, size=2)
        prod = state.DensityMatrix(np.kron(random_density(rng, da), random_density(rng, db)), (int(da), int(db)))
        assert abs(state.negativity(prod)) <= 1e-10
        assert abs(brute_negativity(prod.matrix, da, db)) <= 1e-10


@acceptance(3, "negativity dynamics: ideal flat at 1.5, noisy strictly decreasing, < 10 s")
def test_negativity_dynamics():
    start = time.perf_counter()
    series = pr.negativity_dynamics(pr.NoisyGateSpec(pr.sqisw(), 1.0, 200, FIG_T1, FIG_T2))
    elapsed = time.perf_counter() - start
    assert max(abs(p.negativity_ideal - 1.5) for p in series) <= 1e-9
    noisy = [p.negativity_noisy for p in series]
    assert all(b < a for a, b in zip(noisy, noisy[1:]))
    assert noisy[-1] < 1.5
    assert elapsed < 10.0


@acceptance(4, "slicing convergence: N=200 vs 400 <= 1e-4, ordering gap halves per doubling")
def test_slicing_convergence():
    spec = pr.NoisyGateSpec(pr.sqisw(), 1.0, 200, FIG_T1, FIG_T2)
    assert pr.slicing_convergence(spec) <= 1e-4
    gaps = []
    for n in (50, 100, 200, 400):
        s = spec.with_n(n)
        gaps.append(pr.chi_trace_distance(pr.noisy_gate_chi(s), pr.noisy_gate_chi(s.with_order("noise-gate"))))
    for a, b in zip(gaps, gaps[1:]):
        assert abs(b / a - 0.5) <= 0.5 * 0.2


def plate_grid(n=100, seed=105):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        kind = sp.FIGURE_KINDS[int(rng.integers(4))]
        width = float(rng.uniform(0.005, 0.08))
        p = pl.PlateParams(float(rng.uniform(1, 5000)), float(rng.uniform(0.001, 0.05)),
                           float(rng.uniform(0, math.pi)), LAM0)
        yield p, sp.SpectralDistribution(kind, LAM0, width)


@acceptance(5, "plate chi rank <= 2 on a 100-point grid")
def test_plate_rank():
    for p, s in plate_grid():
        ev = jacobi_eigenvalues(pl.analytic_chi(p, s).matrix)
        assert abs(ev[0]) <= 1e-10 and abs(ev[1]) <= 1e-10


@acceptance(6, "plate purity equals purity of chi/2 on the same grid")
def test_plate_purity_consistency():
    for p, s in plate_grid():
        m = pl.analytic_chi(p, s).matrix / 2
        assert abs(pl.plate_purity(sp.fourier_coeffs(s, p.b)) - np.trace(m @ m).real) <= 1e-10


@acceptance(7, "Monte-Carlo oracle matches analytic chi (linearized 0.01, exact 2e-3), < 30 s")
def test_oracle_equivalence():
    start = time.perf_counter()
    n = 100_000
    for kind in sp.FIGURE_KINDS:
        s = sp.SpectralDistribution(kind, LAM0, 0.03)
        for h in (100.0, 600.0, 2000.0):
            p = pl.PlateParams(h, 0.01, 0.3, LAM0)
            mc = pl.monte_carlo_chi(p, s, n, seed=7)
            assert pr.chi_trace_distance(mc, pl.analytic_chi(p, s)) <= 0.01
    narrow = sp.SpectralDistribution("gaussian", LAM0, 1e-3 * LAM0 * sp.GAUSS_FWHM_PER_SIGMA)
    for h in (100.0, 1000.0, 10000.0):
        p = pl.PlateParams(h, 0.01, 0.3, LAM0)
        mc = pl.monte_carlo_chi(p, narrow, n, seed=7, exact_delta=True)
        assert pr.chi_trace_distance(mc, pl.analytic_chi(p, narrow)) <= 2e-3
    assert time.perf_counter() - start < 30.0


@acceptance(8, "purity curves: P(0)=1, gaussian monotone, uniform dip and revival, closed vs quadrature")
def test_purity_curves():
    dn, w = 0.01, 0.03
    hs = np.linspace(1e-6, 3000, 601)
    curves = {k: pl.purity_vs_thickness(k, w, 0.3, dn, LAM0, hs) for k in sp.FIGURE_KINDS}
    for pts in curves.values():
        assert abs(pts[0].purity - 1) <= 1e-9
    g = [pt.purity for pt in curves["gaussian"]]
    assert all(b <= a for a, b in zip(g, g[1:]))
    h_star = LAM0**2 / (dn * w)  # first zero of sinc(b w / 2 pi)
    dip, lobe = pl.purity_vs_thickness("uniform", w, 0.3, dn, LAM0, [h_star, 1.43 * h_star])
    assert abs(dip.purity - 0.5) <= 1e-12
    assert lobe.purity > 0.52
    for kind in ("gaussian", "uniform", "triangular"):
        s = sp.SpectralDistribution(kind, LAM0, w)
        for h in hs[::20]:
            b = pl.PlateParams(max(h, 1e-6), dn, 0.3, LAM0).b
            assert abs(sp.closed_form_coeffs(s, b).i_c - sp.quadrature_integral(s, b, "cos")) <= 1e-8


@acceptance(9, "monochromatic spectrum gives the unitary chi and purity 1")
def test_monochromatic():
    rng = np.random.default_rng(109)
    mono = sp.SpectralDistribution("mono", LAM0)
    for _ in range(50):
        p = pl.PlateParams(float(rng.uniform(1, 5000)), 0.01, float(rng.uniform(0, math.pi)), LAM0)
        want = pr.chi_from_channel(ch.unitary_channel(pl.plate_unitary(p.a, p.alpha))).matrix
        assert np.max(np.abs(pl.analytic_chi(p, mono).matrix - want)) <= 1e-10
        assert abs(pl.plate_purity(sp.fourier_coeffs(mono, p.b)) - 1) <= 1e-12


PLATE = ["--fwhm", "0.03", "--lambda0", "0.8", "--delta-n", "0.01", "--alpha", "0.3"]
SUBCOMMANDS = [
    ["chi", "--n", "100", "--format", "csv"],
    ["chi", "--n", "100", "--format", "json"],
    ["negativity", "--n", "200", "--format", "csv"],
    ["negativity", "--n", "200", "--format", "json"],
    ["plate-purity", "--spectrum", "all", *PLATE, "--format", "csv"],
    ["plate-purity", "--spectrum", "all", *PLATE, "--format", "json"],
    ["plate-chi", "--spectrum", "gauss", *PLATE, "--h", "500", "--oracle", "100000", "--seed", "4", "--format", "csv"],
    ["plate-chi", "--spectrum", "tri", *PLATE, "--h", "500", "--oracle", "100000", "--seed", "4",
     "--exact-delta", "--format", "json"],
    ["validate"],
]


@acceptance(10, "CLI determinism: repeated runs give bit-identical files")
def test_cli_determinism(tmp_path, capsys):
    for i, argv in enumerate(SUBCOMMANDS):
        blobs = []
        for k in range(2):
            out = tmp_path / f"{i}-{k}.out"
            assert cli.main(argv + ["--out", str(out)]) == 0
            meta = tmp_path / f"{i}-{k}.out.meta.json"
            blobs.append((out.read_bytes(), meta.read_bytes() if meta.exists() else b""))
        assert blobs[0] == blobs[1], argv
    capsys.readouterr()
