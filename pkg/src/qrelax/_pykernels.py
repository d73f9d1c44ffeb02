"""Pure-Python versions of the compiled kernels (same algorithms, same results)."""

from __future__ import annotations

import math

import numpy as np

GAUSSIAN, UNIFORM, TRIANGULAR, SINC2 = 0, 1, 2, 3

_SQRT_2PI = 2.5066282746310002


def _pdf(kind, scale, x):
    if kind == GAUSSIAN:
        u = x / scale
        return math.exp(-0.5 * u * u) / (scale * _SQRT_2PI)
    if kind == UNIFORM:
        return 1.0 / scale if abs(x) <= 0.5 * scale else 0.0
    if kind == TRIANGULAR:
        r = 1.0 - abs(x) / scale
        return r / scale if r > 0.0 else 0.0
    if kind == SINC2:
        if x == 0.0:
            return 1.0 / scale
        u = math.pi * x / scale
        r = math.sin(u) / u
        return r * r / scale
    return 0.0


def adaptive_simpson(f, lo, hi, tol, n_panels=1, max_depth=50, min_depth=2, max_evals=2_000_000):
    """Adaptive Simpson over ``n_panels`` equal panels of ``[lo, hi]``.

    Returns ``(value, error_estimate, n_evals, converged)``. Each panel gets
    ``tol / n_panels``; halves inherit half their parent's tolerance.
    ``converged`` is false if any subinterval hit ``max_depth`` or the
    evaluation budget ran out.
    """
    state = {"err": 0.0, "evals": 0, "failed": False}

    def adapt(a, c, fa, fm, fc, whole, tol, depth):
        m = 0.5 * (a + c)
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + c)
        flm = f(lm)
        frm = f(rm)
        h = c - a
        left = h / 12.0 * (fa + 4.0 * flm + fm)
        right = h / 12.0 * (fm + 4.0 * frm + fc)
        delta = left + right - whole
        state["evals"] += 2
        if depth >= min_depth and abs(delta) <= 15.0 * tol:
            state["err"] += abs(delta) / 15.0
            return left + right + delta / 15.0
        if depth >= max_depth or state["evals"] >= max_evals:
            state["failed"] = True
            state["err"] += abs(delta) / 15.0
            return left + right + delta / 15.0
        return adapt(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) + adapt(
            m, c, fm, frm, fc, right, 0.5 * tol, depth + 1
        )

    width = (hi - lo) / n_panels
    panel_tol = tol / n_panels
    total = 0.0
    for i in range(n_panels):
        a = lo + i * width
        c = hi if i == n_panels - 1 else lo + (i + 1) * width
        fa, fm, fc = f(a), f(0.5 * (a + c)), f(c)
        state["evals"] += 3
        total += adapt(a, c, fa, fm, fc, (c - a) / 6.0 * (fa + 4.0 * fm + fc), panel_tol, 0)
    return total, state["err"], state["evals"], not state["failed"]


def fourier_integral(kind, scale, b, mode, lo, hi, tol, n_panels, max_depth=50, min_depth=2, max_evals=2_000_000):
    if mode == 0:
        def f(x):
            return _pdf(kind, scale, x) * math.cos(b * x)
    elif mode == 1:
        def f(x):
            return _pdf(kind, scale, x) * math.sin(b * x)
    else:
        def f(x):
            return _pdf(kind, scale, x)
    return adaptive_simpson(f, lo, hi, tol, n_panels, max_depth, min_depth, max_evals)


def plate_choi_sum(deltas, nz, nx):
    d = np.ascontiguousarray(deltas, dtype=float)
    c = np.cos(0.5 * d)
    s = np.sin(0.5 * d)
    v = np.stack([c - 1j * s * nz, -1j * s * nx, -1j * s * nx, c + 1j * s * nz], axis=1)
    return v.T @ v.conj()
