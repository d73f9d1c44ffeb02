# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: spectral Fourier quadrature and Monte-Carlo Choi sums.

Mirrors ``qrelax._pykernels`` function for function.
"""

import numpy as np

from libc.math cimport cos, sin, exp, fabs, sqrt, M_PI

cdef enum:
    GAUSSIAN = 0
    UNIFORM = 1
    TRIANGULAR = 2
    SINC2 = 3


cdef inline double _pdf(int kind, double scale, double x) nogil:
    cdef double u, r
    if kind == GAUSSIAN:
        u = x / scale
        return exp(-0.5 * u * u) / (scale * 2.5066282746310002)
    elif kind == UNIFORM:
        return 1.0 / scale if fabs(x) <= 0.5 * scale else 0.0
    elif kind == TRIANGULAR:
        r = 1.0 - fabs(x) / scale
        return r / scale if r > 0.0 else 0.0
    elif kind == SINC2:
        if x == 0.0:
            return 1.0 / scale
        u = M_PI * x / scale
        r = sin(u) / u
        return r * r / scale
    return 0.0


cdef inline double _f(int kind, double scale, double b, int mode, double x) nogil:
    cdef double p = _pdf(kind, scale, x)
    if mode == 0:
        return p * cos(b * x)
    elif mode == 1:
        return p * sin(b * x)
    return p


cdef struct _Acc:
    double err
    long evals
    long max_evals
    int failed


cdef double _adapt(int kind, double scale, double b, int mode,
                   double a, double c, double fa, double fm, double fc,
                   double whole, double tol, int depth, int min_depth,
                   int max_depth, _Acc* acc) nogil:
    cdef double m = 0.5 * (a + c)
    cdef double lm = 0.5 * (a + m)
    cdef double rm = 0.5 * (m + c)
    cdef double flm = _f(kind, scale, b, mode, lm)
    cdef double frm = _f(kind, scale, b, mode, rm)
    cdef double h = c - a
    cdef double left = h / 12.0 * (fa + 4.0 * flm + fm)
    cdef double right = h / 12.0 * (fm + 4.0 * frm + fc)
    cdef double delta = left + right - whole
    acc.evals += 2
    if depth >= min_depth and fabs(delta) <= 15.0 * tol:
        acc.err += fabs(delta) / 15.0
        return left + right + delta / 15.0
    if depth >= max_depth or acc.evals >= acc.max_evals:
        acc.failed = 1
        acc.err += fabs(delta) / 15.0
        return left + right + delta / 15.0
    return (_adapt(kind, scale, b, mode, a, m, fa, flm, fm, left, 0.5 * tol,
                   depth + 1, min_depth, max_depth, acc)
            + _adapt(kind, scale, b, mode, m, c, fm, frm, fc, right, 0.5 * tol,
                     depth + 1, min_depth, max_depth, acc))


def fourier_integral(int kind, double scale, double b, int mode, double lo, double hi,
                     double tol, int n_panels, int max_depth=50, int min_depth=2,
                     long max_evals=2000000):
    """Integrate ``pdf(x) * {cos, sin, 1}(b x)`` over ``[lo, hi]``.

    Returns ``(value, error_estimate, n_evals, converged)``; ``converged`` is
    false if any subinterval hit ``max_depth`` or the evaluation budget ran out.
    """
    cdef _Acc acc
    cdef int i
    cdef double total = 0.0, a, c, fa, fm, fc, panel_tol, width
    acc.err = 0.0
    acc.evals = 0
    acc.failed = 0
    acc.max_evals = max_evals
    width = (hi - lo) / n_panels
    panel_tol = tol / n_panels
    with nogil:
        for i in range(n_panels):
            a = lo + i * width
            c = hi if i == n_panels - 1 else lo + (i + 1) * width
            fa = _f(kind, scale, b, mode, a)
            fm = _f(kind, scale, b, mode, 0.5 * (a + c))
            fc = _f(kind, scale, b, mode, c)
            acc.evals += 3
            total += _adapt(kind, scale, b, mode, a, c, fa, fm, fc,
                            (c - a) / 6.0 * (fa + 4.0 * fm + fc), panel_tol,
                            0, min_depth, max_depth, &acc)
    return total, acc.err, acc.evals, not acc.failed


def plate_choi_sum(double[::1] deltas, double nz, double nx):
    """``sum_i vec(U_i) vec(U_i)^dag`` for phase-plate unitaries with retardances ``deltas``."""
    cdef Py_ssize_t n = deltas.shape[0], i, j, k
    cdef double c, s
    cdef double vr[4]
    cdef double vi[4]
    cdef double accr[4][4]
    cdef double acci[4][4]
    for j in range(4):
        for k in range(4):
            accr[j][k] = 0.0
            acci[j][k] = 0.0
    with nogil:
        for i in range(n):
            c = cos(0.5 * deltas[i])
            s = sin(0.5 * deltas[i])
            vr[0] = c
            vi[0] = -s * nz
            vr[1] = 0.0
            vi[1] = -s * nx
            vr[2] = 0.0
            vi[2] = -s * nx
            vr[3] = c
            vi[3] = s * nz
            for j in range(4):
                for k in range(j, 4):
                    # v_j * conj(v_k)
                    accr[j][k] += vr[j] * vr[k] + vi[j] * vi[k]
                    acci[j][k] += vi[j] * vr[k] - vr[j] * vi[k]
    out = np.empty((4, 4), dtype=np.complex128)
    for j in range(4):
        for k in range(j, 4):
            out[j, k] = complex(accr[j][k], acci[j][k])
            out[k, j] = complex(accr[j][k], -acci[j][k])
    return out
