"""Reference computations that share no code path with the library."""

import math

import numpy as np


def jacobi_eigenvalues(h, tol=1e-14, max_sweeps=100):
    """Eigenvalues of a Hermitian matrix by cyclic Jacobi rotations.

    The n x n Hermitian matrix is embedded as the 2n x 2n real symmetric
    ``[[Re, -Im], [Im, Re]]``; each eigenvalue appears twice there.
    """
    h = np.asarray(h, dtype=complex)
    n = h.shape[0]
    a = np.block([[h.real, -h.imag], [h.imag, h.real]]).astype(float)
    m = 2 * n
    for _ in range(max_sweeps):
        off = math.sqrt(sum(a[i, j] ** 2 for i in range(m) for j in range(m) if i != j))
        if off < tol:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                if abs(a[p, q]) < 1e-300:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * a[p, q])
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(m):
                    akp, akq = a[k, p], a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(m):
                    apk, aqk = a[p, k], a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
    ev = sorted(a[i, i] for i in range(m))
    return np.array(ev[::2])


def loop_partial_transpose(m, da, db, subsystem):
    """Partial transpose by explicit index swapping."""
    m = np.asarray(m)
    out = np.zeros_like(m)
    for i in range(da):
        for j in range(db):
            for k in range(da):
                for l in range(db):
                    if subsystem == 0:
                        out[k * db + j, i * db + l] = m[i * db + j, k * db + l]
                    else:
                        out[i * db + l, k * db + j] = m[i * db + j, k * db + l]
    return out


def brute_negativity(rho, da, db):
    ev = jacobi_eigenvalues(loop_partial_transpose(rho, da, db, 1))
    return float(sum(-e for e in ev if e < 0))


def kraus_sum(ops, rho):
    out = np.zeros_like(np.asarray(rho, dtype=complex))
    for e in ops:
        e = np.asarray(e)
        out = out + e @ rho @ e.conj().T
    return out


def choi_by_loops(ops, s):
    """``s * (E x I)|Phi><Phi|(E x I)^dag`` summed over Kraus operators, built column by column."""
    chi = np.zeros((s * s, s * s), dtype=complex)
    for e in ops:
        v = np.zeros(s * s, dtype=complex)
        for j in range(s):
            for i in range(s):
                v[i * s + j] += e[i, j]
        chi += np.outer(v, v.conj())
    return chi


def trace_norm_distance(a, b):
    return 0.5 * float(np.sum(np.abs(jacobi_eigenvalues(np.asarray(a) - np.asarray(b)))))


def random_density(rng, d, rank=None):
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_unitary(rng, d):
    z = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))
