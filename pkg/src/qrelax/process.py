"""Choi/chi matrices of channels, Markov-sliced noisy gates and negativity dynamics.

The chi matrix of an ``s``-level channel is ``s`` times the Choi state obtained
by sending register A of ``sum_j |j>_A |j>_B / sqrt(s)`` through the channel.
Register A is the left tensor factor, so ``chi[(i, j), (k, l)]`` pairs system
index ``i``/``k`` with reference index ``j``/``l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np
from scipy.linalg import schur

from . import state
from .channels import KrausChannel, qubit_relaxation, unitary_channel
from .errors import StructureError, ValidationError
from .state import DensityMatrix

CHI_TOL = 1e-10

SliceOrder = Literal["gate-noise", "noise-gate"]


@dataclass(frozen=True, eq=False)
class ChiMatrix:
    s: int
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        n = int(self.s) ** 2
        if m.shape != (n, n):
            raise StructureError(f"chi matrix for s={self.s} must be {n}x{n}, got {m.shape}")
        dev = np.max(np.abs(m - m.conj().T))
        if dev > CHI_TOL:
            raise ValidationError(f"chi matrix not Hermitian (deviation {dev:.3e})")
        m = 0.5 * (m + m.conj().T)
        tr = np.trace(m).real
        if abs(tr - self.s) > CHI_TOL:
            raise ValidationError(f"chi matrix trace {tr!r} != s={self.s}")
        eigs = np.linalg.eigvalsh(m)
        if eigs[0] < -CHI_TOL * self.s:
            raise ValidationError(f"chi matrix not PSD (min eigenvalue {eigs[0]:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "s", int(self.s))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_eigs", eigs)

    def eigenvalues(self) -> np.ndarray:
        return self._eigs.copy()

    def rank(self, floor: float = CHI_TOL) -> int:
        return int(np.sum(np.abs(self._eigs) > floor))

    def choi_state(self) -> DensityMatrix:
        """The normalized Choi state ``chi / s`` with dims ``(s, s)``."""
        return DensityMatrix(self.matrix / self.s, (self.s, self.s))


def chi_trace_distance(a: ChiMatrix, b: ChiMatrix) -> float:
    """Trace distance between the normalized Choi states ``a/s`` and ``b/s``."""
    if a.s != b.s:
        raise StructureError(f"cannot compare chi matrices with s={a.s} and s={b.s}")
    return state.trace_distance(a.matrix / a.s, b.matrix / b.s)


def _choi_apply(stack: np.ndarray, r: np.ndarray, s: int) -> np.ndarray:
    """``sum_k (E_k x I) r (E_k x I)^dag`` for an ``s^2 x s^2`` operator ``r``."""
    t = r.reshape(s, s, s, s)
    out = np.einsum("kia,abcd,kjc->ibjd", stack, t, stack.conj(), optimize=True)
    return out.reshape(s * s, s * s)


def _bell_projector(s: int) -> np.ndarray:
    v = state.max_entangled(s).amplitudes
    return np.outer(v, v.conj())


def chi_from_channel(ch: KrausChannel) -> ChiMatrix:
    if ch.dim_in != ch.dim_out:
        raise StructureError(f"chi matrix needs a square channel, got {ch.dim_out}x{ch.dim_in}")
    s = ch.dim_in
    r = _choi_apply(ch.stack, _bell_projector(s), s)
    return ChiMatrix(s, s * r)


def kraus_from_chi(chi: ChiMatrix, floor: float = 1e-15) -> KrausChannel:
    """Canonical (orthogonal) Kraus set of a chi matrix via its eigendecomposition."""
    s = chi.s
    lam, vecs = np.linalg.eigh(chi.matrix)
    keep = lam > floor
    if not np.any(keep):
        raise ValidationError("chi matrix has no eigenvalue above the floor")
    ops = [math.sqrt(l) * vecs[:, i].reshape(s, s) for i, l in zip(np.flatnonzero(keep), lam[keep])]
    return KrausChannel(tuple(ops))


def _check_unitary(u, tol=1e-10) -> np.ndarray:
    u = np.array(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise StructureError(f"unitary must be square, got shape {u.shape}")
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > tol:
        raise ValidationError(f"matrix is not unitary (max deviation {dev:.3e})")
    return u


def gate_fraction(u, n: int) -> np.ndarray:
    """Principal ``n``-th root of a unitary.

    Eigenphases are taken in (-pi, pi] and divided by ``n``; a complex Schur
    form supplies an orthonormal eigenbasis even for degenerate spectra.
    """
    u = _check_unitary(u)
    if int(n) != n or n < 1:
        raise ValidationError(f"slice count must be an integer >= 1, got {n!r}")
    n = int(n)
    if n == 1:
        return u.copy()
    t, z = schur(u, output="complex")
    theta = np.angle(np.diag(t))
    # -pi and pi are the same eigenvalue; pin the branch to +pi
    theta = np.where(theta <= -math.pi + 1e-12, math.pi, theta)
    return (z * np.exp(1j * theta / n)) @ z.conj().T


def sqisw() -> np.ndarray:
    """Square root of iSWAP."""
    r = 1.0 / math.sqrt(2.0)
    return np.array(
        [[1, 0, 0, 0], [0, r, 1j * r, 0], [0, 1j * r, r, 0], [0, 0, 0, 1]], dtype=complex
    )


def iswap() -> np.ndarray:
    return np.array([[1, 0, 0, 0], [0, 0, 1j, 0], [0, 1j, 0, 0], [0, 0, 0, 1]], dtype=complex)


@dataclass(frozen=True, eq=False)
class NoisyGateSpec:
    """A gate of duration ``t_gate`` split into ``n`` equal slices.

    Every qubit relaxes independently with the same ``t1``/``t2`` while the
    gate runs. Use ``math.inf`` for both to switch relaxation off.
    """

    gate: np.ndarray
    t_gate: float = 1.0
    n: int = 100
    t1: float = math.inf
    t2: float = math.inf
    order: SliceOrder = "gate-noise"
    n_qubits: int = field(init=False)

    def __post_init__(self):
        u = _check_unitary(self.gate)
        s = u.shape[0]
        nq = int(round(math.log2(s))) if s > 1 else 0
        if s < 2 or 2**nq != s:
            raise StructureError(f"gate dimension {s} is not a power of two")
        if int(self.n) != self.n or self.n < 1:
            raise ValidationError(f"slice count N must be an integer >= 1, got {self.n!r}")
        if not (float(self.t_gate) > 0 and math.isfinite(self.t_gate)):
            raise ValidationError(f"gate time must be finite and > 0, got {self.t_gate!r}")
        if self.order not in ("gate-noise", "noise-gate"):
            raise ValidationError(f"order must be 'gate-noise' or 'noise-gate', got {self.order!r}")
        u.setflags(write=False)
        object.__setattr__(self, "gate", u)
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "n_qubits", nq)
        # fail fast on unphysical T1/T2
        self.noise_channel()

    @property
    def s(self) -> int:
        return self.gate.shape[0]

    @property
    def dt(self) -> float:
        return float(self.t_gate) / self.n

    def noise_channel(self) -> KrausChannel:
        return qubit_relaxation(self.dt, self.t1, self.t2, self.n_qubits)

    def slice_unitary(self) -> np.ndarray:
        return gate_fraction(self.gate, self.n)

    def with_n(self, n: int) -> "NoisyGateSpec":
        return NoisyGateSpec(self.gate, self.t_gate, n, self.t1, self.t2, self.order)

    def with_order(self, order: SliceOrder) -> "NoisyGateSpec":
        return NoisyGateSpec(self.gate, self.t_gate, self.n, self.t1, self.t2, order)

    def ideal(self) -> "NoisyGateSpec":
        return NoisyGateSpec(self.gate, self.t_gate, self.n, math.inf, math.inf, self.order)


def _sliced_choi_states(spec: NoisyGateSpec, noisy: bool = True):
    """Yield the unnormalized-by-s Choi state after each of slices 0..N."""
    s = spec.s
    v = spec.slice_unitary()[None]
    noise = spec.noise_channel().stack if noisy else None
    r = _bell_projector(s)
    yield r
    for _ in range(spec.n):
        if spec.order == "gate-noise":
            r = _choi_apply(v, r, s)
            if noise is not None:
                r = _choi_apply(noise, r, s)
        else:
            if noise is not None:
                r = _choi_apply(noise, r, s)
            r = _choi_apply(v, r, s)
        r = 0.5 * (r + r.conj().T)
        yield r


def noisy_gate_chi(spec: NoisyGateSpec) -> ChiMatrix:
    """Chi matrix of ``[noise(dt) o slice]^N`` without materializing Kraus products."""
    r = None
    for r in _sliced_choi_states(spec):
        pass
    return ChiMatrix(spec.s, spec.s * r)


def noisy_gate_channel(spec: NoisyGateSpec) -> KrausChannel:
    """The sliced noisy gate as a canonical Kraus set (at most ``s^2`` operators).

    Composing the Kraus sets literally grows the operator count as
    ``m^N``; evolving the Choi state slice by slice and decomposing at the end
    gives the same channel.
    """
    return kraus_from_chi(noisy_gate_chi(spec))


def slicing_convergence(spec: NoisyGateSpec) -> float:
    """Trace distance between the chi matrices at N and 2N slices."""
    return chi_trace_distance(noisy_gate_chi(spec), noisy_gate_chi(spec.with_n(2 * spec.n)))


@dataclass(frozen=True)
class NegativityPoint:
    slice_index: int
    time: float
    negativity_ideal: float
    negativity_noisy: float


def negativity_dynamics(spec: NoisyGateSpec) -> list[NegativityPoint]:
    """Negativity of the Choi state (A|B split) after k = 0..N slices.

    The noise-free run with the same slicing is returned alongside.
    """
    s = spec.s
    out = []
    noisy = _sliced_choi_states(spec, noisy=True)
    ideal = _sliced_choi_states(spec, noisy=False)
    for k, (rn, ri) in enumerate(zip(noisy, ideal)):
        ni = state.negativity(DensityMatrix(ri, (s, s)))
        nn = state.negativity(DensityMatrix(rn, (s, s)))
        out.append(NegativityPoint(k, k * spec.dt, ni, nn))
    return out
