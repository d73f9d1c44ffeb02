"""Kraus-operator quantum operations and T1/T2 relaxation channels."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import StructureError, ValidationError
from .state import DensityMatrix

COMPLETENESS_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class KrausChannel:
    """An ordered set of Kraus operators ``E_k`` of shape ``(dim_out, dim_in)``.

    Completeness ``sum_k E_k^dag E_k = I`` is checked on construction.
    """

    operators: tuple
    tol: float = COMPLETENESS_TOL

    def __post_init__(self):
        ops = [np.array(e, dtype=complex) for e in self.operators]
        if not ops:
            raise StructureError("a channel needs at least one Kraus operator")
        shape = ops[0].shape
        if len(shape) != 2 or any(e.shape != shape for e in ops):
            raise StructureError("Kraus operators must be 2-d matrices of one common shape")
        stack = np.stack(ops)
        if not np.all(np.isfinite(stack)):
            raise ValidationError("Kraus operators have non-finite entries")
        dev = completeness_error(stack)
        if dev > self.tol:
            raise ValidationError(f"Kraus operators are not complete (max deviation {dev:.3e})")
        stack.setflags(write=False)
        object.__setattr__(self, "operators", tuple(stack))
        object.__setattr__(self, "_stack", stack)

    @property
    def dim_in(self) -> int:
        return self._stack.shape[2]

    @property
    def dim_out(self) -> int:
        return self._stack.shape[1]

    @property
    def stack(self) -> np.ndarray:
        """Operators as one ``(m, dim_out, dim_in)`` array."""
        return self._stack

    def __len__(self):
        return self._stack.shape[0]

    def __call__(self, rho):
        return apply_channel(self, rho)


def completeness_error(ops) -> float:
    stack = np.asarray(ops, dtype=complex)
    gram = np.einsum("kij,kil->jl", stack.conj(), stack)
    return float(np.max(np.abs(gram - np.eye(stack.shape[2]))))


def _check_gamma(gamma, name):
    g = float(gamma)
    if not (0.0 <= g <= 1.0):
        raise ValidationError(f"{name} must lie in [0, 1], got {gamma!r}")
    return g


def _amplitude_damping_ops(gamma):
    return [
        np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex),
        np.array([[0.0, math.sqrt(gamma)], [0.0, 0.0]], dtype=complex),
    ]


def _phase_damping_ops(gamma):
    return [
        np.array([[1.0, 0.0], [0.0, math.sqrt(1.0 - gamma)]], dtype=complex),
        np.array([[0.0, 0.0], [0.0, math.sqrt(gamma)]], dtype=complex),
    ]


def amplitude_damping(gamma_a: float) -> KrausChannel:
    """Energy relaxation ``|1> -> |0>`` with decay probability ``gamma_a``."""
    return KrausChannel(tuple(_amplitude_damping_ops(_check_gamma(gamma_a, "gamma_a"))))


def phase_damping(gamma_p: float) -> KrausChannel:
    """Pure dephasing; coherences shrink by ``sqrt(1 - gamma_p)``, populations untouched."""
    return KrausChannel(tuple(_phase_damping_ops(_check_gamma(gamma_p, "gamma_p"))))


@dataclass(frozen=True)
class RelaxationParams:
    """Relaxation over a duration ``t`` for given T1 and T2 (common time unit).

    ``t2_pure = 2*T1*T2 / (2*T1 - T2)`` isolates the dephasing not caused by
    energy decay; it is infinite when ``T2 == 2*T1``.
    """

    t: float
    t1: float
    t2: float

    def __post_init__(self):
        t, t1, t2 = float(self.t), float(self.t1), float(self.t2)
        if any(math.isnan(x) for x in (t, t1, t2)):
            raise ValidationError("relaxation parameters must not be NaN")
        if t < 0 or math.isinf(t):
            raise ValidationError(f"duration t must be finite and >= 0, got {self.t!r}")
        if t1 <= 0:
            raise ValidationError(f"T1 must be > 0, got {self.t1!r}")
        if t2 <= 0:
            raise ValidationError(f"T2 must be > 0, got {self.t2!r}")
        if t2 > 2 * t1:
            raise ValidationError(
                f"unphysical: pure dephasing time negative (T2={self.t2!r} > 2*T1={2 * t1!r})"
            )
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "t1", t1)
        object.__setattr__(self, "t2", t2)

    @property
    def t2_pure(self) -> float:
        if math.isinf(self.t1):
            return self.t2
        denom = 2.0 * self.t1 - self.t2
        if denom <= 0.0 or math.isinf(self.t2):
            return math.inf
        return 2.0 * self.t1 * self.t2 / denom

    @property
    def gamma_a(self) -> float:
        return -math.expm1(-self.t / self.t1)

    @property
    def gamma_p(self) -> float:
        return -math.expm1(-self.t / self.t2_pure)


def relaxation_params(t: float, T1: float, T2: float) -> RelaxationParams:
    return RelaxationParams(t, T1, T2)


def _as_density(rho):
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def apply_to_matrix(ch: KrausChannel, m: np.ndarray) -> np.ndarray:
    """``sum_k E_k m E_k^dag`` on a raw array, no validation of the result."""
    s = ch.stack
    return np.einsum("kij,jl,kml->im", s, m, s.conj())


def apply_channel(ch: KrausChannel, rho) -> DensityMatrix:
    rho = _as_density(rho)
    if rho.dim != ch.dim_in:
        raise StructureError(f"channel input dim {ch.dim_in} does not match state dim {rho.dim}")
    out = apply_to_matrix(ch, rho.matrix)
    dims = rho.subsystem_dims if ch.dim_out == ch.dim_in else None
    return DensityMatrix(0.5 * (out + out.conj().T), dims)


def unitary_channel(u, tol: float = 1e-10) -> KrausChannel:
    u = np.array(u, dtype=complex)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise StructureError(f"unitary must be square, got shape {u.shape}")
    dev = np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0])))
    if dev > tol:
        raise ValidationError(f"matrix is not unitary (max deviation {dev:.3e})")
    return KrausChannel((u,), tol=max(COMPLETENESS_TOL, tol))


def identity_channel(dim: int) -> KrausChannel:
    return KrausChannel((np.eye(dim, dtype=complex),))


def compose(first: KrausChannel, second: KrausChannel) -> KrausChannel:
    """Channel that applies ``first`` and then ``second``.

    All ``|first| * |second|`` products ``F_j E_k`` are kept, zero ones included.
    """
    if first.dim_out != second.dim_in:
        raise StructureError(
            f"cannot compose: first.dim_out={first.dim_out} != second.dim_in={second.dim_in}"
        )
    prods = np.einsum("jab,kbc->jkac", second.stack, first.stack)
    prods = prods.reshape(-1, second.dim_out, first.dim_in)
    return KrausChannel(tuple(prods), tol=max(first.tol, second.tol))


def tensor_channel(a: KrausChannel, b: KrausChannel) -> KrausChannel:
    """``a`` on the left tensor factor, ``b`` on the right."""
    ops = [np.kron(ea, fb) for ea in a.stack for fb in b.stack]
    return KrausChannel(tuple(ops), tol=max(a.tol, b.tol))


def tensor_all(channels: Sequence[KrausChannel]) -> KrausChannel:
    out = channels[0]
    for ch in channels[1:]:
        out = tensor_channel(out, ch)
    return out


def relaxation_channel(params: RelaxationParams) -> KrausChannel:
    """Single-qubit relaxation over ``params.t``: amplitude damping, then dephasing."""
    return compose(amplitude_damping(params.gamma_a), phase_damping(params.gamma_p))


def qubit_relaxation(t: float, T1: float, T2: float, n_qubits: int = 1) -> KrausChannel:
    """Independent identical relaxation on each of ``n_qubits`` qubits."""
    one = relaxation_channel(relaxation_params(t, T1, T2))
    return tensor_all([one] * int(n_qubits))
