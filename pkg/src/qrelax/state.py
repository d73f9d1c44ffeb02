"""Dense density-matrix primitives.

Tensor-factor convention: factor 0 is the left (most significant) factor of a
Kronecker product, so ``|j>|k>`` sits at flat index ``j * d_B + k``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import StructureError, ValidationError

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_FLOOR = 1e-10
EIG_ZERO = 1e-12


def _as_matrix(m) -> np.ndarray:
    a = np.array(m, dtype=complex)
    if a.ndim != 2:
        raise StructureError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError("matrix has non-finite entries")
    return a


@dataclass(frozen=True, eq=False)
class PureState:
    amplitudes: np.ndarray
    subsystem_dims: tuple[int, ...] | None = None

    def __post_init__(self):
        v = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(v)):
            raise ValidationError("state has non-finite amplitudes")
        norm = np.linalg.norm(v)
        if abs(norm - 1.0) > 1e-12:
            raise ValidationError(f"state is not normalized (norm={norm!r})")
        v.setflags(write=False)
        object.__setattr__(self, "amplitudes", v)
        _check_dims(self.subsystem_dims, v.size)
        if self.subsystem_dims is not None:
            object.__setattr__(self, "subsystem_dims", tuple(int(d) for d in self.subsystem_dims))

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, unit-trace, positive semidefinite matrix.

    Validated on construction; ``subsystem_dims`` (e.g. ``(2, 2)``) is needed
    only by bipartite operations such as :func:`partial_transpose`.
    """

    matrix: np.ndarray
    subsystem_dims: tuple[int, ...] | None = None
    _eigs: np.ndarray = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        m = _as_matrix(self.matrix)
        if m.shape[0] != m.shape[1]:
            raise StructureError(f"density matrix must be square, got {m.shape}")
        herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if herm > HERMITIAN_TOL:
            raise ValidationError(f"density matrix not Hermitian (deviation {herm:.3e})")
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValidationError(f"density matrix trace is {tr!r}, expected 1")
        eigs = np.linalg.eigvalsh(m)
        if eigs[0] < -PSD_FLOOR:
            raise ValidationError(f"density matrix not PSD (min eigenvalue {eigs[0]:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "_eigs", eigs)
        _check_dims(self.subsystem_dims, m.shape[0])
        if self.subsystem_dims is not None:
            object.__setattr__(self, "subsystem_dims", tuple(int(d) for d in self.subsystem_dims))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return self._eigs.copy()

    def with_dims(self, dims: Sequence[int]) -> "DensityMatrix":
        return DensityMatrix(self.matrix, tuple(dims))


def _check_dims(dims, n):
    if dims is None:
        return
    if any(int(d) < 1 for d in dims) or int(np.prod(dims)) != n:
        raise StructureError(f"subsystem dims {tuple(dims)} do not factor dimension {n}")


def density_from_pure(state: PureState) -> DensityMatrix:
    v = state.amplitudes
    return DensityMatrix(np.outer(v, v.conj()), state.subsystem_dims)


def max_entangled(s: int) -> PureState:
    """``sum_j |j>|j> / sqrt(s)`` on two ``s``-level registers."""
    if int(s) != s or s < 2:
        raise ValidationError(f"max_entangled needs s >= 2, got {s!r}")
    s = int(s)
    v = np.zeros(s * s, dtype=complex)
    v[np.arange(s) * (s + 1)] = 1.0 / np.sqrt(s)
    return PureState(v, (s, s))


def maximally_mixed(s: int, subsystem_dims=None) -> DensityMatrix:
    return DensityMatrix(np.eye(s, dtype=complex) / s, subsystem_dims)


def kron(a, b) -> np.ndarray:
    return np.kron(np.asarray(a, dtype=complex), np.asarray(b, dtype=complex))


def _subsystem_index(subsystem) -> int:
    if subsystem in (0, "A", "a"):
        return 0
    if subsystem in (1, "B", "b"):
        return 1
    raise StructureError(f"subsystem must be 0/'A' or 1/'B', got {subsystem!r}")


def partial_transpose(rho, subsystem=1, dims: Sequence[int] | None = None) -> np.ndarray:
    """Transpose one factor of a bipartite operator.

    ``rho`` may be a :class:`DensityMatrix` carrying ``subsystem_dims`` or a
    raw square array with ``dims`` given explicitly.
    """
    if isinstance(rho, DensityMatrix):
        m = rho.matrix
        dims = rho.subsystem_dims if dims is None else dims
    else:
        m = _as_matrix(rho)
    if dims is None or len(dims) != 2:
        raise StructureError("partial transpose needs exactly two subsystem dims")
    da, db = (int(d) for d in dims)
    if m.shape != (da * db, da * db):
        raise StructureError(f"dims {tuple(dims)} do not match matrix shape {m.shape}")
    t = m.reshape(da, db, da, db)
    if _subsystem_index(subsystem) == 0:
        t = t.transpose(2, 1, 0, 3)
    else:
        t = t.transpose(0, 3, 2, 1)
    return t.reshape(da * db, da * db)


def hermitian_eigenvalues(m, tol: float = 1e-10) -> np.ndarray:
    """Ascending real eigenvalues of a Hermitian matrix."""
    a = _as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise StructureError(f"matrix must be square, got {a.shape}")
    dev = np.max(np.abs(a - a.conj().T)) if a.size else 0.0
    if dev > tol:
        raise ValidationError(f"matrix not Hermitian (deviation {dev:.3e})")
    return np.linalg.eigvalsh(0.5 * (a + a.conj().T))


def negativity(rho: DensityMatrix, dims: Sequence[int] | None = None) -> float:
    """Sum of the magnitudes of the negative partial-transpose eigenvalues."""
    pt = partial_transpose(rho, 1, dims)
    lam = hermitian_eigenvalues(pt)
    lam = np.where(np.abs(lam) < EIG_ZERO, 0.0, lam)
    return float(0.5 * (np.sum(np.abs(lam)) - np.sum(lam)))


def purity(rho: DensityMatrix) -> float:
    m = rho.matrix if isinstance(rho, DensityMatrix) else _as_matrix(rho)
    # Tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
    return float(np.sum(np.abs(m) ** 2))


def rank(m, floor: float = PSD_FLOOR) -> int:
    return int(np.sum(np.abs(hermitian_eigenvalues(m)) > floor))


def trace_distance(a, b) -> float:
    """``0.5 * ||a - b||_1`` for Hermitian arrays of equal shape."""
    a = a.matrix if isinstance(a, DensityMatrix) else _as_matrix(a)
    b = b.matrix if isinstance(b, DensityMatrix) else _as_matrix(b)
    if a.shape != b.shape:
        raise StructureError(f"shape mismatch {a.shape} vs {b.shape}")
    return float(0.5 * np.sum(np.abs(hermitian_eigenvalues(a - b))))
