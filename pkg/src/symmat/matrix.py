"""Dense symmetric matrices and a cyclic Jacobi eigenvalue solver.

SymMat stores each off-diagonal entry once (upper triangle, row-major), so
the represented matrix is symmetric by construction. The Jacobi solver is
vectorized over stacks of matrices shaped ``(..., n, n)`` so the solver
module can evaluate eigenvalue-based operators on whole grids at once.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from src.exceptions import DimensionMismatchError, NonFiniteMatrixError
from src.utils.constants import DEFAULT_JACOBI_MAX_SWEEPS, DEFAULT_JACOBI_TOLERANCE


def _triangle_size(n: int) -> int:
    return n * (n + 1) // 2


@dataclass(frozen=True)
class SymMat:
    """Symmetric n x n real matrix (the Hessian slot of an operator)."""

    n: int
    coeffs: Tuple[float, ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DimensionMismatchError(f"Dimension must be >= 1, got {self.n}")
        if len(self.coeffs) != _triangle_size(self.n):
            raise DimensionMismatchError(
                f"Expected {_triangle_size(self.n)} upper-triangle entries "
                f"for n={self.n}, got {len(self.coeffs)}"
            )
        if not all(np.isfinite(c) for c in self.coeffs):
            raise NonFiniteMatrixError("Matrix entries must be finite")

    @classmethod
    def from_array(cls, array: "np.ndarray | Sequence[Sequence[float]]") -> "SymMat":
        """Build from a square array; the upper triangle is authoritative."""
        a = np.asarray(array, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionMismatchError(f"Expected a square matrix, got {a.shape}")
        if not np.all(np.isfinite(a)):
            raise NonFiniteMatrixError("Matrix entries must be finite")
        rows, cols = np.triu_indices(a.shape[0])
        return cls(n=a.shape[0], coeffs=tuple(float(v) for v in a[rows, cols]))

    @classmethod
    def zeros(cls, n: int) -> "SymMat":
        return cls(n=n, coeffs=(0.0,) * _triangle_size(n))

    @classmethod
    def identity(cls, n: int) -> "SymMat":
        return cls.from_array(np.eye(n))

    @classmethod
    def diag(cls, values: Iterable[float]) -> "SymMat":
        return cls.from_array(np.diag(np.asarray(list(values), dtype=float)))

    @classmethod
    def outer(cls, v: Sequence[float]) -> "SymMat":
        """v ⊗ v."""
        vec = np.asarray(v, dtype=float)
        return cls.from_array(np.outer(vec, vec))

    def to_array(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        rows, cols = np.triu_indices(self.n)
        a[rows, cols] = self.coeffs
        a[cols, rows] = self.coeffs
        return a

    @property
    def trace(self) -> float:
        return float(np.trace(self.to_array()))

    @property
    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.linalg.norm(self.to_array()))

    def rotated(self, rotation: np.ndarray) -> "SymMat":
        """R m Rᵀ."""
        r = np.asarray(rotation, dtype=float)
        return SymMat.from_array(r @ self.to_array() @ r.T)

    def _check_same_dimension(self, other: "SymMat") -> None:
        if self.n != other.n:
            raise DimensionMismatchError(f"Dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other: "SymMat") -> "SymMat":
        self._check_same_dimension(other)
        return SymMat(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "SymMat") -> "SymMat":
        self._check_same_dimension(other)
        return SymMat(self.n, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "SymMat":
        return SymMat(self.n, tuple(-a for a in self.coeffs))

    def __mul__(self, scalar: float) -> "SymMat":
        return SymMat(self.n, tuple(float(scalar) * a for a in self.coeffs))

    __rmul__ = __mul__


@dataclass(frozen=True)
class EigenDecomp:
    """Eigenvalues sorted ascending."""

    values: Tuple[float, ...]

    @property
    def n(self) -> int:
        return len(self.values)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.values)


def jacobi_eigenvalues(
    matrices: np.ndarray,
    tolerance: float = DEFAULT_JACOBI_TOLERANCE,
    max_sweeps: int = DEFAULT_JACOBI_MAX_SWEEPS,
) -> np.ndarray:
    """Eigenvalues of a stack of symmetric matrices, sorted ascending.

    Cyclic Jacobi: every sweep annihilates each (p, q) pair once, applied to
    the whole stack simultaneously. Iterates until the off-diagonal Frobenius
    norm of every matrix is below ``tolerance`` (floored at round-off level
    for large entries) or ``max_sweeps`` is reached.

    Args:
        matrices: array shaped (..., n, n)
        tolerance: absolute off-diagonal tolerance
        max_sweeps: sweep cap

    Returns:
        Array shaped (..., n)
    """
    a = np.array(matrices, dtype=float, copy=True)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise DimensionMismatchError(f"Expected (..., n, n) stack, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise NonFiniteMatrixError("Matrix entries must be finite")

    n = a.shape[-1]
    if n == 1:
        return a[..., 0, :].copy()

    a = 0.5 * (a + np.swapaxes(a, -1, -2))
    scale = np.max(np.abs(a)) if a.size else 0.0
    threshold = max(tolerance, 8.0 * np.finfo(float).eps * scale * n)
    upper = np.triu_indices(n, k=1)

    for _ in range(max_sweeps):
        off = np.sqrt(2.0 * np.sum(a[..., upper[0], upper[1]] ** 2, axis=-1))
        if not np.any(off > threshold):
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[..., p, q]
                active = np.abs(apq) > 0.0
                safe_apq = np.where(active, apq, 1.0)
                theta = (a[..., q, q] - a[..., p, p]) / (2.0 * safe_apq)
                sign = np.where(theta >= 0.0, 1.0, -1.0)
                t = np.where(
                    active, sign / (np.abs(theta) + np.sqrt(theta * theta + 1.0)), 0.0
                )
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c

                rot = np.broadcast_to(np.eye(n), a.shape).copy()
                rot[..., p, p] = c
                rot[..., q, q] = c
                rot[..., p, q] = s
                rot[..., q, p] = -s
                a = np.swapaxes(rot, -1, -2) @ a @ rot
                a[..., p, q] = 0.0
                a[..., q, p] = 0.0

    return np.sort(np.diagonal(a, axis1=-2, axis2=-1), axis=-1)


def eigenvalues(
    m: SymMat,
    tolerance: float = DEFAULT_JACOBI_TOLERANCE,
    max_sweeps: int = DEFAULT_JACOBI_MAX_SWEEPS,
) -> EigenDecomp:
    """Eigenvalues of ``m`` sorted ascending."""
    values = jacobi_eigenvalues(m.to_array(), tolerance, max_sweeps)
    return EigenDecomp(values=tuple(float(v) for v in values))


def as_stack(m: "SymMat | np.ndarray") -> np.ndarray:
    """Accept a SymMat or a (..., n, n) array and return the array form."""
    if isinstance(m, SymMat):
        return m.to_array()
    return np.asarray(m, dtype=float)
