"""Pucci extremal operators, full and truncated.

All functions accept a SymMat or a stack of matrices shaped (..., n, n) and
return a float or an array shaped (...). Eigenvalues with magnitude below
``1e-12 * (1 + ||m||)`` are zeroed; zero eigenvalues contribute nothing
under either coefficient.
"""

from enum import Enum
from typing import Union

import numpy as np

from src.exceptions import EllipticityError, MalformedOperatorError
from src.utils.constants import ZERO_EIGENVALUE_RTOL

from .matrix import SymMat, as_stack, jacobi_eigenvalues

MatrixLike = Union[SymMat, np.ndarray]


class Sign(str, Enum):
    """Which extremal operator."""

    PLUS = "plus"
    MINUS = "minus"


def validate_ellipticity(lam: float, big_lam: float) -> None:
    """Reject anything but 0 < λ ≤ Λ."""
    if not (np.isfinite(lam) and np.isfinite(big_lam)):
        raise EllipticityError("Ellipticity constants must be finite")
    if lam <= 0:
        raise EllipticityError(f"λ must be positive, got {lam}")
    if big_lam < lam:
        raise EllipticityError(f"Λ must be >= λ, got λ={lam}, Λ={big_lam}")


def _clean_eigenvalues(values: np.ndarray, stack: np.ndarray) -> np.ndarray:
    norm = np.sqrt(np.sum(stack * stack, axis=(-2, -1)))
    cutoff = ZERO_EIGENVALUE_RTOL * (1.0 + norm)
    return np.where(np.abs(values) < cutoff[..., None], 0.0, values)


def pucci_from_eigenvalues(
    sign: Sign, lam: float, big_lam: float, values: np.ndarray
) -> np.ndarray:
    """Weighted eigenvalue sum along the last axis."""
    positive = np.sum(np.where(values > 0.0, values, 0.0), axis=-1)
    negative = np.sum(np.where(values < 0.0, values, 0.0), axis=-1)
    if Sign(sign) is Sign.PLUS:
        return big_lam * positive + lam * negative
    return lam * positive + big_lam * negative


def _result(value: np.ndarray, m: MatrixLike) -> "float | np.ndarray":
    if isinstance(m, SymMat) or np.ndim(value) == 0:
        return float(value)
    return value


def sorted_eigenvalues(m: MatrixLike) -> np.ndarray:
    """Cleaned ascending eigenvalues of a matrix or stack."""
    stack = as_stack(m)
    return _clean_eigenvalues(jacobi_eigenvalues(stack), stack)


def pucci_extremal(
    sign: "Sign | str", lam: float, big_lam: float, m: MatrixLike
) -> "float | np.ndarray":
    """M⁺ (sign=plus) or M⁻ (sign=minus) with ellipticity (λ, Λ).

    M⁺(m) = Λ Σ_{e>0} e + λ Σ_{e<0} e, the supremum of Tr(A m) over
    λI ≤ A ≤ ΛI; M⁻ swaps the coefficients.
    """
    validate_ellipticity(lam, big_lam)
    values = sorted_eigenvalues(m)
    return _result(pucci_from_eigenvalues(Sign(sign), lam, big_lam, values), m)


def pucci_truncated(
    sign: "Sign | str", lam: float, big_lam: float, k: int, m: MatrixLike
) -> "float | np.ndarray":
    """Truncated Pucci operator over k eigenvalues.

    The minus operator sums the k smallest eigenvalues, the plus operator
    the k largest; k = n reproduces pucci_extremal.
    """
    validate_ellipticity(lam, big_lam)
    stack = as_stack(m)
    n = stack.shape[-1]
    if not 1 <= k <= n:
        raise MalformedOperatorError(f"Truncation k must lie in [1, {n}], got {k}")
    values = sorted_eigenvalues(stack)
    sign = Sign(sign)
    selected = values[..., :k] if sign is Sign.MINUS else values[..., n - k :]
    return _result(pucci_from_eigenvalues(sign, lam, big_lam, selected), m)
