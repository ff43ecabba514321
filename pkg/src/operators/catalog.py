"""Evaluation of catalog operators.

``evaluate`` works on batches: ``x`` and ``p`` shaped (..., n), ``m``
shaped (..., n, n) and ``r`` shaped (...). The solver passes its own
upwinded first-order term; everything else uses the exact b|p| + drift·p.
"""

from typing import Optional

import numpy as np
import structlog

from src.exceptions import DimensionMismatchError, MalformedOperatorError
from src.exceptions import SingularGradientError
from src.symmat import SymMat, pucci_from_eigenvalues, pucci_truncated
from src.symmat import Sign, sorted_eigenvalues

from .spec import (
    GradientMode,
    OperatorKind,
    OperatorSpec,
    Optimize,
    SingularGradientMode,
)

logger = structlog.get_logger()


def _trace_against(a: SymMat, m: np.ndarray) -> np.ndarray:
    return np.einsum("ij,...ji->...", a.to_array(), m)


def _linear(spec: OperatorSpec, p: np.ndarray, m: np.ndarray) -> np.ndarray:
    if len(spec.params.matrices) != 1:
        raise MalformedOperatorError("Linear operator needs exactly one matrix")
    return _trace_against(spec.params.matrices[0], m)


def _bellman(spec: OperatorSpec, p: np.ndarray, m: np.ndarray) -> np.ndarray:
    if not spec.params.matrices:
        raise MalformedOperatorError("Bellman operator needs a control family")
    values = np.stack([_trace_against(a, m) for a in spec.params.matrices], axis=-1)
    if spec.params.optimize is Optimize.INF:
        return values.min(axis=-1)
    return values.max(axis=-1)


def _isaacs(spec: OperatorSpec, p: np.ndarray, m: np.ndarray) -> np.ndarray:
    grid = spec.params.isaacs_matrices
    if not grid or not all(grid):
        raise MalformedOperatorError("Isaacs operator needs a non-empty matrix grid")
    # rows indexed by the outer (sup) control, columns by the inner (inf) one
    inner = [
        np.stack([_trace_against(a, m) for a in row], axis=-1).min(axis=-1)
        for row in grid
    ]
    return np.stack(inner, axis=-1).max(axis=-1)


def _pucci(spec: OperatorSpec, sign: Sign, m: np.ndarray) -> np.ndarray:
    return pucci_from_eigenvalues(sign, spec.lam, spec.big_lam, sorted_eigenvalues(m))


def _truncated(spec: OperatorSpec, p: np.ndarray, m: np.ndarray) -> np.ndarray:
    if spec.params.k is None:
        raise MalformedOperatorError("Truncated Pucci operator needs k")
    value = pucci_truncated(spec.params.sign, spec.lam, spec.big_lam, spec.params.k, m)
    return np.asarray(value, dtype=float)


def _p_laplacian(spec: OperatorSpec, p: np.ndarray, m: np.ndarray) -> np.ndarray:
    exponent = spec.params.exponent
    if exponent is None:
        raise MalformedOperatorError("p-Laplacian needs an exponent")
    trace = np.trace(m, axis1=-2, axis2=-1)
    norm = np.linalg.norm(p, axis=-1)
    regular = norm > 0.0
    direction = p / np.where(regular, norm, 1.0)[..., None]
    along = np.einsum("...i,...ij,...j->...", direction, m, direction)
    value = trace + (exponent - 2.0) * along

    if np.all(regular):
        return value

    mode = spec.params.singular_gradient
    if mode is SingularGradientMode.REJECT:
        raise SingularGradientError(
            "Normalized p-Laplacian evaluated at zero gradient in reject mode"
        )
    if mode is SingularGradientMode.SYMMETRIC:
        singular = trace
    else:
        values = sorted_eigenvalues(m)
        e_min, e_max = values[..., 0], values[..., -1]
        # largest or smallest value of (p-2) e over unit directions
        upper = np.where(exponent >= 2.0, e_max, e_min)
        lower = np.where(exponent >= 2.0, e_min, e_max)
        chosen = upper if mode is SingularGradientMode.UPPER_ENVELOPE else lower
        singular = trace + (exponent - 2.0) * chosen
    return np.where(regular, value, singular)


def _mcf(spec: OperatorSpec, p: np.ndarray, m: np.ndarray) -> np.ndarray:
    return np.sum(np.arctan(sorted_eigenvalues(m)), axis=-1)


def _custom(spec: OperatorSpec, p: np.ndarray, m: np.ndarray) -> np.ndarray:
    if spec.params.kernel is None:
        raise MalformedOperatorError("Custom operator needs a kernel")
    return np.asarray(spec.params.kernel(p, m), dtype=float)


def principal_part(spec: OperatorSpec, p: np.ndarray, m: np.ndarray) -> np.ndarray:
    """G(p, M), the second-order part before amplitude scaling."""
    m = np.asarray(m, dtype=float)
    p = np.asarray(p, dtype=float)
    n = spec.dimension
    if m.shape[-2:] != (n, n) or p.shape[-1] != n:
        raise DimensionMismatchError(
            f"Operator of dimension {n} got p{p.shape} and M{m.shape}"
        )
    kind = spec.kind
    if kind is OperatorKind.LINEAR:
        return _linear(spec, p, m)
    if kind is OperatorKind.BELLMAN:
        return _bellman(spec, p, m)
    if kind is OperatorKind.ISAACS:
        return _isaacs(spec, p, m)
    if kind is OperatorKind.PUCCI_PLUS:
        return _pucci(spec, Sign.PLUS, m)
    if kind is OperatorKind.PUCCI_MINUS:
        return _pucci(spec, Sign.MINUS, m)
    if kind is OperatorKind.TRUNCATED_PUCCI:
        return _truncated(spec, p, m)
    if kind is OperatorKind.NORMALIZED_P_LAPLACIAN:
        return _p_laplacian(spec, p, m)
    if kind is OperatorKind.LAGRANGIAN_MCF:
        return _mcf(spec, p, m)
    return _custom(spec, p, m)


def exact_first_order(
    spec: OperatorSpec, b: np.ndarray, p: np.ndarray
) -> np.ndarray:
    """±b|p| + drift·p evaluated with the exact gradient."""
    norm = np.linalg.norm(p, axis=-1)
    if spec.gradient_mode is GradientMode.PLUS:
        term = b * norm
    elif spec.gradient_mode is GradientMode.MINUS:
        term = -b * norm
    else:
        term = np.zeros_like(norm)
    return term + p @ spec.coeffs.drift_vector(spec.dimension)


def evaluate(
    spec: OperatorSpec,
    x: np.ndarray,
    t: float,
    r: np.ndarray,
    p: np.ndarray,
    m: np.ndarray,
    first_order: Optional[np.ndarray] = None,
) -> np.ndarray:
    """F(x, t, r, p, M) over a batch.

    Args:
        first_order: precomputed first-order term; exact b|p| + drift·p if None
    """
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    r = np.asarray(r, dtype=float)
    coeffs = spec.coeffs.evaluate(x, t)
    value = coeffs.a * principal_part(spec, p, m)
    if first_order is None:
        first_order = exact_first_order(spec, coeffs.b, p)
    return value + first_order + coeffs.c * r + coeffs.f


def eval_operator(
    spec: OperatorSpec,
    x: "np.ndarray | tuple",
    t: float,
    r: float,
    p: "np.ndarray | tuple",
    m: SymMat,
) -> float:
    """F at a single point."""
    if m.n != spec.dimension:
        raise DimensionMismatchError(
            f"Operator of dimension {spec.dimension} got a {m.n}x{m.n} matrix"
        )
    value = evaluate(
        spec,
        np.asarray(x, dtype=float),
        t,
        np.asarray(r, dtype=float),
        np.asarray(p, dtype=float),
        m.to_array(),
    )
    return float(value)
