"""Stationary diagonal quadratics u = Σ q_i x_i² with G(D²u) = 0."""

from typing import Tuple

import numpy as np

from src.exceptions import InvalidConfigError
from src.operators import OperatorSpec, principal_part

_MAX_BRACKET_DOUBLINGS = 60


def _principal(spec: OperatorSpec, q: np.ndarray) -> float:
    n = spec.dimension
    return float(principal_part(spec, np.zeros(n), np.diag(2.0 * q)))


def stationary_quadratic(
    spec: OperatorSpec, tolerance: float = 1e-14, max_iterations: int = 200
) -> Tuple[float, ...]:
    """Coefficients q = (-s, 1, ..., 1) with G(diag(2q)) = 0.

    G is nonincreasing in s by ellipticity, so s is found by bisection. In
    one dimension only q = 0 solves the equation.

    Raises:
        InvalidConfigError: the principal part depends on the gradient, or
            no sign change was found
    """
    if spec.direction_dependent:
        raise InvalidConfigError(
            f"{spec.label} depends on the gradient direction; "
            "stationary quadratics need a Hessian-only operator"
        )
    n = spec.dimension
    if n == 1:
        return (0.0,)

    def g(s: float) -> float:
        return _principal(spec, np.array([-s] + [1.0] * (n - 1)))

    if g(0.0) <= 0.0:
        return tuple([0.0] + [1.0] * (n - 1))

    lo, hi = 0.0, 1.0
    for _ in range(_MAX_BRACKET_DOUBLINGS):
        if g(hi) <= 0.0:
            break
        lo, hi = hi, 2.0 * hi
    else:
        raise InvalidConfigError(f"No stationary quadratic found for {spec.label}")

    for _ in range(max_iterations):
        if hi - lo <= tolerance * (1.0 + hi):
            break
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid

    s = lo if abs(g(lo)) <= abs(g(hi)) else hi
    return tuple([-s] + [1.0] * (n - 1))


def quadratic_residual(spec: OperatorSpec, q: Tuple[float, ...]) -> float:
    """|G(diag(2q))|."""
    return abs(_principal(spec, np.asarray(q, dtype=float)))
