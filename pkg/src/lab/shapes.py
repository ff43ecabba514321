"""Named initial/boundary data shapes.

Every shape is time-independent and evaluates on point arrays shaped
(..., n). ``offset`` is added to all shapes.
"""

from typing import Callable, Dict, Optional, Sequence

import numpy as np

from src.config.experiment import ShapeDescriptor
from src.exceptions import InvalidConfigError

ShapeFunction = Callable[[np.ndarray, float], np.ndarray]


def _center(descriptor: ShapeDescriptor, default: np.ndarray) -> np.ndarray:
    if descriptor.center is None:
        return default
    center = np.asarray(descriptor.center, dtype=float)
    if center.shape != default.shape:
        raise InvalidConfigError(
            f"Shape center has {center.size} components, dimension is {default.size}"
        )
    return center


def _bump(d: ShapeDescriptor, c: np.ndarray) -> ShapeFunction:
    """amplitude (1 - |x-c|²/R²)³ inside the ball, 0 outside (C²)."""

    def value(x: np.ndarray, t: float) -> np.ndarray:
        s = np.sum((x - c) ** 2, axis=-1) / (d.radius * d.radius)
        return d.amplitude * np.maximum(1.0 - s, 0.0) ** 3 + d.offset

    return value


def _cosine_bump(d: ShapeDescriptor, c: np.ndarray) -> ShapeFunction:
    def value(x: np.ndarray, t: float) -> np.ndarray:
        rho = np.sqrt(np.sum((x - c) ** 2, axis=-1)) / d.radius
        inside = 0.5 * (1.0 + np.cos(np.pi * np.minimum(rho, 1.0)))
        return d.amplitude * inside + d.offset

    return value


def _quadratic(d: ShapeDescriptor, c: np.ndarray) -> ShapeFunction:
    n = c.size
    q = np.ones(n) if d.coefficients is None else np.asarray(d.coefficients, float)
    if q.shape != (n,):
        raise InvalidConfigError(
            f"Quadratic shape needs {n} coefficients, got {q.size}"
        )

    def value(x: np.ndarray, t: float) -> np.ndarray:
        return d.amplitude * np.sum(q * (x - c) ** 2, axis=-1) + d.offset

    return value


def _constant(d: ShapeDescriptor, c: np.ndarray) -> ShapeFunction:
    def value(x: np.ndarray, t: float) -> np.ndarray:
        return np.full(np.shape(x)[:-1], d.amplitude + d.offset)

    return value


def _smoothed_indicator(d: ShapeDescriptor, c: np.ndarray) -> ShapeFunction:
    """amplitude · ½(1 - tanh((|x-c| - R)/width))."""

    def value(x: np.ndarray, t: float) -> np.ndarray:
        rho = np.sqrt(np.sum((x - c) ** 2, axis=-1))
        return (
            d.amplitude * 0.5 * (1.0 - np.tanh((rho - d.radius) / d.width))
            + d.offset
        )

    return value


_BUILDERS: Dict[str, Callable[[ShapeDescriptor, np.ndarray], ShapeFunction]] = {
    "bump": _bump,
    "cosine_bump": _cosine_bump,
    "quadratic": _quadratic,
    "constant": _constant,
    "smoothed_indicator": _smoothed_indicator,
}

SHAPE_NAMES = tuple(_BUILDERS)


def make_shape(
    descriptor: ShapeDescriptor,
    n: int,
    center: Optional[Sequence[float]] = None,
) -> ShapeFunction:
    """Shape in dimension n; ``center`` applies when the descriptor has none."""
    default = np.zeros(n) if center is None else np.asarray(center, dtype=float)
    return _BUILDERS[descriptor.shape](descriptor, _center(descriptor, default))


def shifted(fn: ShapeFunction, amount: float) -> ShapeFunction:
    """fn + amount."""

    def value(x: np.ndarray, t: float) -> np.ndarray:
        return np.asarray(fn(x, t), dtype=float) + amount

    return value
