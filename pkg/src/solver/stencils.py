"""Finite-difference stencils on full lattices.

All functions return arrays shaped like ``u`` (plus derivative axes);
values on the outermost layer wrap around and are never read, because
only interior nodes are updated.
"""

from dataclasses import dataclass

import numpy as np

from src.operators import GradientMode, OperatorSpec


def _shift(u: np.ndarray, axis: int, k: int) -> np.ndarray:
    """u at index i + k along axis."""
    return np.roll(u, -k, axis=axis)


@dataclass(frozen=True)
class Differences:
    """One-sided, centered and second differences of a lattice function."""

    forward: np.ndarray
    backward: np.ndarray
    hessian: np.ndarray

    @property
    def centered(self) -> np.ndarray:
        return 0.5 * (self.forward + self.backward)

    def restrict(self, mask: np.ndarray) -> "Differences":
        """Values at the nodes selected by a boolean lattice mask."""
        return Differences(
            forward=self.forward[mask],
            backward=self.backward[mask],
            hessian=self.hessian[mask],
        )


def differences(u: np.ndarray, h: float) -> Differences:
    n = u.ndim
    forward = np.stack([(_shift(u, i, 1) - u) / h for i in range(n)], axis=-1)
    backward = np.stack([(u - _shift(u, i, -1)) / h for i in range(n)], axis=-1)
    hessian = np.empty(u.shape + (n, n))
    for i in range(n):
        hessian[..., i, i] = (_shift(u, i, 1) - 2.0 * u + _shift(u, i, -1)) / (h * h)
        for j in range(i + 1, n):
            pp = _shift(_shift(u, i, 1), j, 1)
            pm = _shift(_shift(u, i, 1), j, -1)
            mp = _shift(_shift(u, i, -1), j, 1)
            mm = _shift(_shift(u, i, -1), j, -1)
            cross = (pp - pm - mp + mm) / (4.0 * h * h)
            hessian[..., i, j] = cross
            hessian[..., j, i] = cross
    return Differences(forward=forward, backward=backward, hessian=hessian)


def upwind_gradient_norm(d: Differences, outward: bool) -> np.ndarray:
    """Monotone approximations of |Du|.

    outward=True suits +b|Du| (nondecreasing in neighbours):
    sqrt(Σ max(D⁺u, -D⁻u, 0)²). outward=False suits -b|Du|:
    sqrt(Σ max(D⁻u, -D⁺u, 0)²).
    """
    if outward:
        parts = np.maximum(np.maximum(d.forward, -d.backward), 0.0)
    else:
        parts = np.maximum(np.maximum(d.backward, -d.forward), 0.0)
    return np.sqrt(np.sum(parts * parts, axis=-1))


def upwind_drift(d: Differences, drift: np.ndarray) -> np.ndarray:
    """η·Du with forward differences where η_i > 0, backward where η_i < 0."""
    positive = np.maximum(drift, 0.0)
    negative = np.minimum(drift, 0.0)
    return d.forward @ positive + d.backward @ negative


def upwind_first_order(
    spec: OperatorSpec, d: Differences, b: np.ndarray
) -> np.ndarray:
    """±b|Du| + drift·Du with monotone one-sided differences.

    ``b`` must broadcast against the node axes of ``d``.
    """
    if spec.gradient_mode is GradientMode.PLUS:
        term = b * upwind_gradient_norm(d, outward=True)
    elif spec.gradient_mode is GradientMode.MINUS:
        term = -b * upwind_gradient_norm(d, outward=False)
    else:
        term = np.zeros(d.forward.shape[:-1])
    drift = spec.coeffs.drift_vector(spec.dimension)
    if np.any(drift != 0.0):
        term = term + upwind_drift(d, drift)
    return term
