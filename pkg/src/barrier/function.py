"""Closed-form barrier v = M - α e^{-β(t - t')} φ(x), φ = (r0² - |x - x0|²)².

With w = r0² - ρ², ρ = |x - x0| and d = x - x0:

    Dφ  = -4 w d
    D²φ = 8 d⊗d - 4 w I      eigenvalues -4w (n-1 times) and 8ρ² - 4w
    Dv  = 4 α e^{-β(t-t')} w d
    D²v = -α e^{-β(t-t')} D²φ
    ∂t v = β α e^{-β(t-t')} φ
"""

from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from src.exceptions import InvalidBarrierParamsError
from src.symmat import Sign


@dataclass(frozen=True)
class BarrierParams:
    """Barrier centered at (x0, t') with radius r0 < 1."""

    n: int
    x0: Tuple[float, ...]
    t_prime: float
    r0: float
    alpha: float
    beta: float
    cap: float

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidBarrierParamsError(f"Dimension must be >= 1, got {self.n}")
        if len(self.x0) != self.n:
            raise InvalidBarrierParamsError(
                f"Center has {len(self.x0)} components, dimension is {self.n}"
            )
        if not 0.0 < self.r0 < 1.0:
            raise InvalidBarrierParamsError(f"r0 must lie in (0, 1), got {self.r0}")
        if self.alpha <= 0:
            raise InvalidBarrierParamsError(f"alpha must be positive, got {self.alpha}")
        if self.beta <= 0:
            raise InvalidBarrierParamsError(f"beta must be positive, got {self.beta}")
        if self.cap < 0:
            raise InvalidBarrierParamsError(f"Cap M must be >= 0, got {self.cap}")

    @property
    def center(self) -> np.ndarray:
        return np.asarray(self.x0, dtype=float)

    def decay(self, t: "float | np.ndarray") -> "float | np.ndarray":
        """α e^{-β(t - t')}."""
        return self.alpha * np.exp(-self.beta * (np.asarray(t) - self.t_prime))

    def axis_value(self, t: float) -> float:
        """v(x0, t) = M - α r0⁴ e^{-β(t - t')}."""
        return float(self.cap - self.decay(t) * self.r0**4)


@dataclass(frozen=True)
class BarrierValue:
    """Value, gradient and Hessian of v at one point."""

    value: float
    gradient: Tuple[float, ...]
    hessian: np.ndarray
    time_derivative: float


def phi_parts(
    params: BarrierParams, x: np.ndarray
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """(φ, Dφ, D²φ, w) for points shaped (..., n)."""
    d = np.asarray(x, dtype=float) - params.center
    rho2 = np.sum(d * d, axis=-1)
    w = params.r0**2 - rho2
    phi = w * w
    grad = -4.0 * w[..., None] * d
    eye = np.eye(params.n)
    hess = 8.0 * d[..., :, None] * d[..., None, :] - 4.0 * w[..., None, None] * eye
    return phi, grad, hess, w


def barrier_arrays(
    params: BarrierParams, x: np.ndarray, t: "float | np.ndarray"
) -> Tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized (v, Dv, D²v, ∂t v); ``t`` broadcasts against x.shape[:-1]."""
    phi, grad, hess, _ = phi_parts(params, x)
    e = np.asarray(params.decay(t), dtype=float)
    value = params.cap - e * phi
    gradient = -e[..., None] * grad
    hessian = -e[..., None, None] * hess
    time_derivative = params.beta * e * phi
    return value, gradient, hessian, time_derivative


def barrier_eval(
    params: BarrierParams, x: Sequence[float], t: float
) -> BarrierValue:
    """v and its derivatives at one point, t >= t'."""
    if t < params.t_prime:
        raise InvalidBarrierParamsError(
            f"Barrier is defined for t >= t'={params.t_prime}, got {t}"
        )
    point = np.asarray(x, dtype=float)
    if point.shape != (params.n,):
        raise InvalidBarrierParamsError(
            f"Point must have shape ({params.n},), got {point.shape}"
        )
    value, gradient, hessian, dt = barrier_arrays(params, point, t)
    return BarrierValue(
        value=float(value),
        gradient=tuple(float(g) for g in gradient),
        hessian=np.asarray(hessian),
        time_derivative=float(dt),
    )


def phi_eigenvalues(
    r0: float, rho: "float | np.ndarray"
) -> Tuple[np.ndarray, np.ndarray]:
    """(e1, e2): e1 = -4(r0² - ρ²) with multiplicity n-1, e2 = 12ρ² - 4r0²."""
    rho2 = np.asarray(rho, dtype=float) ** 2
    return -4.0 * (r0**2 - rho2), 12.0 * rho2 - 4.0 * r0**2


def pucci_phi(
    sign: "Sign | str",
    lam: float,
    big_lam: float,
    n: int,
    r0: float,
    rho: "float | np.ndarray",
) -> np.ndarray:
    """Two-regime closed form of M±(D²φ) at distance ρ from the center.

    The switch is at ρ² = r0²/3 where 12ρ² - 4r0² changes sign.
    """
    rho2 = np.asarray(rho, dtype=float) ** 2
    w = r0**2 - rho2
    inner = rho2 <= r0**2 / 3.0
    if Sign(sign) is Sign.MINUS:
        first = big_lam * (8.0 * rho2 - 4.0 * n * w)
        second = lam * (8.0 * rho2 - 4.0 * w) - 4.0 * big_lam * (n - 1) * w
    else:
        first = lam * (8.0 * rho2 - 4.0 * n * w)
        second = 8.0 * big_lam * rho2 - (4.0 * lam * (n - 1) + 4.0 * big_lam) * w
    return np.where(inner, first, second)


def pucci_barrier_hessian(
    params: BarrierParams,
    lam: float,
    big_lam: float,
    x: np.ndarray,
    t: "float | np.ndarray",
) -> np.ndarray:
    """M⁺(D²v) = -α e^{-β(t-t')} M⁻(D²φ), from the closed form."""
    rho = np.linalg.norm(np.asarray(x, dtype=float) - params.center, axis=-1)
    minus = pucci_phi(Sign.MINUS, lam, big_lam, params.n, params.r0, rho)
    return -np.asarray(params.decay(t)) * minus
