"""Space-time cylinders and the change of variables straightening an inclined axis.

With x̃ = x - η(t - t1) a function u on an inclined cylinder becomes
ũ(x̃, t) = u(x̃ + η(t - t1), t). Spatial derivatives are unchanged and
∂t ũ = ∂t u + η·Du, so F(u) - ∂t u = F̃(ũ) - ∂t ũ where F̃ carries the
coefficients composed with the substitution and an extra drift term
+η·D̃ũ.
"""

from dataclasses import dataclass, replace
from typing import Callable, Sequence, Tuple

import numpy as np

from src.exceptions import GeometryError
from src.operators import OperatorSpec

SpaceTimeFunction = Callable[[np.ndarray, float], "np.ndarray | float"]


def _as_tuple(values: Sequence[float]) -> Tuple[float, ...]:
    return tuple(float(v) for v in values)


@dataclass(frozen=True)
class Cylinder:
    """{|x - x0| < R, t1 < t < t2}."""

    x0: Tuple[float, ...]
    R: float
    t1: float
    t2: float

    def __post_init__(self) -> None:
        if not self.x0:
            raise GeometryError("Cylinder center must have at least one component")
        if not self.R > 0:
            raise GeometryError(f"Cylinder radius must be positive, got {self.R}")
        if not self.t1 < self.t2:
            raise GeometryError(f"Need t1 < t2, got t1={self.t1}, t2={self.t2}")

    @classmethod
    def create(
        cls, x0: Sequence[float], R: float, t1: float, t2: float
    ) -> "Cylinder":
        return cls(x0=_as_tuple(x0), R=float(R), t1=float(t1), t2=float(t2))

    @property
    def n(self) -> int:
        return len(self.x0)

    @property
    def center(self) -> np.ndarray:
        return np.asarray(self.x0, dtype=float)

    def contains(self, x: Sequence[float], t: float) -> bool:
        """Strict interior membership."""
        dist = float(np.linalg.norm(np.asarray(x, dtype=float) - self.center))
        return dist < self.R and self.t1 < t < self.t2


@dataclass(frozen=True)
class InclinedCylinder:
    """{|x - [x0 + η(t - t1)]| < R, t1 < t < t2}."""

    base: Cylinder
    eta: Tuple[float, ...]

    def __post_init__(self) -> None:
        if len(self.eta) != self.base.n:
            raise GeometryError(
                f"Tilt has {len(self.eta)} components, cylinder dimension is "
                f"{self.base.n}"
            )

    @classmethod
    def create(
        cls,
        x0: Sequence[float],
        R: float,
        t1: float,
        t2: float,
        eta: "Sequence[float] | None" = None,
    ) -> "InclinedCylinder":
        base = Cylinder.create(x0, R, t1, t2)
        return cls(base=base, eta=_as_tuple(eta if eta is not None else [0.0] * base.n))

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def velocity(self) -> np.ndarray:
        return np.asarray(self.eta, dtype=float)

    def axis(self, t: float) -> np.ndarray:
        """Axis point x0 + η(t - t1)."""
        return self.base.center + self.velocity * (t - self.base.t1)

    def contains(self, x: Sequence[float], t: float) -> bool:
        dist = float(np.linalg.norm(np.asarray(x, dtype=float) - self.axis(t)))
        return dist < self.base.R and self.base.t1 < t < self.base.t2


def tilt_transform(ic: InclinedCylinder) -> Tuple[Cylinder, Tuple[float, ...]]:
    """Straightened cylinder and the drift η added to the first-order term."""
    return ic.base, ic.eta


def straighten(ic: InclinedCylinder, x: np.ndarray, t: float) -> np.ndarray:
    """x̃ = x - η(t - t1); works on (..., n) arrays."""
    return np.asarray(x, dtype=float) - ic.velocity * (t - ic.base.t1)


def unstraighten(ic: InclinedCylinder, x_tilde: np.ndarray, t: float) -> np.ndarray:
    """x = x̃ + η(t - t1)."""
    return np.asarray(x_tilde, dtype=float) + ic.velocity * (t - ic.base.t1)


def pull_back(ic: InclinedCylinder, u: SpaceTimeFunction) -> SpaceTimeFunction:
    """ũ(x̃, t) = u(x̃ + η(t - t1), t)."""

    def straightened(x_tilde: np.ndarray, t: float) -> "np.ndarray | float":
        return u(unstraighten(ic, x_tilde, t), t)

    return straightened


def push_forward(ic: InclinedCylinder, u_tilde: SpaceTimeFunction) -> SpaceTimeFunction:
    """u(x, t) = ũ(x - η(t - t1), t)."""

    def tilted(x: np.ndarray, t: float) -> "np.ndarray | float":
        return u_tilde(straighten(ic, x, t), t)

    return tilted


def tilt_operator(spec: OperatorSpec, ic: InclinedCylinder) -> OperatorSpec:
    """Operator acting on ũ: coefficients composed with the substitution, drift + η.

    Its evaluation at x̃ equals the original operator at x = x̃ + η(t - t1)
    plus η·p.
    """
    if spec.dimension != ic.n:
        raise GeometryError(
            f"Operator dimension {spec.dimension} differs from "
            f"cylinder dimension {ic.n}"
        )
    _, eta = tilt_transform(ic)
    return replace(spec, coeffs=spec.coeffs.tilted(eta, ic.base.t1))
