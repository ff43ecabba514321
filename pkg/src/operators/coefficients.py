"""Lower-order coefficient fields of an operator.

Every field is a callable ``(x, t) -> values`` where ``x`` is shaped
(..., n) and the result broadcasts to x.shape[:-1]. Declared bounds are
checked on every evaluation.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from src.exceptions import CoefficientBoundError, MalformedOperatorError

ScalarField = Callable[[np.ndarray, float], "np.ndarray | float"]

_BOUND_SLACK = 1e-12


@dataclass(frozen=True)
class ConstantField:
    """Spatially and temporally constant coefficient."""

    value: float

    def __call__(self, x: np.ndarray, t: float) -> np.ndarray:
        return np.full(np.shape(x)[:-1], float(self.value))


@dataclass(frozen=True)
class ShiftedField:
    """``inner(x + η (t - t1), t)``: a field seen from a straightened frame."""

    inner: ScalarField
    eta: Tuple[float, ...]
    t1: float

    def __call__(self, x: np.ndarray, t: float) -> "np.ndarray | float":
        shift = np.asarray(self.eta) * (t - self.t1)
        return self.inner(np.asarray(x) + shift, t)


def constant(value: float) -> ConstantField:
    return ConstantField(float(value))


def is_zero_field(f: ScalarField) -> bool:
    """True only for fields known to vanish identically."""
    if isinstance(f, ShiftedField):
        return is_zero_field(f.inner)
    return isinstance(f, ConstantField) and f.value == 0.0


@dataclass(frozen=True)
class CoefficientValues:
    """Coefficients sampled at a batch of points."""

    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    f: np.ndarray


@dataclass(frozen=True)
class CoefficientField:
    """b ≥ 0, c ≤ 0, forcing f, amplitude a > 0 and a constant drift vector."""

    b: ScalarField = field(default_factory=lambda: constant(0.0))
    c: ScalarField = field(default_factory=lambda: constant(0.0))
    f: ScalarField = field(default_factory=lambda: constant(0.0))
    b_sup: float = 0.0
    c_abs_sup: float = 0.0
    drift: Tuple[float, ...] = ()
    amplitude: ScalarField = field(default_factory=lambda: constant(1.0))
    a_inf: float = 1.0
    a_sup: float = 1.0

    def __post_init__(self) -> None:
        if self.b_sup < 0:
            raise MalformedOperatorError(f"b_sup must be >= 0, got {self.b_sup}")
        if self.c_abs_sup < 0:
            raise MalformedOperatorError(
                f"c_abs_sup must be >= 0, got {self.c_abs_sup}"
            )
        if not 0 < self.a_inf <= self.a_sup:
            raise MalformedOperatorError(
                f"Amplitude bounds must satisfy 0 < a_inf <= a_sup, "
                f"got ({self.a_inf}, {self.a_sup})"
            )
        if not all(np.isfinite(v) for v in self.drift):
            raise MalformedOperatorError("Drift vector must be finite")

    @classmethod
    def constants(
        cls,
        b: float = 0.0,
        c: float = 0.0,
        f: float = 0.0,
        drift: Optional[Sequence[float]] = None,
        amplitude: float = 1.0,
    ) -> "CoefficientField":
        """Constant coefficients with tight declared bounds."""
        if b < 0:
            raise MalformedOperatorError(f"b must be >= 0, got {b}")
        if c > 0:
            raise MalformedOperatorError(f"c must be <= 0, got {c}")
        return cls(
            b=constant(b),
            c=constant(c),
            f=constant(f),
            b_sup=float(b),
            c_abs_sup=float(abs(c)),
            drift=tuple(float(v) for v in (drift or ())),
            amplitude=constant(amplitude),
            a_inf=float(amplitude),
            a_sup=float(amplitude),
        )

    def drift_vector(self, n: int) -> np.ndarray:
        if not self.drift:
            return np.zeros(n)
        if len(self.drift) != n:
            raise MalformedOperatorError(
                f"Drift has {len(self.drift)} components, operator dimension is {n}"
            )
        return np.asarray(self.drift, dtype=float)

    @property
    def drift_norm(self) -> float:
        return float(np.linalg.norm(self.drift)) if self.drift else 0.0

    @property
    def first_order_bound(self) -> float:
        """Bound for the first-order part: b_sup + |drift|."""
        return self.b_sup + self.drift_norm

    @property
    def has_lower_order_terms(self) -> bool:
        return not (
            is_zero_field(self.b)
            and is_zero_field(self.c)
            and is_zero_field(self.f)
            and self.drift_norm == 0.0
        )

    @property
    def forcing_free(self) -> bool:
        return is_zero_field(self.f)

    def evaluate(self, x: np.ndarray, t: float) -> CoefficientValues:
        """Sample all fields and enforce the declared bounds."""
        shape = np.shape(x)[:-1]
        a = np.broadcast_to(np.asarray(self.amplitude(x, t), dtype=float), shape)
        b = np.broadcast_to(np.asarray(self.b(x, t), dtype=float), shape)
        c = np.broadcast_to(np.asarray(self.c(x, t), dtype=float), shape)
        f = np.broadcast_to(np.asarray(self.f(x, t), dtype=float), shape)

        if np.any(b < -_BOUND_SLACK) or np.any(b > self.b_sup + _BOUND_SLACK):
            raise CoefficientBoundError(
                f"b escaped [0, {self.b_sup}]: range [{b.min()}, {b.max()}]"
            )
        if np.any(c > _BOUND_SLACK) or np.any(c < -self.c_abs_sup - _BOUND_SLACK):
            raise CoefficientBoundError(
                f"c escaped [-{self.c_abs_sup}, 0]: range [{c.min()}, {c.max()}]"
            )
        if np.any(a < self.a_inf - _BOUND_SLACK) or np.any(
            a > self.a_sup + _BOUND_SLACK
        ):
            raise CoefficientBoundError(
                f"amplitude escaped [{self.a_inf}, {self.a_sup}]"
            )
        return CoefficientValues(a=a, b=b, c=c, f=f)

    def tilted(self, eta: Sequence[float], t1: float) -> "CoefficientField":
        """Coefficients in the frame x̃ = x - η (t - t1), drift increased by η."""
        eta_t = tuple(float(v) for v in eta)
        drift = self.drift_vector(len(eta_t)) + np.asarray(eta_t)

        def shift(g: ScalarField) -> ScalarField:
            if isinstance(g, ConstantField):
                return g
            return ShiftedField(inner=g, eta=eta_t, t1=t1)

        return CoefficientField(
            b=shift(self.b),
            c=shift(self.c),
            f=shift(self.f),
            b_sup=self.b_sup,
            c_abs_sup=self.c_abs_sup,
            drift=tuple(float(v) for v in drift),
            amplitude=shift(self.amplitude),
            a_inf=self.a_inf,
            a_sup=self.a_sup,
        )
