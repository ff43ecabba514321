"""Operator specifications.

An OperatorSpec is an immutable description of F(x, t, r, p, M): a
principal part chosen from the catalog, ellipticity constants and the
lower-order coefficient field.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Tuple

import numpy as np

from src.exceptions import EllipticityError, MalformedOperatorError
from src.symmat import Sign, SymMat, eigenvalues, validate_ellipticity

from .coefficients import CoefficientField

Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]

_BAND_SLACK = 1e-12


class OperatorKind(str, Enum):
    """Catalog members."""

    LINEAR = "linear"
    BELLMAN = "bellman"
    ISAACS = "isaacs"
    PUCCI_PLUS = "pucci_plus"
    PUCCI_MINUS = "pucci_minus"
    TRUNCATED_PUCCI = "truncated_pucci"
    NORMALIZED_P_LAPLACIAN = "normalized_p_laplacian"
    LAGRANGIAN_MCF = "lagrangian_mcf"
    CUSTOM = "custom"


class GradientMode(str, Enum):
    """Sign of the b|p| term."""

    NONE = "none"
    PLUS = "plus"
    MINUS = "minus"


class SingularGradientMode(str, Enum):
    """How the normalized p-Laplacian treats p = 0."""

    REJECT = "reject"
    UPPER_ENVELOPE = "upper_envelope"
    LOWER_ENVELOPE = "lower_envelope"
    SYMMETRIC = "symmetric"


class Optimize(str, Enum):
    SUP = "sup"
    INF = "inf"


@dataclass(frozen=True)
class OperatorParams:
    """Kind-specific parameters. Unused fields stay at their defaults."""

    matrices: Tuple[SymMat, ...] = ()
    isaacs_matrices: Tuple[Tuple[SymMat, ...], ...] = ()
    optimize: Optimize = Optimize.SUP
    exponent: Optional[float] = None
    k: Optional[int] = None
    sign: Sign = Sign.MINUS
    theta0: Optional[float] = None
    eigen_bound: Optional[float] = None
    singular_gradient: SingularGradientMode = SingularGradientMode.REJECT
    kernel: Optional[Kernel] = None


@dataclass(frozen=True)
class OperatorSpec:
    """F(x, t, r, p, M) = a(x,t)·G(p, M) + first-order terms + c r + f."""

    kind: OperatorKind
    dimension: int
    lam: float
    big_lam: float
    params: OperatorParams = field(default_factory=OperatorParams)
    coeffs: CoefficientField = field(default_factory=CoefficientField)
    gradient_mode: GradientMode = GradientMode.PLUS
    name: str = ""

    def __post_init__(self) -> None:
        if self.dimension < 1:
            raise MalformedOperatorError(
                f"Dimension must be >= 1, got {self.dimension}"
            )
        validate_ellipticity(self.lam, self.big_lam)
        for matrix in self.control_matrices:
            self._check_band(matrix)

    @property
    def ellipticity(self) -> Tuple[float, float]:
        return (self.lam, self.big_lam)

    @property
    def effective_ellipticity(self) -> Tuple[float, float]:
        """Ellipticity of the full operator, amplitude included."""
        return (self.coeffs.a_inf * self.lam, self.coeffs.a_sup * self.big_lam)

    @property
    def control_matrices(self) -> Tuple[SymMat, ...]:
        flat = tuple(self.params.matrices)
        for row in self.params.isaacs_matrices:
            flat += tuple(row)
        return flat

    @property
    def direction_dependent(self) -> bool:
        """Principal part depends on the gradient direction."""
        return self.kind is OperatorKind.NORMALIZED_P_LAPLACIAN

    @property
    def label(self) -> str:
        return self.name or self.kind.value

    def _check_band(self, matrix: SymMat) -> None:
        if matrix.n != self.dimension:
            raise MalformedOperatorError(
                f"Control matrix has dimension {matrix.n}, "
                f"operator dimension is {self.dimension}"
            )
        values = eigenvalues(matrix).values
        tol = _BAND_SLACK * (1.0 + self.big_lam)
        if values[0] < self.lam - tol or values[-1] > self.big_lam + tol:
            raise EllipticityError(
                f"Control matrix eigenvalues [{values[0]:.6g}, {values[-1]:.6g}] "
                f"leave the band [{self.lam}, {self.big_lam}]"
            )
