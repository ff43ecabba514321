"""Custom exceptions for smplab."""


class SmpLabError(Exception):
    """Base exception for smplab."""


class ConfigurationError(SmpLabError):
    """Configuration-related errors."""


class MissingConfigError(ConfigurationError):
    """Required configuration is missing."""


class InvalidConfigError(ConfigurationError):
    """Configuration is invalid."""


class UnknownExperimentError(ConfigurationError):
    """Experiment name is not registered."""


class MatrixError(SmpLabError):
    """Symmetric-matrix errors."""


class NonFiniteMatrixError(MatrixError):
    """Matrix has NaN or infinite entries."""


class DimensionMismatchError(MatrixError):
    """Operands have incompatible dimensions."""


class OperatorError(SmpLabError):
    """Operator construction or evaluation errors."""


class EllipticityError(OperatorError):
    """Ellipticity constants or control matrices outside the band."""


class UnknownOperatorError(OperatorError):
    """Operator kind is not in the catalog."""


class MalformedOperatorError(OperatorError):
    """Operator parameters are incomplete or inconsistent."""


class SingularGradientError(OperatorError):
    """Operator is undefined at a vanishing gradient."""


class CoefficientBoundError(OperatorError):
    """Coefficient value escaped its declared bound."""


class BarrierError(SmpLabError):
    """Barrier construction errors."""


class InvalidBarrierParamsError(BarrierError):
    """Barrier parameters violate their constraints."""


class GeometryError(SmpLabError):
    """Parabolic geometry errors."""


class ZeroDurationSegmentError(GeometryError):
    """Broken-line segment does not advance in time."""


class ContainmentError(GeometryError):
    """Cylinder chain could not be fitted inside the domain."""


class SolverError(SmpLabError):
    """Finite-difference solver errors."""


class GridError(SolverError):
    """Grid layout is inconsistent."""


class CFLViolationError(SolverError):
    """Time step exceeds the monotonicity bound."""


class SteppingError(SolverError):
    """Non-finite values appeared while stepping."""

    def __init__(self, message: str, step: int):
        super().__init__(message)
        self.step = step


class ComparisonPreconditionError(SolverError):
    """Initial or lateral data are not ordered."""


class ReportError(SmpLabError):
    """Report could not be written."""

    def __init__(self, message: str, path: str):
        super().__init__(message)
        self.path = path
