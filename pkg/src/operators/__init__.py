"""Operator catalog and structure-condition verifier."""

from .catalog import eval_operator, evaluate, exact_first_order, principal_part
from .coefficients import CoefficientField, CoefficientValues, ConstantField, constant
from .factory import (
    bellman_operator,
    check_degenerate_slot,
    custom_operator,
    linear_operator,
    make_operator,
)
from .spec import (
    GradientMode,
    OperatorKind,
    OperatorParams,
    OperatorSpec,
    Optimize,
    SingularGradientMode,
)
from .structure import (
    StructureReport,
    StructureSample,
    check_structure_condition,
    pucci_sandwich_gap,
)

__all__ = [
    "CoefficientField",
    "CoefficientValues",
    "ConstantField",
    "constant",
    "OperatorKind",
    "OperatorParams",
    "OperatorSpec",
    "GradientMode",
    "Optimize",
    "SingularGradientMode",
    "eval_operator",
    "evaluate",
    "exact_first_order",
    "principal_part",
    "make_operator",
    "custom_operator",
    "linear_operator",
    "bellman_operator",
    "check_degenerate_slot",
    "check_structure_condition",
    "StructureReport",
    "StructureSample",
    "pucci_sandwich_gap",
]
