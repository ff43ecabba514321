"""Explicit finite-difference solver, residuals and discrete comparison."""

from .comparison import ComparisonReport, discrete_comparison
from .evolve import (
    EvolutionTrace,
    ExplicitScheme,
    MaxRecord,
    evolve,
    sample_trace,
    stable_dt,
)
from .grid import Grid, GridFunction, NodeKind
from .residual import ResidualMode, ResidualReport, TimeDifference, residual
from .stencils import Differences, differences, upwind_first_order

__all__ = [
    "Grid",
    "GridFunction",
    "NodeKind",
    "Differences",
    "differences",
    "upwind_first_order",
    "EvolutionTrace",
    "ExplicitScheme",
    "MaxRecord",
    "evolve",
    "sample_trace",
    "stable_dt",
    "ResidualMode",
    "ResidualReport",
    "TimeDifference",
    "residual",
    "ComparisonReport",
    "discrete_comparison",
]
