"""Experiment harness: scenarios, reports and the runner."""

from .context import ExperimentContext
from .pool import run_many
from .registry import Experiment, get_experiment, list_experiments
from .report import Check, CsvTable, ExperimentReport, emit_report
from .runner import build_operator, output_directory, run_experiment
from .shapes import SHAPE_NAMES, make_shape
from .stationary import quadratic_residual, stationary_quadratic

__all__ = [
    "Check",
    "CsvTable",
    "Experiment",
    "ExperimentContext",
    "ExperimentReport",
    "SHAPE_NAMES",
    "build_operator",
    "emit_report",
    "get_experiment",
    "list_experiments",
    "make_shape",
    "output_directory",
    "quadratic_residual",
    "run_experiment",
    "run_many",
    "stationary_quadratic",
]
