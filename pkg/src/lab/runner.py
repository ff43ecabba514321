"""Run one configured experiment end to end."""

import time
from pathlib import Path
from typing import Optional, Union

import structlog

from src.config.experiment import ExperimentConfig
from src.config.settings import Settings
from src.exceptions import (
    BarrierError,
    CFLViolationError,
    ComparisonPreconditionError,
    GeometryError,
    GridError,
    InvalidConfigError,
    MatrixError,
    OperatorError,
    SteppingError,
)
from src.operators import OperatorSpec, make_operator

from .context import ExperimentContext
from .registry import get_experiment
from .report import ExperimentReport, emit_report

logger = structlog.get_logger()

# Raised while setting a scenario up: the configuration cannot be run as given.
_SETUP_ERRORS = (
    OperatorError,
    MatrixError,
    BarrierError,
    GeometryError,
    GridError,
    CFLViolationError,
    ComparisonPreconditionError,
)


def output_directory(
    config: ExperimentConfig,
    settings: Settings,
    override: Optional[Union[str, Path]] = None,
) -> Path:
    """--out beats the config's output, which beats <output_dir>/<experiment>."""
    if override is not None:
        return Path(override)
    if config.output is not None:
        return Path(config.output)
    return settings.output_dir / config.experiment


def build_operator(config: ExperimentConfig) -> OperatorSpec:
    """Catalog operator of an experiment file.

    Raises:
        InvalidConfigError: the descriptor does not define a valid operator
    """
    try:
        return make_operator(config.operator)
    except (OperatorError, MatrixError) as e:
        raise InvalidConfigError(f"Invalid operator: {e}") from e


def run_experiment(
    config: ExperimentConfig,
    settings: Optional[Settings] = None,
    output_dir: Optional[Union[str, Path]] = None,
    emit: bool = True,
) -> ExperimentReport:
    """Build the operator, run the named scenario and write its report.

    Failed scenario checks are recorded in the report, never raised.

    Raises:
        UnknownExperimentError: the name is not registered
        InvalidConfigError: the configuration cannot be run
        ReportError: the report could not be written
    """
    settings = settings or Settings()
    experiment = get_experiment(config.experiment)
    spec = build_operator(config)

    ctx = ExperimentContext(config=config, settings=settings, spec=spec)
    logger.info(
        "Experiment started",
        experiment=config.experiment,
        operator=spec.label,
        seed=ctx.seed,
    )
    started = time.perf_counter()
    try:
        experiment.run(ctx)
    except SteppingError as e:
        ctx.check("evolution_finite", False, f"{e} (step {e.step})")
    except _SETUP_ERRORS as e:
        raise InvalidConfigError(
            f"{config.experiment}: {type(e).__name__}: {e}"
        ) from e
    runtime = time.perf_counter() - started

    report = ctx.report
    if emit:
        emit_report(report, output_directory(config, settings, output_dir))
    logger.info(
        "Experiment finished",
        experiment=config.experiment,
        passed=report.passed,
        failed=[check.name for check in report.failed_checks],
        runtime_s=round(runtime, 3),
    )
    return report
