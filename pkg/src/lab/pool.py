"""Run independent experiments concurrently."""

import asyncio
from pathlib import Path
from typing import List, Optional, Sequence, Union

import structlog

from src.config.experiment import ExperimentConfig
from src.config.settings import Settings

from .report import ExperimentReport
from .runner import run_experiment

logger = structlog.get_logger()

Outcome = Union[ExperimentReport, BaseException]


async def run_many(
    configs: Sequence[ExperimentConfig],
    settings: Settings,
    workers: Optional[int] = None,
    output_root: Optional[Path] = None,
) -> List[Outcome]:
    """Run each config in a worker thread, at most ``workers`` at a time.

    Results keep the order of ``configs``; a failing experiment yields its
    exception instead of a report. With ``output_root`` each report goes to
    <output_root>/<index>_<experiment>.
    """
    count = max(1, workers or settings.workers)
    limit = asyncio.Semaphore(count)

    async def run_one(index: int, config: ExperimentConfig) -> ExperimentReport:
        target = None
        if output_root is not None:
            target = output_root / f"{index:02d}_{config.experiment}"
        async with limit:
            return await asyncio.to_thread(run_experiment, config, settings, target)

    logger.info("Running experiments", count=len(configs), workers=count)
    results = await asyncio.gather(
        *(run_one(i, config) for i, config in enumerate(configs)),
        return_exceptions=True,
    )
    for config, result in zip(configs, results):
        if isinstance(result, BaseException):
            logger.error(
                "Experiment crashed",
                experiment=config.experiment,
                error=str(result),
                error_type=type(result).__name__,
            )
    return list(results)
