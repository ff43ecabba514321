"""Command-line entry point for smplab."""

import argparse
import asyncio
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import structlog
from pydantic import ValidationError

from src import __version__
from src.config import ExperimentConfig, Settings, load_config, load_experiment_config
from src.exceptions import ConfigurationError, ReportError
from src.lab import (
    ExperimentReport,
    build_operator,
    list_experiments,
    run_experiment,
    run_many,
)
from src.utils.constants import LOG_FORMAT

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def setup_logging(debug: bool = False) -> None:
    """Configure structured logging."""
    level = logging.DEBUG if debug else logging.INFO

    logging.basicConfig(
        level=level,
        format=LOG_FORMAT,
        stream=sys.stderr,
    )

    structlog.configure(
        processors=[
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_logger_name,
            structlog.stdlib.add_log_level,
            structlog.stdlib.PositionalArgumentsFormatter(),
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.StackInfoRenderer(),
            structlog.processors.format_exc_info,
            structlog.processors.UnicodeDecoder(),
            (
                structlog.processors.JSONRenderer()
                if not debug
                else structlog.dev.ConsoleRenderer()
            ),
        ],
        context_class=dict,
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=True,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smplab",
        description="Strong maximum principle experiments for parabolic operators",
    )
    parser.add_argument(
        "--version", action="version", version=f"smplab {__version__}"
    )
    parser.add_argument("--debug", action="store_true", help="Enable debug logging")
    parser.add_argument("--env-file", type=Path, help="Path to a .env file")

    commands = parser.add_subparsers(dest="command", required=True)

    run_parser = commands.add_parser("run", help="Run experiments")
    run_parser.add_argument(
        "--config",
        type=Path,
        action="append",
        required=True,
        help="Experiment file (JSON or YAML); repeat to run several",
    )
    run_parser.add_argument("--out", type=Path, help="Output directory")
    run_parser.add_argument("--seed", type=int, help="Override the config seed")
    run_parser.add_argument(
        "--workers", type=int, help="Experiments to run in parallel"
    )

    commands.add_parser("list", help="List experiment names")

    validate_parser = commands.add_parser(
        "validate", help="Validate experiment files without running them"
    )
    validate_parser.add_argument(
        "--config", type=Path, action="append", required=True
    )
    return parser


def _load_configs(
    paths: Sequence[Path], seed: Optional[int] = None
) -> List[ExperimentConfig]:
    configs = [load_experiment_config(path) for path in paths]
    if seed is not None:
        configs = [config.model_copy(update={"seed": seed}) for config in configs]
    return configs


def _summarize(report: ExperimentReport) -> str:
    status = "PASS" if report.passed else "FAIL"
    failed = ", ".join(check.name for check in report.failed_checks)
    return f"{status} {report.experiment}" + (f" ({failed})" if failed else "")


async def _run(args: argparse.Namespace, settings: Settings) -> int:
    configs = _load_configs(args.config, args.seed)
    if len(configs) == 1:
        outcomes = [
            await asyncio.to_thread(run_experiment, configs[0], settings, args.out)
        ]
    else:
        outcomes = await run_many(
            configs, settings, workers=args.workers, output_root=args.out
        )

    code = EXIT_OK
    for outcome in outcomes:
        if isinstance(outcome, ConfigurationError):
            print(f"ERROR {outcome}", file=sys.stderr)
            code = max(code, EXIT_CONFIG)
        elif isinstance(outcome, Exception):
            print(f"ERROR {type(outcome).__name__}: {outcome}", file=sys.stderr)
            code = max(code, EXIT_FAILED)
        elif isinstance(outcome, ExperimentReport):
            print(_summarize(outcome))
            if not outcome.passed:
                code = max(code, EXIT_FAILED)
        else:
            raise outcome
    return code


def _list() -> int:
    for experiment in list_experiments():
        print(f"{experiment.name:<26} {experiment.description}")
    return EXIT_OK


def _validate(args: argparse.Namespace) -> int:
    for config in _load_configs(args.config):
        build_operator(config)
        print(f"OK {config.experiment} ({config.operator.kind})")
    return EXIT_OK


async def main(argv: Optional[Sequence[str]] = None) -> int:
    """Parse arguments, dispatch the command and return the exit code."""
    args = build_parser().parse_args(argv)
    setup_logging(debug=args.debug)
    logger = structlog.get_logger()

    try:
        if args.command == "list":
            return _list()
        if args.command == "validate":
            return _validate(args)
        settings = load_config(config_file=args.env_file)
        if args.debug:
            settings = settings.model_copy(update={"debug": True})
        else:
            logging.getLogger().setLevel(settings.log_level)
        return await _run(args, settings)
    except (ConfigurationError, ValidationError) as e:
        logger.error("Configuration error", error=str(e))
        print(f"ERROR {e}", file=sys.stderr)
        return EXIT_CONFIG
    except ReportError as e:
        logger.error("Report could not be written", error=str(e), path=str(e.path))
        return EXIT_FAILED


def run() -> None:
    """Synchronous entry point for the console script."""
    try:
        code = asyncio.run(main())
    except KeyboardInterrupt:
        print("\nInterrupted", file=sys.stderr)
        code = 130
    sys.exit(code)


if __name__ == "__main__":
    run()
