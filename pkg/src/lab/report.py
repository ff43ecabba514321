"""Experiment reports and their on-disk form."""

import csv
import json
import math
from dataclasses import dataclass, field
from datetime import UTC, datetime
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import structlog

from src.exceptions import ReportError
from src.utils.constants import REPORT_FILENAME

logger = structlog.get_logger()


@dataclass(frozen=True)
class Check:
    """One scenario assertion."""

    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class CsvTable:
    """Header plus numeric rows."""

    header: Tuple[str, ...]
    rows: List[Sequence[float]] = field(default_factory=list)

    def write(self, path: Path) -> Path:
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(self.header)
            for row in self.rows:
                writer.writerow([repr(float(value)) for value in row])
        return path


@dataclass
class ExperimentReport:
    """Outcome of one experiment run.

    ``passed`` is derived from the checks; a report without checks fails.
    """

    experiment: str
    seed: int
    checks: List[Check] = field(default_factory=list)
    metrics: Dict[str, float] = field(default_factory=dict)
    artifacts: List[str] = field(default_factory=list)
    certificate: Optional[Dict[str, Any]] = None
    tables: Dict[str, CsvTable] = field(default_factory=dict)
    generated_at: datetime = field(default_factory=lambda: datetime.now(UTC))

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(check.passed for check in self.checks)

    @property
    def failed_checks(self) -> List[Check]:
        return [check for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "experiment": self.experiment,
            "pass": self.passed,
            "seed": self.seed,
            "checks": [check.to_dict() for check in self.checks],
            "metrics": {key: self.metrics[key] for key in sorted(self.metrics)},
            "artifacts": list(self.artifacts),
            "certificate": self.certificate,
            "generated_at": self.generated_at.isoformat(),
        }


def _json_safe(value: Any) -> Any:
    """Non-finite floats become strings; JSON has no literal for them."""
    if isinstance(value, float) and not math.isfinite(value):
        return repr(value)
    if isinstance(value, dict):
        return {key: _json_safe(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(item) for item in value]
    return value


def emit_report(report: ExperimentReport, output_dir: "Path | str") -> List[Path]:
    """Write the CSV tables, then report.json; existing files are overwritten.

    Returns the written paths, report.json last.

    Raises:
        ReportError: a file could not be written
    """
    directory = Path(output_dir)
    written: List[Path] = []
    target = directory
    try:
        directory.mkdir(parents=True, exist_ok=True)
        for name in sorted(report.tables):
            target = directory / f"{name}.csv"
            report.tables[name].write(target)
            written.append(target)
            if target.name not in report.artifacts:
                report.artifacts.append(target.name)

        target = directory / REPORT_FILENAME
        payload = json.dumps(_json_safe(report.to_dict()), indent=2, allow_nan=False)
        target.write_text(payload + "\n", encoding="utf-8")
        written.append(target)
    except OSError as e:
        raise ReportError(f"Cannot write {target}: {e}", str(target)) from e

    logger.info(
        "Report written",
        experiment=report.experiment,
        path=str(target),
        artifacts=len(written) - 1,
    )
    return written
