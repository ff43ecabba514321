"""Tests for experiment reports."""

import json
from datetime import UTC, datetime

import pytest

from src.exceptions import ReportError
from src.lab import Check, CsvTable, ExperimentReport, emit_report, run_experiment


def _report(**kwargs) -> ExperimentReport:
    return ExperimentReport(
        experiment="positivity",
        seed=3,
        generated_at=datetime(2024, 1, 1, tzinfo=UTC),
        **kwargs,
    )


class TestExperimentReport:
    """Derived pass flag and serialization."""

    def test_passes_only_with_all_checks(self):
        assert not _report().passed
        assert _report(checks=[Check("a", True)]).passed

        report = _report(checks=[Check("a", True), Check("b", False, "why")])

        assert not report.passed
        assert [c.name for c in report.failed_checks] == ["b"]

    def test_key_order_and_sorted_metrics(self):
        report = _report(checks=[Check("a", True)], metrics={"z": 1.0, "a": 2.0})

        data = report.to_dict()

        assert list(data) == [
            "experiment",
            "pass",
            "seed",
            "checks",
            "metrics",
            "artifacts",
            "certificate",
            "generated_at",
        ]
        assert list(data["metrics"]) == ["a", "z"]
        assert data["generated_at"].startswith("2024-01-01")


class TestEmitReport:
    """Files on disk."""

    def test_writes_tables_then_report(self, tmp_path):
        report = _report(checks=[Check("a", True)])
        report.tables["gap"] = CsvTable(("t", "gap"), [(0.0, 1.0), (0.5, 0.25)])

        written = emit_report(report, tmp_path / "out")

        assert [p.name for p in written] == ["gap.csv", "report.json"]
        assert (tmp_path / "out" / "gap.csv").read_text().splitlines() == [
            "t,gap",
            "0.0,1.0",
            "0.5,0.25",
        ]
        data = json.loads(written[-1].read_text())
        assert data["pass"] is True
        assert data["artifacts"] == ["gap.csv"]

    def test_non_finite_metrics_become_strings(self, tmp_path):
        report = _report(
            checks=[Check("a", False)],
            metrics={"gap": float("nan"), "worst": float("-inf")},
        )

        data = json.loads(emit_report(report, tmp_path)[-1].read_text())

        assert data["metrics"] == {"gap": "nan", "worst": "-inf"}

    def test_overwrites_existing(self, tmp_path):
        emit_report(_report(checks=[Check("a", False)]), tmp_path)
        emit_report(_report(checks=[Check("a", True)]), tmp_path)

        data = json.loads((tmp_path / "report.json").read_text())

        assert data["pass"] is True

    def test_unwritable_target(self, tmp_path):
        blocker = tmp_path / "file"
        blocker.write_text("x")

        with pytest.raises(ReportError) as exc_info:
            emit_report(_report(), blocker)

        assert exc_info.value.path == str(blocker)


class TestDeterminism:
    """Same config and seed, same bytes."""

    def test_repeated_runs_write_identical_files(
        self, make_experiment, test_settings, tmp_path
    ):
        config = make_experiment("positivity", t_pos=0.02)
        stamp = datetime(2024, 1, 1, tzinfo=UTC)
        written = []
        for name in ("first", "second"):
            report = run_experiment(config, test_settings, emit=False)
            report.generated_at = stamp
            written.append(emit_report(report, tmp_path / name))

        first, second = written
        assert [path.name for path in first] == [path.name for path in second]
        for a, b in zip(first, second):
            assert a.read_bytes() == b.read_bytes(), a.name
