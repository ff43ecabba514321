"""Per-run state shared by the scenario functions."""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np
import structlog

from src.config.experiment import ExperimentConfig, ShapeDescriptor
from src.config.settings import Settings
from src.operators import OperatorSpec, check_structure_condition
from src.solver import EvolutionTrace, Grid

from .report import Check, CsvTable, ExperimentReport
from .shapes import ShapeFunction, make_shape

logger = structlog.get_logger()


@dataclass
class ExperimentContext:
    """Configuration, operator and the report being filled."""

    config: ExperimentConfig
    settings: Settings
    spec: OperatorSpec
    report: ExperimentReport = field(init=False)

    def __post_init__(self) -> None:
        self.report = ExperimentReport(
            experiment=self.config.experiment, seed=self.seed
        )

    @property
    def seed(self) -> int:
        if self.config.seed is not None:
            return self.config.seed
        return self.settings.default_seed

    @property
    def n(self) -> int:
        return self.spec.dimension

    @property
    def center(self) -> np.ndarray:
        center = self.config.geometry.center
        return np.zeros(self.n) if center is None else np.asarray(center, float)

    @property
    def radius(self) -> float:
        return self.config.geometry.radius

    @property
    def t_start(self) -> float:
        return self.config.geometry.t_start

    @property
    def t_end(self) -> float:
        return self.config.geometry.t_end

    @property
    def cfl_safety(self) -> float:
        return self.config.grid.cfl_safety or self.settings.cfl_safety

    @property
    def strictness_start(self) -> float:
        if self.config.strictness_start is not None:
            return self.config.strictness_start
        return self.settings.strictness_start

    @property
    def t_pos(self) -> float:
        if self.config.t_pos is not None:
            return self.config.t_pos
        return self.settings.t_pos

    @property
    def certificate_grid(self) -> int:
        return self.config.barrier.certificate_grid or self.settings.certificate_grid

    def tolerance(self, key: str, default: float) -> float:
        return self.config.tolerance(key, default)

    def shape(
        self, descriptor: ShapeDescriptor, center: Optional[Sequence[float]] = None
    ) -> ShapeFunction:
        return make_shape(
            descriptor, self.n, self.center if center is None else center
        )

    def ball_grid(self, center: Optional[Sequence[float]] = None) -> Grid:
        grid_config = self.config.grid
        return Grid.ball(
            self.center if center is None else center,
            self.radius,
            grid_config.spacing,
            grid_config.dt,
            grid_config.padding,
        )

    def snapshot_times(self, extra: Sequence[float] = ()) -> List[float]:
        count = self.config.grid.snapshots
        times = np.linspace(self.t_start, self.t_end, count + 1)[1:]
        return sorted({float(t) for t in times} | {float(t) for t in extra})

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        passed = bool(passed)
        self.report.checks.append(Check(name=name, passed=passed, detail=detail))
        if not passed:
            logger.warning(
                "Check failed",
                experiment=self.config.experiment,
                check=name,
                detail=detail,
            )
        return passed

    def metric(self, name: str, value: float) -> None:
        self.report.metrics[name] = float(value)

    def table(self, name: str, header: Sequence[str]) -> CsvTable:
        table = CsvTable(header=tuple(header))
        self.report.tables[name] = table
        return table

    def record_trace(self, name: str, trace: EvolutionTrace) -> None:
        self.report.tables[name] = CsvTable(
            header=trace.csv_header, rows=list(trace.rows())
        )

    def check_structure(self, spec: Optional[OperatorSpec] = None) -> None:
        """Structure condition of the operator on a seeded sample."""
        structure = check_structure_condition(
            spec or self.spec,
            n_samples=self.settings.structure_samples,
            seed=self.seed,
        )
        self.metric("structure_worst_lower_margin", structure.worst_lower_margin)
        self.metric("structure_worst_upper_margin", structure.worst_upper_margin)
        self.check(
            "structure_condition",
            structure.passed,
            f"{structure.violation_count} of {structure.samples_checked} "
            "samples violate the structure inequality",
        )
