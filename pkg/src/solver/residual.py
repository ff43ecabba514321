"""Discrete sub/supersolution residuals F - ∂t u on recorded traces."""

from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, Iterator, Tuple

import numpy as np
import structlog

from src.exceptions import GridError
from src.operators import OperatorSpec

from .evolve import EvolutionTrace, ExplicitScheme

logger = structlog.get_logger()


class ResidualMode(str, Enum):
    SUB = "sub"
    SUPER = "super"


class TimeDifference(str, Enum):
    BACKWARD = "backward"
    FORWARD = "forward"
    CENTERED = "centered"


@dataclass(frozen=True)
class ResidualReport:
    """Worst residual over interior space-time nodes.

    Sub mode reports the minimum of F - ∂t u, super mode the maximum.
    """

    mode: ResidualMode
    worst: float
    t: float
    index: Tuple[int, ...]
    levels: int

    def certifies(self, tolerance: float) -> bool:
        """Discrete sub (super) solution to the given tolerance."""
        if self.mode is ResidualMode.SUB:
            return self.worst >= -tolerance
        return self.worst <= tolerance

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mode": self.mode.value,
            "worst": self.worst,
            "t": self.t,
            "index": list(self.index),
            "levels": self.levels,
        }


def _stencils(
    trace: EvolutionTrace, scheme: TimeDifference
) -> Iterator[Tuple[int, int, int]]:
    """(level where F is evaluated, earlier level, later level)."""
    last = len(trace.snapshots) - 1
    if scheme is TimeDifference.BACKWARD:
        for k in range(1, last + 1):
            yield k, k - 1, k
    elif scheme is TimeDifference.FORWARD:
        for k in range(0, last):
            yield k, k, k + 1
    else:
        for k in range(1, last):
            yield k, k - 1, k + 1


def residual(
    spec: OperatorSpec,
    trace: EvolutionTrace,
    mode: "ResidualMode | str" = ResidualMode.SUB,
    time_difference: "TimeDifference | str" = TimeDifference.BACKWARD,
) -> ResidualReport:
    """F(x, t, u, D_h u, D²_h u) - ∂t u at every interior node of every level.

    Lateral data is not read; the trace supplies all values.

    Raises:
        GridError: too few time levels for the chosen difference
    """
    mode = ResidualMode(mode)
    time_difference = TimeDifference(time_difference)
    needed = 3 if time_difference is TimeDifference.CENTERED else 2
    if len(trace.snapshots) < needed:
        raise GridError(
            f"{time_difference.value} residual needs {needed} time levels, "
            f"trace has {len(trace.snapshots)}"
        )

    scheme = ExplicitScheme(spec, trace.grid, lateral=lambda x, t: 0.0)
    pick = np.argmin if mode is ResidualMode.SUB else np.argmax
    worst = np.inf if mode is ResidualMode.SUB else -np.inf
    where: Tuple[float, Tuple[int, ...]] = (float("nan"), ())

    for level, earlier, later in _stencils(trace, time_difference):
        t, u = trace.snapshots[level]
        t_a, u_a = trace.snapshots[earlier]
        t_b, u_b = trace.snapshots[later]
        mask = trace.grid.interior(t)
        values = scheme.operator_values(u, t, mask) - (u_b[mask] - u_a[mask]) / (
            t_b - t_a
        )
        k = int(pick(values))
        candidate = float(values[k])
        better = candidate < worst if mode is ResidualMode.SUB else candidate > worst
        if better:
            worst = candidate
            index = tuple(int(i[k]) for i in np.nonzero(mask))
            where = (float(t), index)

    report = ResidualReport(
        mode=mode,
        worst=worst,
        t=where[0],
        index=where[1],
        levels=len(trace.snapshots),
    )
    logger.debug(
        "Residual computed",
        operator=spec.label,
        mode=mode.value,
        time_difference=time_difference.value,
        worst=worst,
    )
    return report
