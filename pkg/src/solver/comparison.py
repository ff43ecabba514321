"""Lockstep evolution of two ordered data sets and per-step order checks."""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import structlog

from src.exceptions import ComparisonPreconditionError, GridError
from src.operators import OperatorSpec
from src.utils.constants import DEFAULT_CFL_SAFETY, ORDERING_TOLERANCE

from .evolve import EvolutionTrace, ExplicitScheme, LateralData, resolve_dt
from .grid import Grid, GridFunction

logger = structlog.get_logger()


@dataclass
class ComparisonReport:
    """Outcome of a discrete comparison run.

    ``step`` and ``node`` locate the first step whose violation exceeded the
    tolerance; ``max_violation`` is max(u - v) over all steps.
    """

    ordered: bool
    max_violation: float
    steps: int
    dt: float
    step: Optional[int] = None
    node: Optional[Tuple[int, ...]] = None
    gap_track: List[Tuple[float, float]] = field(default_factory=list)
    traces: Optional[Tuple[EvolutionTrace, EvolutionTrace]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ordered": self.ordered,
            "max_violation": self.max_violation,
            "steps": self.steps,
            "dt": self.dt,
            "step": self.step,
            "node": list(self.node) if self.node is not None else None,
        }


def _values(data: Union[GridFunction, np.ndarray]) -> Tuple[np.ndarray, float]:
    if isinstance(data, GridFunction):
        return np.array(data.values, dtype=float), data.t
    return np.array(data, dtype=float), 0.0


def _violation(u: np.ndarray, v: np.ndarray, active: np.ndarray) -> Tuple[float, int]:
    with np.errstate(invalid="ignore"):
        diff = np.where(active, u - v, -np.inf)
    diff = np.where(np.isfinite(u) & np.isfinite(v), diff, np.inf)
    k = int(np.argmax(diff))
    return float(diff.flat[k]), k


def discrete_comparison(
    spec: OperatorSpec,
    grid: Grid,
    u0: Union[GridFunction, np.ndarray],
    v0: Union[GridFunction, np.ndarray],
    lateral_u: LateralData,
    lateral_v: LateralData,
    t_end: float,
    enforce_cfl: bool = True,
    cfl_safety: float = DEFAULT_CFL_SAFETY,
    tolerance: float = ORDERING_TOLERANCE,
    keep_traces: bool = False,
) -> ComparisonReport:
    """Evolve u and v with the same scheme and check u <= v at every step.

    With ``enforce_cfl=False`` a too-large grid.dt is used as given, so the
    detector can be exercised on a non-monotone scheme. Non-finite values
    count as an infinite violation and end the run.

    Raises:
        ComparisonPreconditionError: initial or lateral data are not ordered
    """
    u, t0 = _values(u0)
    v, _ = _values(v0)
    if u.shape != grid.shape or v.shape != grid.shape:
        raise GridError(f"Data shapes {u.shape}, {v.shape} differ from {grid.shape}")
    if t_end <= t0:
        raise GridError(f"t_end={t_end} must exceed the initial time {t0}")

    dt = resolve_dt(spec, grid, enforce_cfl, cfl_safety)
    scheme_u = ExplicitScheme(spec, grid, lateral_u)
    scheme_v = ExplicitScheme(spec, grid, lateral_v)
    points = grid.points

    def check_lateral(t: float) -> None:
        boundary = grid.active(t) & ~grid.interior(t)
        g_u = np.broadcast_to(np.asarray(lateral_u(points, t), dtype=float), u.shape)
        g_v = np.broadcast_to(np.asarray(lateral_v(points, t), dtype=float), u.shape)
        gap = np.where(boundary, g_u - g_v, -np.inf)
        if gap.max() > tolerance:
            k = int(np.argmax(gap))
            raise ComparisonPreconditionError(
                f"Lateral data unordered at t={t}, node "
                f"{np.unravel_index(k, u.shape)} (gap {gap.flat[k]:.3g})"
            )

    initial_gap, k = _violation(u, v, grid.active(t0))
    if initial_gap > tolerance:
        raise ComparisonPreconditionError(
            f"Initial data unordered at node {np.unravel_index(k, u.shape)} "
            f"(u - v = {initial_gap:.3g})"
        )
    check_lateral(t0)
    u = scheme_u.apply_lateral(u, t0)
    v = scheme_v.apply_lateral(v, t0)

    report = ComparisonReport(ordered=True, max_violation=initial_gap, steps=0, dt=dt)
    report.gap_track.append((t0, initial_gap))
    if keep_traces:
        report.traces = (
            EvolutionTrace(grid=grid, snapshots=[(t0, u.copy())], dt=dt),
            EvolutionTrace(grid=grid, snapshots=[(t0, v.copy())], dt=dt),
        )

    t = t0
    step = 0
    while t < t_end - 1e-12:
        tau = min(dt, t_end - t)
        with np.errstate(over="ignore", invalid="ignore"):
            u = scheme_u.step(u, t, tau)
            v = scheme_v.step(v, t, tau)
        step += 1
        t = t_end if t + tau >= t_end - 1e-12 else t + tau
        check_lateral(t)

        gap, k = _violation(u, v, grid.active(t))
        report.gap_track.append((t, gap))
        if report.traces is not None:
            report.traces[0].snapshots.append((t, u.copy()))
            report.traces[1].snapshots.append((t, v.copy()))
        report.max_violation = max(report.max_violation, gap)
        if gap > tolerance and report.step is None:
            report.ordered = False
            report.step = step
            report.node = tuple(int(i) for i in np.unravel_index(k, u.shape))
            logger.warning(
                "Discrete comparison violated",
                operator=spec.label,
                step=step,
                t=t,
                violation=gap,
            )
        if not np.isfinite(gap):
            break

    report.steps = step
    if report.traces is not None:
        for trace in report.traces:
            trace.steps = step
    logger.debug(
        "Discrete comparison finished",
        operator=spec.label,
        ordered=report.ordered,
        steps=step,
        max_violation=report.max_violation,
    )
    return report
