"""Explicit Euler evolution of u_t = F(x, t, u, Du, D²u) on masked grids."""

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
import structlog

from src.exceptions import CFLViolationError, GridError, SteppingError
from src.operators import OperatorSpec, evaluate
from src.utils.constants import DEFAULT_CFL_SAFETY

from .grid import Grid, GridFunction
from .stencils import differences, upwind_first_order

logger = structlog.get_logger()

LateralData = Callable[[np.ndarray, float], "np.ndarray | float"]

_TIME_EPS = 1e-12


def stable_dt(
    spec: OperatorSpec, h: float, cfl_safety: float = DEFAULT_CFL_SAFETY
) -> float:
    """cfl_safety / (2nΛ_eff/h² + (b_sup + |drift|)/h + c_abs_sup)."""
    _, big_lam = spec.effective_ellipticity
    rate = (
        2.0 * spec.dimension * big_lam / (h * h)
        + spec.coeffs.first_order_bound / h
        + spec.coeffs.c_abs_sup
    )
    return cfl_safety / rate


@dataclass(frozen=True)
class MaxRecord:
    """Interior maximum after a step."""

    t: float
    value: float
    index: Tuple[int, ...]


@dataclass
class EvolutionTrace:
    """Recorded time levels of an evolution."""

    grid: Grid
    snapshots: List[Tuple[float, np.ndarray]] = field(default_factory=list)
    max_track: List[MaxRecord] = field(default_factory=list)
    dt: float = 0.0
    steps: int = 0

    @property
    def times(self) -> np.ndarray:
        return np.asarray([t for t, _ in self.snapshots])

    @property
    def final(self) -> np.ndarray:
        return self.snapshots[-1][1]

    def values_at(self, t: float) -> np.ndarray:
        """Snapshot recorded closest to t."""
        times = self.times
        return self.snapshots[int(np.argmin(np.abs(times - t)))][1]

    def interior_max(self, t: float) -> float:
        times = self.times
        k = int(np.argmin(np.abs(times - t)))
        snap_t, values = self.snapshots[k]
        return float(values[self.grid.interior(snap_t)].max())

    @property
    def csv_header(self) -> Tuple[str, ...]:
        return ("t", *("x", "y")[: self.grid.n], "u")

    def rows(self) -> Iterator[Tuple[float, ...]]:
        """(t, x[, y], u) for every active node of every snapshot."""
        points = self.grid.points
        for t, values in self.snapshots:
            active = self.grid.active(t)
            for x, u in zip(points[active], values[active]):
                yield (float(t), *(float(v) for v in x), float(u))

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle, lineterminator="\n")
            writer.writerow(self.csv_header)
            for row in self.rows():
                writer.writerow([repr(value) for value in row])
        return path


class ExplicitScheme:
    """One explicit step: interior nodes advance, all others take lateral data."""

    def __init__(self, spec: OperatorSpec, grid: Grid, lateral: LateralData):
        if spec.dimension != grid.n:
            raise GridError(
                f"Operator dimension {spec.dimension} differs from grid dimension "
                f"{grid.n}"
            )
        self.spec = spec
        self.grid = grid
        self.lateral = lateral
        self._points = grid.points

    def operator_values(
        self, u: np.ndarray, t: float, mask: np.ndarray
    ) -> np.ndarray:
        """Discrete F at the nodes selected by mask."""
        d = differences(u, self.grid.h).restrict(mask)
        x = self._points[mask]
        b = self.spec.coeffs.evaluate(x, t).b
        first_order = upwind_first_order(self.spec, d, b)
        return evaluate(
            self.spec, x, t, u[mask], d.centered, d.hessian, first_order=first_order
        )

    def apply_lateral(self, u: np.ndarray, t: float) -> np.ndarray:
        outside = ~self.grid.interior(t)
        g = np.broadcast_to(
            np.asarray(self.lateral(self._points, t), dtype=float), u.shape
        )
        u[outside] = g[outside]
        return u

    def step(self, u: np.ndarray, t: float, dt: float) -> np.ndarray:
        interior = self.grid.interior(t)
        new = u.copy()
        new[interior] = u[interior] + dt * self.operator_values(u, t, interior)
        return self.apply_lateral(new, t + dt)


def resolve_dt(
    spec: OperatorSpec, grid: Grid, enforce_cfl: bool, cfl_safety: float
) -> float:
    limit = stable_dt(spec, grid.h, cfl_safety)
    if grid.dt is None:
        return limit
    if enforce_cfl and grid.dt > limit * (1.0 + 1e-12):
        raise CFLViolationError(
            f"dt={grid.dt:.3g} exceeds the monotone bound {limit:.3g} "
            f"(h={grid.h}, cfl_safety={cfl_safety})"
        )
    return grid.dt


def evolve(
    spec: OperatorSpec,
    grid: Grid,
    initial: Union[GridFunction, np.ndarray],
    lateral_data: LateralData,
    t_end: float,
    snapshot_times: Optional[Sequence[float]] = None,
    enforce_cfl: bool = True,
    cfl_safety: float = DEFAULT_CFL_SAFETY,
) -> EvolutionTrace:
    """Evolve from the initial level to t_end.

    Every step is recorded when ``snapshot_times`` is None; otherwise only
    the initial level, the requested times and t_end, each hit exactly by
    shortening the step before it.

    Raises:
        CFLViolationError: grid.dt exceeds the monotone bound and enforce_cfl
        SteppingError: values became non-finite
    """
    t0 = initial.t if isinstance(initial, GridFunction) else 0.0
    values = initial.values if isinstance(initial, GridFunction) else initial
    if np.shape(values) != grid.shape:
        raise GridError(
            f"Initial data shape {np.shape(values)} differs from grid {grid.shape}"
        )
    if t_end <= t0:
        raise GridError(f"t_end={t_end} must exceed the initial time {t0}")

    dt = resolve_dt(spec, grid, enforce_cfl, cfl_safety)
    scheme = ExplicitScheme(spec, grid, lateral_data)
    u = scheme.apply_lateral(np.array(values, dtype=float, copy=True), t0)

    record_all = snapshot_times is None
    targets = sorted(
        {float(s) for s in (snapshot_times or []) if t0 < s < t_end} | {float(t_end)}
    )
    trace = EvolutionTrace(grid=grid, dt=dt)
    trace.snapshots.append((t0, u.copy()))

    logger.debug(
        "Evolution started",
        operator=spec.label,
        t0=t0,
        t_end=t_end,
        dt=dt,
        shape=grid.shape,
    )

    t = t0
    step = 0
    target_index = 0
    while t < t_end - _TIME_EPS:
        target = targets[target_index]
        tau = min(dt, target - t)
        u = scheme.step(u, t, tau)
        step += 1
        reached = t + tau >= target - _TIME_EPS
        t = target if reached else t + tau

        if not np.all(np.isfinite(u)):
            logger.error("Non-finite values during evolution", step=step, t=t)
            raise SteppingError(f"Non-finite values at step {step} (t={t})", step)

        interior = grid.interior(t)
        masked = np.where(interior, u, -np.inf)
        index = np.unravel_index(int(np.argmax(masked)), u.shape)
        trace.max_track.append(
            MaxRecord(t=t, value=float(u[index]), index=tuple(int(i) for i in index))
        )

        if reached:
            target_index += 1
        if record_all or reached:
            trace.snapshots.append((t, u.copy()))

    trace.steps = step
    logger.debug("Evolution finished", operator=spec.label, steps=step, t=t)
    return trace


def sample_trace(
    grid: Grid,
    fn: Callable[[np.ndarray, float], "np.ndarray | float"],
    times: Sequence[float],
) -> EvolutionTrace:
    """Trace of a known space-time function (for residual checks on witnesses)."""
    ordered = sorted(float(t) for t in times)
    if any(b <= a for a, b in zip(ordered, ordered[1:])):
        raise GridError("Sample times must be strictly increasing")
    trace = EvolutionTrace(grid=grid)
    for t in ordered:
        trace.snapshots.append((t, grid.evaluate(fn, t)))
    if len(ordered) > 1:
        trace.dt = ordered[1] - ordered[0]
    return trace
