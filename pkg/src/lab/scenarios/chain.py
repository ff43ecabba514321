"""Propagation along cylinder chains covering a broken line."""

from typing import List, Tuple

import numpy as np
import structlog

from src.exceptions import InvalidConfigError
from src.geometry import BrokenLine, CylinderChain, InclinedCylinder, cover_broken_line
from src.solver import EvolutionTrace, Grid, GridFunction, evolve

from ..context import ExperimentContext
from ..stationary import quadratic_residual, stationary_quadratic
from .common import check_strictness, parabolic_maxima, strictness_run

logger = structlog.get_logger()

AXIS_SAMPLES_PER_SEGMENT = 8
CONSTANT_LEVEL = 1.0
_LINEAR_SLOPE = 0.25


def _broken_line(ctx: ExperimentContext) -> BrokenLine:
    """Configured line, or a two-segment detour ending on the axis at t_end."""
    points = ctx.config.geometry.broken_line
    if points is not None:
        return BrokenLine.from_points(points)
    x0 = ctx.center
    detour = x0.copy()
    detour[0] += 0.3 * ctx.radius
    middle = 0.5 * (ctx.t_start + ctx.t_end)
    return BrokenLine.from_points(
        [[*x0, ctx.t_start], [*detour, middle], [*x0, ctx.t_end]]
    )


def _chain(ctx: ExperimentContext) -> CylinderChain:
    line = _broken_line(ctx)
    if line.n != ctx.n:
        raise InvalidConfigError(
            f"Broken line has dimension {line.n}, operator has {ctx.n}"
        )
    radius = ctx.config.geometry.chain_radius or 0.25 * ctx.radius
    domain = [InclinedCylinder.create(ctx.center, ctx.radius, ctx.t_start, ctx.t_end)]
    chain = cover_broken_line(line, radius, domain=domain)
    ctx.metric("chain_radius", chain.radius)
    ctx.metric("chain_segments", len(chain.segments))
    return chain


def _axis_values(
    trace: EvolutionTrace, grid: Grid, chain: CylinderChain
) -> List[Tuple[float, np.ndarray, float]]:
    samples = []
    for point, t in chain.axis_points(AXIS_SAMPLES_PER_SEGMENT):
        value = float(grid.interpolate(trace.values_at(t), point[None, :])[0])
        samples.append((t, point, value))
    return samples


def _axis_times(chain: CylinderChain) -> List[float]:
    return [t for _, t in chain.axis_points(AXIS_SAMPLES_PER_SEGMENT)]


def _check_axis_gaps(
    ctx: ExperimentContext,
    trace: EvolutionTrace,
    grid: Grid,
    chain: CylinderChain,
    top: float,
) -> None:
    table = ctx.table("axis_gap", ("t", *("x", "y")[: ctx.n], "gap"))
    start = ctx.t_start + ctx.strictness_start
    gaps = []
    for t, point, value in _axis_values(trace, grid, chain):
        gap = top - value
        table.rows.append((t, *point, gap))
        if t >= start:
            gaps.append(gap)
    min_gap = min(gaps) if gaps else float("nan")
    ctx.metric("axis_min_gap", min_gap)
    ctx.check(
        "axis_gap_positive",
        bool(gaps) and min_gap > 0.0,
        f"min gap {min_gap:.6g} over {len(gaps)} axis samples",
    )


def broken_line(ctx: ExperimentContext) -> None:
    """Constants propagate exactly; non-constant data stays below M on the chain."""
    spec = ctx.spec
    ctx.check_structure()
    chain = _chain(ctx)
    grid = ctx.ball_grid()
    axis_times = _axis_times(chain)

    if spec.coeffs.c_abs_sup == 0.0 and spec.coeffs.forcing_free:
        level = CONSTANT_LEVEL

        def constant(x: np.ndarray, t: float) -> np.ndarray:
            return np.full(np.shape(x)[:-1], level)

        trace = evolve(
            spec,
            grid,
            GridFunction.sample(grid, constant, ctx.t_start),
            constant,
            ctx.t_end,
            snapshot_times=axis_times,
            cfl_safety=ctx.cfl_safety,
        )
        deviation = max(
            abs(value - level) for _, _, value in _axis_values(trace, grid, chain)
        )
        ctx.metric("constant_deviation", deviation)
        ctx.check(
            "constant_propagates",
            deviation <= ctx.tolerance("constant", 1e-12),
            f"max |u - {level}| on the chain axis = {deviation:.3g}",
        )
    else:
        logger.info(
            "Constant propagation skipped; constants solve only when c = f = 0",
            experiment=ctx.config.experiment,
        )

    run = strictness_run(
        ctx,
        spec,
        grid,
        ctx.shape(ctx.config.initial),
        ctx.shape(ctx.config.boundary),
        extra_times=axis_times,
    )
    check_strictness(ctx, run)
    _check_axis_gaps(ctx, run.trace, grid, chain, run.data_max)


def elliptic_reduction(ctx: ExperimentContext) -> None:
    """A stationary elliptic solution run as time-independent parabolic data."""
    spec = ctx.spec
    if spec.coeffs.has_lower_order_terms:
        raise InvalidConfigError(
            "elliptic_reduction needs an operator with b = c = f = 0 and no drift"
        )
    ctx.check_structure()
    q = np.asarray(stationary_quadratic(spec))
    ctx.metric("stationary_residual", quadratic_residual(spec, tuple(q)))
    for i, value in enumerate(q):
        ctx.metric(f"stationary_q{i + 1}", value)

    x0 = ctx.center
    slope = np.zeros(ctx.n)
    slope[0] = _LINEAR_SLOPE

    def stationary(x: np.ndarray, t: float) -> np.ndarray:
        y = x - x0
        return np.sum(q * y * y, axis=-1) + y @ slope

    chain = _chain(ctx)
    grid = ctx.ball_grid()
    times = ctx.snapshot_times(_axis_times(chain))
    u0 = grid.evaluate(stationary, ctx.t_start)
    trace = evolve(
        spec,
        grid,
        GridFunction(u0, ctx.t_start),
        stationary,
        ctx.t_end,
        snapshot_times=times,
        cfl_safety=ctx.cfl_safety,
    )

    active = grid.active(ctx.t_start)
    drift = max(
        float(np.max(np.abs(values[active] - u0[active])))
        for _, values in trace.snapshots
    )
    ctx.metric("time_drift", drift)
    ctx.check(
        "zero_time_drift",
        drift <= ctx.tolerance("drift", 1e-9),
        f"max |u(t) - u(0)| = {drift:.3g}",
    )

    initial_max, lateral_max = parabolic_maxima(
        grid, u0, stationary, ctx.t_start, times
    )
    top = max(initial_max, lateral_max)
    interior_max = float(u0[grid.interior(ctx.t_start)].max())
    ctx.metric("data_max", top)
    ctx.metric("interior_max", interior_max)
    ctx.check(
        "interior_below_boundary_max",
        interior_max < lateral_max,
        f"interior max {interior_max:.6g}, boundary max {lateral_max:.6g}",
    )
    _check_axis_gaps(ctx, trace, grid, chain, top)
