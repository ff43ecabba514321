"""Strictness on the axis of straight and inclined cylinders."""

from typing import Optional, Tuple

import numpy as np
import structlog

from src.config.experiment import GridConfig
from src.exceptions import InvalidConfigError
from src.geometry import InclinedCylinder, push_forward, tilt_operator, unstraighten
from src.operators import OperatorSpec
from src.solver import EvolutionTrace, Grid, GridFunction, evolve
from src.utils.constants import DEFAULT_SCHEME_ATOL

from ..context import ExperimentContext
from ..shapes import ShapeFunction, shifted
from .common import barrier_check, check_strictness, gap_rows, strictness_run

logger = structlog.get_logger()

DEFAULT_TILT = 0.5


def _barrier_time(ctx: ExperimentContext) -> float:
    earliest = ctx.t_start + ctx.strictness_start
    return max(earliest, ctx.t_end - ctx.config.barrier.window)


def axis_strictness(ctx: ExperimentContext) -> None:
    """Non-constant data keeps the interior maximum strictly below M.

    The barrier built at t' then certifies v(x0, t2) < M.
    """
    spec = ctx.spec
    ctx.check_structure()
    ctx.check("forcing_free", spec.coeffs.forcing_free, "f must vanish")

    t_prime = _barrier_time(ctx)
    run = strictness_run(
        ctx,
        spec,
        ctx.ball_grid(),
        ctx.shape(ctx.config.initial),
        ctx.shape(ctx.config.boundary),
        extra_times=[t_prime],
    )
    check_strictness(ctx, run)
    sign_ok = run.data_max >= 0.0 or not spec.coeffs.has_lower_order_terms
    ctx.check(
        "max_sign_condition",
        sign_ok,
        f"M = {run.data_max:.6g}; operators with lower-order terms need M >= 0",
    )
    ctx.table("gap", ("t", "gap")).rows.extend(gap_rows(run))
    ctx.record_trace("trace", run.trace)

    if run.data_max >= 0.0:
        barrier_check(ctx, run, t_prime)


def shifted_maximum(ctx: ExperimentContext) -> None:
    """Strictness with a negative maximum for operators without lower-order terms."""
    spec = ctx.spec
    if spec.coeffs.has_lower_order_terms:
        raise InvalidConfigError(
            "shifted_maximum needs an operator with b = c = f = 0 and no drift"
        )
    ctx.check_structure()

    grid = ctx.ball_grid()
    initial = ctx.shape(ctx.config.initial)
    lateral = ctx.shape(ctx.config.boundary)
    active = grid.active(ctx.t_start)
    boundary = active & ~grid.interior(ctx.t_start)
    top = max(
        float(grid.evaluate(initial, ctx.t_start)[active].max()),
        float(grid.evaluate(lateral, ctx.t_start)[boundary].max()),
    )
    shift = -(max(top, 0.0) + ctx.tolerance("shift", 1.0))
    ctx.metric("shift", shift)

    run = strictness_run(
        ctx, spec, grid, shifted(initial, shift), shifted(lateral, shift)
    )
    check_strictness(ctx, run)
    ctx.check(
        "negative_max", run.data_max < 0.0, f"shifted M = {run.data_max:.6g}"
    )
    ctx.table("gap", ("t", "gap")).rows.extend(gap_rows(run))


def _refined(grid_config: GridConfig) -> Tuple[Optional[float], int]:
    """(dt, padding) of the h/2 companion run."""
    dt = grid_config.dt / 4.0 if grid_config.dt is not None else None
    return dt, 2 * grid_config.padding


def inclined(ctx: ExperimentContext) -> None:
    """Tilted-frame run against its straightened counterpart.

    The straightened problem uses the tilted operator (drift increased by
    η) on a fixed ball; the tilted problem runs the original operator on a
    moving ball. Both are repeated at h/2, and the self-error of each is
    measured at the same points as the agreement: straightened nodes at
    least two cells inside the ball and their tilted images.
    """
    spec = ctx.spec
    n = ctx.n
    eta = ctx.config.geometry.eta
    if eta is None:
        eta = [DEFAULT_TILT] + [0.0] * (n - 1)
    ic = InclinedCylinder.create(ctx.center, ctx.radius, ctx.t_start, ctx.t_end, eta)
    ctx.check_structure()
    ctx.check("forcing_free", spec.coeffs.forcing_free, "f must vanish")

    initial = ctx.shape(ctx.config.initial)
    lateral_straight = ctx.shape(ctx.config.boundary)
    lateral_tilted = push_forward(ic, lateral_straight)
    grid_config = ctx.config.grid
    h = grid_config.spacing
    fine_dt, fine_padding = _refined(grid_config)
    times = ctx.snapshot_times()

    tilted_grid = Grid.inclined_ball(ic, h, grid_config.dt, grid_config.padding)
    tilted = strictness_run(ctx, spec, tilted_grid, initial, lateral_tilted)
    check_strictness(ctx, tilted, prefix="tilted_")
    ctx.table("gap", ("t", "gap")).rows.extend(gap_rows(tilted))

    def run(
        run_spec: OperatorSpec, grid: Grid, lateral: ShapeFunction
    ) -> EvolutionTrace:
        return evolve(
            run_spec,
            grid,
            GridFunction.sample(grid, initial, ctx.t_start),
            lateral,
            ctx.t_end,
            snapshot_times=times,
            cfl_safety=ctx.cfl_safety,
        )

    tilted_fine = run(
        spec, Grid.inclined_ball(ic, h / 2.0, fine_dt, fine_padding), lateral_tilted
    )
    straight_spec = tilt_operator(spec, ic)
    straight = run(straight_spec, ctx.ball_grid(), lateral_straight)
    straight_fine = run(
        straight_spec,
        Grid.ball(ctx.center, ctx.radius, h / 2.0, fine_dt, fine_padding),
        lateral_straight,
    )

    points = straight.grid.points
    depth = ctx.radius - 2.0 * h
    nodes = straight.grid.interior(ctx.t_start) & (
        np.sum((points - ctx.center) ** 2, axis=-1) < depth * depth
    )
    compared = points[nodes]

    agreement = straight_error = tilted_error = 0.0
    rows = []
    for k in range(1, len(straight.snapshots)):
        t, u_straight = straight.snapshots[k]
        original = unstraighten(ic, compared, t)
        u_tilted = tilted.trace.grid.interpolate(
            tilted.trace.snapshots[k][1], original
        )
        u_tilted_fine = tilted_fine.grid.interpolate(
            tilted_fine.snapshots[k][1], original
        )
        u_straight_fine = straight_fine.grid.interpolate(
            straight_fine.snapshots[k][1], compared
        )
        diff = float(np.max(np.abs(u_tilted - u_straight[nodes])))
        rows.append((t, diff))
        agreement = max(agreement, diff)
        straight_error = max(
            straight_error, float(np.max(np.abs(u_straight[nodes] - u_straight_fine)))
        )
        tilted_error = max(
            tilted_error, float(np.max(np.abs(u_tilted - u_tilted_fine)))
        )

    self_error = straight_error + tilted_error
    threshold = 2.0 * self_error + ctx.tolerance("tilt", 0.1 * DEFAULT_SCHEME_ATOL)
    ctx.metric("tilt_agreement", agreement)
    ctx.metric("scheme_self_error", self_error)
    ctx.metric("straight_self_error", straight_error)
    ctx.metric("tilted_self_error", tilted_error)
    ctx.check(
        "tilt_agreement",
        agreement <= threshold,
        f"max difference {agreement:.6g}, allowed {threshold:.6g}",
    )
    ctx.table("tilt_difference", ("t", "difference")).rows.extend(rows)
    logger.info(
        "Tilt comparison finished",
        agreement=agreement,
        straight_self_error=straight_error,
        tilted_self_error=tilted_error,
        eta=list(ic.eta),
    )
