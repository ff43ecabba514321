"""Strong comparison and conservation of positivity."""

import structlog

from src.exceptions import InvalidConfigError
from src.operators import OperatorKind, OperatorSpec
from src.solver import (
    EvolutionTrace,
    GridFunction,
    ResidualMode,
    TimeDifference,
    discrete_comparison,
    evolve,
    residual,
)
from src.utils.constants import ORDERING_TOLERANCE, POSITIVITY_THRESHOLD

from ..context import ExperimentContext

logger = structlog.get_logger()


def strong_comparison(ctx: ExperimentContext) -> None:
    """w = u - v for ordered data is a discrete M⁺ subsolution and stays <= 0.

    The lower data u comes from ``secondary`` (default: the initial shape at
    half amplitude); both solutions share the lateral data.
    """
    spec = ctx.spec
    if spec.coeffs.has_lower_order_terms or spec.direction_dependent:
        raise InvalidConfigError(
            "strong_comparison needs an operator depending on D²u only"
        )
    ctx.check_structure()

    upper_shape = ctx.config.initial
    lower_shape = ctx.config.secondary or upper_shape.model_copy(
        update={"amplitude": 0.5 * upper_shape.amplitude}
    )
    grid = ctx.ball_grid()
    lateral = ctx.shape(ctx.config.boundary)
    u0 = GridFunction.sample(grid, ctx.shape(lower_shape), ctx.t_start)
    v0 = GridFunction.sample(grid, ctx.shape(upper_shape), ctx.t_start)

    comparison = discrete_comparison(
        spec,
        grid,
        u0,
        v0,
        lateral,
        lateral,
        ctx.t_end,
        cfl_safety=ctx.cfl_safety,
        keep_traces=True,
    )
    ctx.metric("max_violation", comparison.max_violation)
    ctx.metric("steps", comparison.steps)
    ctx.check(
        "difference_nonpositive",
        comparison.ordered,
        f"max(u - v) = {comparison.max_violation:.3g}",
    )
    ctx.table("gap", ("t", "max_difference")).rows.extend(comparison.gap_track)

    assert comparison.traces is not None  # keep_traces=True
    lower, upper = comparison.traces
    difference = EvolutionTrace(
        grid=grid,
        snapshots=[
            (t, a - b) for (t, a), (_, b) in zip(lower.snapshots, upper.snapshots)
        ],
        dt=comparison.dt,
        steps=comparison.steps,
    )
    lam, big_lam = spec.effective_ellipticity
    pucci = OperatorSpec(OperatorKind.PUCCI_PLUS, ctx.n, lam, big_lam)
    # forward differences match the explicit update exactly
    report = residual(pucci, difference, ResidualMode.SUB, TimeDifference.FORWARD)
    tau = ctx.tolerance("residual", 1e-6)
    ctx.metric("difference_sub_residual", report.worst)
    ctx.check(
        "difference_is_pucci_subsolution",
        report.certifies(tau),
        f"worst sub-residual {report.worst:.3g}, tolerance {tau:.3g}",
    )

    identical = discrete_comparison(
        spec, grid, v0, v0, lateral, lateral, ctx.t_end, cfl_safety=ctx.cfl_safety
    )
    ctx.metric("identical_max_difference", identical.max_violation)
    ctx.check(
        "identical_data_zero_difference",
        abs(identical.max_violation) <= ORDERING_TOLERANCE,
        f"max |w| = {abs(identical.max_violation):.3g}",
    )


def positivity(ctx: ExperimentContext) -> None:
    """Nonnegative nontrivial data becomes strictly positive inside by t_pos."""
    spec = ctx.spec
    t_pos = ctx.t_start + ctx.t_pos
    if not t_pos < ctx.t_end:
        raise InvalidConfigError(
            f"t_pos={ctx.t_pos} leaves no time before t_end={ctx.t_end}"
        )
    ctx.check_structure()
    ctx.check("forcing_free", spec.coeffs.forcing_free, "f must vanish")

    grid = ctx.ball_grid()
    initial = ctx.shape(ctx.config.initial)
    lateral = ctx.shape(ctx.config.boundary)
    u0 = grid.evaluate(initial, ctx.t_start)
    interior = grid.interior(ctx.t_start)
    boundary = grid.active(ctx.t_start) & ~interior
    ctx.check(
        "nonnegative_data",
        u0[interior].min() >= 0.0
        and grid.evaluate(lateral, ctx.t_start)[boundary].min() >= 0.0,
        "initial and lateral data must be >= 0",
    )
    ctx.check("nontrivial_data", u0[interior].max() > 0.0, "u0 must not vanish")

    trace = evolve(
        spec,
        grid,
        GridFunction(u0, ctx.t_start),
        lateral,
        ctx.t_end,
        snapshot_times=ctx.snapshot_times([t_pos]),
        cfl_safety=ctx.cfl_safety,
    )
    table = ctx.table("minimum", ("t", "min_u"))
    later = []
    for t, values in trace.snapshots:
        minimum = float(values[grid.interior(t)].min())
        table.rows.append((t, minimum))
        if t >= t_pos - 1e-12:
            later.append(minimum)

    threshold = ctx.tolerance("positivity", POSITIVITY_THRESHOLD)
    at_t_pos = float(trace.values_at(t_pos)[interior].min())
    ctx.metric("min_at_t_pos", at_t_pos)
    ctx.metric("min_after_t_pos", min(later))
    ctx.check(
        "positive_after_t_pos",
        min(later) > threshold,
        f"min over interior nodes for t >= {t_pos:.4g}: {min(later):.6g}",
    )
    logger.info("Positivity run finished", min_at_t_pos=at_t_pos, steps=trace.steps)
