"""Helpers shared by the maximum-principle scenarios."""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog

from src.barrier import (
    BarrierParams,
    barrier_arrays,
    certify_strict_supersolution,
    compute_K,
    select_beta,
)
from src.exceptions import InvalidConfigError
from src.operators import OperatorSpec
from src.solver import EvolutionTrace, Grid, GridFunction, evolve
from src.utils.constants import BARRIER_DOMINANCE_FACTOR

from ..context import ExperimentContext
from ..shapes import ShapeFunction

logger = structlog.get_logger()


@dataclass
class StrictnessRun:
    """Evolution from one data set and its distance to the data maximum."""

    trace: EvolutionTrace
    grid: Grid
    initial_max: float
    lateral_max: float
    gaps: List[Tuple[float, float]]

    @property
    def data_max(self) -> float:
        return max(self.initial_max, self.lateral_max)

    def gap_after(self, t: float) -> float:
        later = [gap for s, gap in self.gaps if s >= t - 1e-12]
        return min(later) if later else float("nan")


def parabolic_maxima(
    grid: Grid,
    initial_values: np.ndarray,
    lateral: ShapeFunction,
    t0: float,
    times: Sequence[float],
) -> Tuple[float, float]:
    """Maximum of the initial data over active nodes, of lateral data over
    boundary nodes at every listed time."""
    initial_max = float(initial_values[grid.active(t0)].max())
    lateral_max = -np.inf
    for t in [t0, *times]:
        boundary = grid.active(t) & ~grid.interior(t)
        if boundary.any():
            values = grid.evaluate(lateral, t)[boundary]
            lateral_max = max(lateral_max, float(values.max()))
    return initial_max, float(lateral_max)


def strictness_run(
    ctx: ExperimentContext,
    spec: OperatorSpec,
    grid: Grid,
    initial: ShapeFunction,
    lateral: ShapeFunction,
    extra_times: Sequence[float] = (),
) -> StrictnessRun:
    times = ctx.snapshot_times(extra_times)
    u0 = grid.evaluate(initial, ctx.t_start)
    trace = evolve(
        spec,
        grid,
        GridFunction(u0, ctx.t_start),
        lateral,
        ctx.t_end,
        snapshot_times=times,
        cfl_safety=ctx.cfl_safety,
    )
    initial_max, lateral_max = parabolic_maxima(
        grid, u0, lateral, ctx.t_start, times
    )
    top = max(initial_max, lateral_max)
    first = float(trace.snapshots[0][1][grid.interior(ctx.t_start)].max())
    gaps = [(ctx.t_start, top - first)]
    gaps.extend((record.t, top - record.value) for record in trace.max_track)
    return StrictnessRun(
        trace=trace,
        grid=grid,
        initial_max=initial_max,
        lateral_max=lateral_max,
        gaps=gaps,
    )


def check_strictness(
    ctx: ExperimentContext, run: StrictnessRun, prefix: str = ""
) -> None:
    """Gap, data and sign checks of a strictness run."""
    u0 = run.trace.snapshots[0][1]
    active = run.grid.active(ctx.t_start)
    spread = float(u0[active].max() - u0[active].min())
    start = ctx.t_start + ctx.strictness_start
    min_gap = run.gap_after(start)

    ctx.metric(f"{prefix}data_max", run.data_max)
    ctx.metric(f"{prefix}min_gap", min_gap)
    ctx.metric(f"{prefix}final_gap", run.gaps[-1][1])
    ctx.metric(f"{prefix}steps", run.trace.steps)
    ctx.metric(f"{prefix}dt", run.trace.dt)

    ctx.check(f"{prefix}non_constant_data", spread > 0.0, f"data spread {spread:.3g}")
    ctx.check(
        f"{prefix}lateral_below_max",
        run.lateral_max < run.data_max,
        f"lateral max {run.lateral_max:.6g}, data max {run.data_max:.6g}",
    )
    ctx.check(
        f"{prefix}gap_positive",
        min_gap > 0.0,
        f"min gap {min_gap:.6g} for t >= {start:.4g}",
    )


def gap_rows(run: StrictnessRun) -> List[Tuple[float, float]]:
    return [(t, gap) for t, gap in run.gaps]


def barrier_excess(
    params: BarrierParams,
    run: StrictnessRun,
    ball: np.ndarray,
    t_prime: float,
) -> float:
    """min (v - u) over interior nodes of the ball at snapshots t >= t'."""
    grid = run.grid
    points = grid.points
    worst = np.inf
    for t, values in run.trace.snapshots:
        if t < t_prime - 1e-12:
            continue
        nodes = ball & grid.interior(t)
        if not nodes.any():
            continue
        v, _, _, _ = barrier_arrays(params, points[nodes], max(t, t_prime))
        worst = min(worst, float(np.min(v - values[nodes])))
    return float(worst)


def barrier_check(
    ctx: ExperimentContext,
    run: StrictnessRun,
    t_prime: float,
    center: Optional[np.ndarray] = None,
) -> None:
    """Barrier below the data maximum on the axis, certified and dominating u.

    α is the largest value keeping v >= u at t = t' inside the barrier ball.
    """
    x0 = ctx.center if center is None else center
    r0 = ctx.config.barrier.r0
    if not r0 < min(ctx.radius, 1.0):
        raise InvalidConfigError(
            f"Barrier radius r0={r0} must be below min(R, 1) = {min(ctx.radius, 1.0)}"
        )
    top = run.data_max
    lam, big_lam = ctx.spec.effective_ellipticity
    b_sup = ctx.spec.coeffs.first_order_bound
    c_abs = ctx.spec.coeffs.c_abs_sup
    sharp = ctx.config.barrier.sharp
    K = compute_K(lam, big_lam, ctx.n, b_sup, c_abs, r0, sharp=sharp)
    _, beta = select_beta(lam, K, r0, ctx.config.barrier.beta_factor)

    grid = run.grid
    u_prime = run.trace.values_at(t_prime)
    rho2 = np.sum((grid.points - x0) ** 2, axis=-1)
    inside = grid.interior(t_prime) & (rho2 < r0 * r0)
    if not inside.any():
        raise InvalidConfigError("No grid nodes inside the barrier ball; refine h")
    weights = (r0 * r0 - rho2[inside]) ** 2
    alpha = float(np.min((top - u_prime[inside]) / weights))

    ctx.metric("barrier_K", K)
    ctx.metric("barrier_beta", beta)
    ctx.metric("barrier_alpha", alpha)
    ctx.metric("barrier_t_prime", t_prime)
    if not ctx.check(
        "barrier_below_data_at_t_prime",
        alpha > 0.0,
        f"alpha = {alpha:.6g} at t' = {t_prime:.4g}",
    ):
        return

    params = BarrierParams(
        n=ctx.n,
        x0=tuple(float(v) for v in x0),
        t_prime=t_prime,
        r0=r0,
        alpha=alpha,
        beta=beta,
        cap=top,
    )
    certificate = certify_strict_supersolution(
        params,
        lam,
        big_lam,
        b_sup,
        c_abs,
        grid=ctx.certificate_grid,
        t_end=ctx.t_end,
        sharp=sharp,
        sweep_samples=ctx.settings.psi_sweep_samples,
    )
    ctx.report.certificate = certificate.to_dict()
    ctx.check(
        "barrier_certificate",
        certificate.passed,
        f"margin {certificate.margin:.6g} on {certificate.samples} samples",
    )

    tol = ctx.tolerance("barrier", BARRIER_DOMINANCE_FACTOR * grid.h**2)
    axis_gap = float(params.decay(ctx.t_end)) * r0**4
    ctx.metric("barrier_axis_gap", axis_gap)
    ctx.metric("barrier_tolerance", tol)
    ctx.check(
        "barrier_axis_gap_resolved",
        axis_gap > tol,
        f"M - v(x0, t2) = {axis_gap:.6g}, tolerance {tol:.3g}",
    )

    excess = barrier_excess(params, run, rho2 < r0 * r0, t_prime)
    u_axis = float(grid.interpolate(run.trace.final, x0[None, :])[0])
    ctx.metric("barrier_min_excess", excess)
    ctx.metric("u_axis_final", u_axis)
    ctx.metric("v_axis_final", params.axis_value(ctx.t_end))
    ctx.check(
        "barrier_dominates_solution",
        excess >= -tol,
        f"min (v - u) = {excess:.6g} over the barrier ball for t >= {t_prime:.4g}",
    )
    logger.info(
        "Barrier check finished",
        experiment=ctx.config.experiment,
        K=K,
        beta=beta,
        alpha=alpha,
        certified=certificate.passed,
    )
