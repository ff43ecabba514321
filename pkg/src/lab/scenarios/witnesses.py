"""Smooth witnesses against the strong principles of truncated operators."""

from dataclasses import replace

import numpy as np

from src.exceptions import InvalidConfigError
from src.operators import OperatorKind, OperatorSpec
from src.solver import Grid, ResidualMode, residual, sample_trace
from src.symmat import Sign

from ..context import ExperimentContext

_EXACT = 1e-12


def _with_sign(spec: OperatorSpec, sign: Sign) -> OperatorSpec:
    return replace(spec, params=replace(spec.params, sign=sign))


def _witness_checks(
    ctx: ExperimentContext,
    spec: OperatorSpec,
    grid: Grid,
    sign: Sign,
    prefix: str,
) -> bool:
    """x_n² as supersolution of the minus operator, -x_n² as subsolution of plus."""
    c_n = float(ctx.center[-1])
    factor = 1.0 if sign is Sign.MINUS else -1.0

    def witness(x: np.ndarray, t: float) -> np.ndarray:
        return factor * (x[..., -1] - c_n) ** 2

    trace = sample_trace(grid, witness, [ctx.t_start, ctx.t_end])
    mode = ResidualMode.SUPER if sign is Sign.MINUS else ResidualMode.SUB
    report = residual(spec, trace, mode)
    ctx.metric(f"{prefix}residual", report.worst)
    residual_ok = ctx.check(
        f"{prefix}residual_zero",
        abs(report.worst) <= ctx.tolerance("witness", _EXACT),
        f"{mode.value}-residual {report.worst!r}",
    )

    values = trace.snapshots[0][1]
    interior = grid.interior(ctx.t_start)
    inner = values[interior]
    extreme = float(inner.min() if sign is Sign.MINUS else inner.max())
    on_hyperplane = np.abs(grid.points[interior][:, -1] - c_n) <= _EXACT
    attained = bool(np.any(on_hyperplane & (np.abs(inner - extreme) <= _EXACT)))
    label = "minimum" if sign is Sign.MINUS else "maximum"
    ctx.metric(f"{prefix}interior_{label}", extreme)
    extreme_ok = ctx.check(
        f"{prefix}interior_{label}_zero",
        abs(extreme) <= _EXACT and attained,
        f"interior {label} {extreme!r} attained on x_n = {c_n}: {attained}",
    )

    spread = float(inner.max() - inner.min())
    ctx.metric(f"{prefix}spread", spread)
    non_constant = ctx.check(
        f"{prefix}non_constant", spread > 0.0, f"spread {spread:.6g}"
    )
    return residual_ok and extreme_ok and non_constant


def truncated_counterexample(ctx: ExperimentContext) -> None:
    """The strong minimum (maximum) principle fails for truncated operators.

    u = x_n² solves the minus operator from above with an interior minimum
    of 0 on the hyperplane x_n = 0; the dual u = -x_n² does the same for the
    plus operator and the maximum. Both failures are the expected outcome.
    """
    spec = ctx.spec
    if spec.kind is not OperatorKind.TRUNCATED_PUCCI:
        raise InvalidConfigError(
            f"truncated_counterexample needs a truncated_pucci operator, "
            f"got {spec.kind.value}"
        )
    grid = ctx.ball_grid()
    minimum_fails = _witness_checks(
        ctx, _with_sign(spec, Sign.MINUS), grid, Sign.MINUS, "witness_"
    )
    ctx.check(
        "minimum_principle_fails",
        minimum_fails,
        "strong minimum principle violated by a valid supersolution",
    )
    maximum_fails = _witness_checks(
        ctx, _with_sign(spec, Sign.PLUS), grid, Sign.PLUS, "dual_witness_"
    )
    ctx.check(
        "maximum_principle_fails",
        maximum_fails,
        "strong maximum principle violated by a valid subsolution",
    )
    ctx.metric("k", spec.params.k or 0)
