"""Tests for the barrier dominance measure of the strictness scenarios."""

import numpy as np
import pytest

from src.barrier import BarrierParams, barrier_arrays
from src.lab.scenarios.common import StrictnessRun, barrier_excess
from src.solver import EvolutionTrace, Grid

PARAMS = BarrierParams(
    n=1, x0=(0.0,), t_prime=0.1, r0=0.4, alpha=10.0, beta=50.0, cap=1.0
)


@pytest.fixture
def grid():
    return Grid.ball([0.0], 1.0, 0.125)


def _run(grid, snapshots):
    trace = EvolutionTrace(grid=grid, snapshots=snapshots)
    return StrictnessRun(
        trace=trace, grid=grid, initial_max=1.0, lateral_max=0.0, gaps=[]
    )


def _barrier(grid, t):
    value, _, _, _ = barrier_arrays(PARAMS, grid.points, t)
    return value


def _ball(grid):
    return np.sum(grid.points**2, axis=-1) < PARAMS.r0**2


class TestBarrierExcess:
    """min (v - u) in the barrier ball from t' on."""

    def test_touching_at_t_prime(self, grid):
        run = _run(
            grid,
            [
                (0.0, np.full(grid.shape, 5.0)),
                (0.1, _barrier(grid, 0.1)),
                (0.2, _barrier(grid, 0.2) - 0.01),
            ],
        )

        assert barrier_excess(PARAMS, run, _ball(grid), 0.1) == pytest.approx(
            0.0, abs=1e-14
        )

    def test_detects_overshoot_on_axis(self, grid):
        late = _barrier(grid, 0.2) - 0.01
        late[grid.nearest_index([0.0])] += 0.01 + 1e-6
        run = _run(grid, [(0.1, _barrier(grid, 0.1) - 0.5), (0.2, late)])

        excess = barrier_excess(PARAMS, run, _ball(grid), 0.1)

        assert excess == pytest.approx(-1e-6, abs=1e-12)

    def test_ignores_nodes_outside_ball(self, grid):
        values = _barrier(grid, 0.1) - 0.1
        outside = ~_ball(grid)
        values[outside] = 10.0
        run = _run(grid, [(0.1, values)])

        assert barrier_excess(PARAMS, run, _ball(grid), 0.1) == pytest.approx(0.1)
