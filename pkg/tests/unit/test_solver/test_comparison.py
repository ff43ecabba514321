"""Tests for lockstep discrete comparison."""

import numpy as np
import pytest

from src.exceptions import ComparisonPreconditionError
from src.operators import linear_operator, make_operator
from src.solver import Grid, discrete_comparison, stable_dt

HEAT = linear_operator([[1.0]])
GRID = Grid.box([0.0], [1.0], 0.125)


def _zero(x, t):
    return 0.0


def _checkerboard():
    """-0.1 on even nodes, 0 on odd ones."""
    return np.where(np.arange(GRID.shape[0]) % 2 == 0, -0.1, 0.0)


class TestDiscreteComparison:
    """u <= v preserved by the monotone scheme."""

    def test_ordered_data_stays_ordered(self):
        report = discrete_comparison(
            HEAT, GRID, _checkerboard(), np.zeros(GRID.shape), _zero, _zero, 0.05
        )

        assert report.ordered
        assert report.max_violation <= 0.0
        assert report.step is None
        assert report.steps > 0
        assert len(report.gap_track) == report.steps + 1

    def test_pucci_ordered(self):
        spec = make_operator(
            {"kind": "pucci_minus", "dimension": 1, "lambda": 1, "Lambda": 3}
        )
        grid = Grid.ball([0.0], 1.0, 0.125)

        def upper(x, t):
            return np.maximum(1.0 - np.sum(x * x, axis=-1), 0.0)

        def lower(x, t):
            return 0.5 * upper(x, t)

        report = discrete_comparison(
            spec,
            grid,
            grid.evaluate(lower, 0.0),
            grid.evaluate(upper, 0.0),
            _zero,
            _zero,
            0.02,
            keep_traces=True,
        )

        assert report.ordered
        assert report.traces is not None
        assert len(report.traces[0].snapshots) == report.steps + 1

    def test_bellman_random_smooth_data(self):
        """500 steps under three diagonal controls in the [1, 2] band."""
        spec = make_operator(
            {
                "kind": "bellman",
                "matrices": [
                    [[1.0, 0.0], [0.0, 2.0]],
                    [[2.0, 0.0], [0.0, 1.0]],
                    [[1.5, 0.0], [0.0, 1.5]],
                ],
            }
        )
        grid = Grid.ball([0.0, 0.0], 1.0, 0.125)
        rng = np.random.default_rng(11)
        a, k = rng.normal(size=4), rng.uniform(0.5, 2.0, size=(4, 2))
        points = grid.points
        v0 = sum(a[i] * np.sin(points @ k[i]) for i in range(4))
        u0 = v0 - 0.1 - 0.05 * np.cos(points[..., 0]) ** 2
        dt = stable_dt(spec, grid.h)

        report = discrete_comparison(spec, grid, u0, v0, _zero, _zero, 500 * dt)

        # 0.9 / (2 n Λ / h²) with n = 2, Λ = 2
        assert dt == pytest.approx(0.9 * 0.125**2 / 8.0, rel=1e-12)
        assert report.dt == dt
        assert report.steps == 500
        assert report.ordered
        assert max(gap for _, gap in report.gap_track) <= 1e-12

    def test_cfl_violation_detected(self):
        """Ten times the monotone step breaks the order at the first step."""
        grid = GRID.with_dt(10.0 * stable_dt(HEAT, GRID.h))

        report = discrete_comparison(
            HEAT,
            grid,
            _checkerboard(),
            np.zeros(GRID.shape),
            _zero,
            _zero,
            0.01,
            enforce_cfl=False,
        )

        assert not report.ordered
        assert report.step == 1
        assert report.node is not None
        assert report.max_violation > 0.0
        assert report.to_dict()["step"] == 1

    def test_unordered_initial_data(self):
        with pytest.raises(ComparisonPreconditionError):
            discrete_comparison(
                HEAT,
                GRID,
                np.full(GRID.shape, 0.1),
                np.zeros(GRID.shape),
                _zero,
                _zero,
                0.01,
            )

    def test_unordered_lateral_data(self):
        """Lateral order is checked at every step."""

        def rising(x, t):
            return 100.0 * t - 0.1

        with pytest.raises(ComparisonPreconditionError):
            discrete_comparison(
                HEAT,
                GRID,
                np.full(GRID.shape, -0.1),
                np.zeros(GRID.shape),
                rising,
                _zero,
                0.01,
            )
