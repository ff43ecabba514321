"""Tests for lattices and finite-difference stencils."""

import numpy as np
import pytest

from src.exceptions import GridError
from src.geometry import InclinedCylinder
from src.operators import make_operator
from src.solver import Grid, GridFunction, NodeKind, differences, upwind_first_order


class TestGrid:
    """Masks and sampling."""

    def test_box_mask(self):
        grid = Grid.box([0.0], [1.0], 0.25)
        mask = grid.mask_at()

        assert grid.shape == (5,)
        assert list(mask) == [
            NodeKind.BOUNDARY,
            NodeKind.INTERIOR,
            NodeKind.INTERIOR,
            NodeKind.INTERIOR,
            NodeKind.BOUNDARY,
        ]

    def test_ball_mask(self):
        grid = Grid.ball([0.0, 0.0], 1.0, 0.25)
        points = grid.points

        interior = grid.interior()
        boundary = grid.active() & ~interior

        assert np.all(np.linalg.norm(points[interior], axis=-1) < 1.0)
        assert boundary.any()
        assert interior[grid.nearest_index([0.0, 0.0])]
        assert grid.mask_at()[0, 0] == NodeKind.OUTSIDE

    def test_inclined_ball_moves(self):
        ic = InclinedCylinder.create([0.0], 0.5, 0.0, 1.0, eta=[1.0])
        grid = Grid.inclined_ball(ic, 0.125)

        assert grid.interior(0.0)[grid.nearest_index([0.0])]
        assert not grid.interior(1.0)[grid.nearest_index([0.0])]
        assert grid.interior(1.0)[grid.nearest_index([1.0])]

    def test_unsupported_dimension(self):
        with pytest.raises(GridError):
            Grid.box([0.0, 0.0, 0.0], [1.0, 1.0, 1.0], 0.5)

    def test_too_coarse(self):
        with pytest.raises(GridError):
            Grid.box([0.0], [1.0], 0.75)

    def test_no_interior_nodes(self):
        def nowhere(points, t):
            return np.zeros(points.shape[:-1], dtype=bool)

        grid = Grid((0.0,), (1.0,), 0.25, domain=nowhere)

        with pytest.raises(GridError):
            grid.mask_at()

    def test_interpolate_linear_exactly(self):
        grid = Grid.box([0.0, 0.0], [1.0, 1.0], 0.25)
        values = grid.evaluate(lambda x, t: 2.0 * x[..., 0] - x[..., 1] + 1.0, 0.0)

        result = grid.interpolate(values, np.array([[0.3, 0.7], [0.9, 0.1]]))

        np.testing.assert_allclose(result, [0.9, 2.7])

    def test_grid_function_rejects_non_finite(self):
        with pytest.raises(GridError):
            GridFunction(values=np.array([0.0, np.inf, 1.0]))


class TestStencils:
    """Differences on polynomials."""

    def test_quadratic_hessian_exact(self):
        grid = Grid.box([-1.0, -1.0], [1.0, 1.0], 0.25)
        u = grid.evaluate(
            lambda x, t: x[..., 0] ** 2 + 3.0 * x[..., 0] * x[..., 1], 0.0
        )

        d = differences(u, grid.h).restrict(grid.interior())

        np.testing.assert_allclose(d.hessian[:, 0, 0], 2.0)
        np.testing.assert_allclose(d.hessian[:, 0, 1], 3.0)
        np.testing.assert_allclose(d.hessian[:, 1, 1], 0.0, atol=1e-12)

    def test_centered_gradient_of_linear(self):
        grid = Grid.box([0.0], [1.0], 0.125)
        u = grid.evaluate(lambda x, t: 4.0 * x[..., 0], 0.0)

        d = differences(u, grid.h).restrict(grid.interior())

        np.testing.assert_allclose(d.centered[:, 0], 4.0)

    def test_upwind_gradient_norm_is_nonnegative(self):
        spec = make_operator(
            {"kind": "pucci_plus", "dimension": 1, "lambda": 1, "Lambda": 1, "b": 2}
        )
        grid = Grid.box([0.0], [1.0], 0.125)
        u = grid.evaluate(lambda x, t: -((x[..., 0] - 0.5) ** 2), 0.0)
        d = differences(u, grid.h).restrict(grid.interior())

        term = upwind_first_order(spec, d, 2.0)

        assert np.all(term >= 0.0)
