"""Tests for cylinders and the straightening change of variables."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from src.exceptions import GeometryError
from src.geometry import (
    Cylinder,
    InclinedCylinder,
    pull_back,
    push_forward,
    straighten,
    tilt_operator,
    tilt_transform,
    unstraighten,
)
from src.operators import eval_operator, make_operator
from src.symmat import SymMat

coordinate = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False)


class TestCylinder:
    """Straight cylinders."""

    def test_contains_is_strict(self):
        cylinder = Cylinder.create([0.0, 0.0], 1.0, 0.0, 1.0)

        assert cylinder.contains([0.5, 0.0], 0.5)
        assert not cylinder.contains([1.0, 0.0], 0.5)
        assert not cylinder.contains([0.0, 0.0], 1.0)

    @pytest.mark.parametrize(
        "args", [([0.0], 0.0, 0.0, 1.0), ([0.0], 1.0, 1.0, 1.0), ([], 1.0, 0.0, 1.0)]
    )
    def test_invalid(self, args):
        with pytest.raises(GeometryError):
            Cylinder.create(*args)


class TestInclinedCylinder:
    """Moving axis and the straightening map."""

    def test_axis_moves_with_eta(self):
        ic = InclinedCylinder.create([0.0, 0.0], 0.5, 1.0, 2.0, eta=[2.0, -1.0])

        np.testing.assert_allclose(ic.axis(1.5), [1.0, -0.5])
        assert ic.contains([1.0, -0.5], 1.5)
        assert not ic.contains([0.0, 0.0], 1.5)

    def test_default_eta_is_straight(self):
        ic = InclinedCylinder.create([1.0], 1.0, 0.0, 1.0)

        assert ic.eta == (0.0,)

    def test_eta_dimension_checked(self):
        with pytest.raises(GeometryError):
            InclinedCylinder.create([0.0, 0.0], 1.0, 0.0, 1.0, eta=[1.0])

    @settings(max_examples=50, deadline=None)
    @given(coordinate, coordinate, st.floats(min_value=0.0, max_value=3.0))
    def test_round_trip(self, x, y, t):
        ic = InclinedCylinder.create([0.0, 0.0], 1.0, 0.5, 4.0, eta=[0.7, -1.3])
        point = np.array([x, y])

        back = unstraighten(ic, straighten(ic, point, t), t)

        np.testing.assert_allclose(back, point, atol=1e-12)

    def test_pull_back_then_push_forward(self):
        ic = InclinedCylinder.create([0.0], 1.0, 0.0, 1.0, eta=[3.0])

        def u(x, t):
            return np.sin(x[..., 0]) + t

        restored = push_forward(ic, pull_back(ic, u))
        x = np.array([[0.3], [-0.4]])

        np.testing.assert_allclose(restored(x, 0.6), u(x, 0.6))

    def test_straightened_function_moves_with_axis(self):
        """ũ(x̃, t) = u(x̃ + η(t - t1), t)."""
        ic = InclinedCylinder.create([0.0], 1.0, 0.0, 1.0, eta=[2.0])

        def u(x, t):
            return x[..., 0]

        u_tilde = pull_back(ic, u)

        assert float(u_tilde(np.array([0.0]), 0.5)) == pytest.approx(1.0)

    def test_tilt_transform(self):
        ic = InclinedCylinder.create([0.0, 1.0], 0.5, 0.0, 1.0, eta=[2.0, -1.0])

        cylinder, drift = tilt_transform(ic)

        assert cylinder == ic.base
        assert drift == (2.0, -1.0)

    def test_time_derivative_gains_eta_drift(self):
        """∂t ũ = ∂t u + η·Du at corresponding points."""
        ic = InclinedCylinder.create([0.0], 1.0, 0.0, 1.0, eta=[3.0])
        _, drift = tilt_transform(ic)

        def u(x, t):
            return np.sin(x[..., 0]) + t * t

        u_tilde = pull_back(ic, u)
        x_tilde, t, step = np.array([0.2]), 0.4, 1e-6
        x = unstraighten(ic, x_tilde, t)

        dt_tilde = (u_tilde(x_tilde, t + step) - u_tilde(x_tilde, t - step)) / (
            2.0 * step
        )
        expected = 2.0 * t + drift[0] * np.cos(x[0])

        assert float(dt_tilde) == pytest.approx(expected, rel=1e-6)


class TestTiltOperator:
    """F̃(x̃, p) = F(x̃ + η(t - t1), p) + η·p."""

    def test_adds_eta_drift(self):
        spec = make_operator(
            {"kind": "pucci_plus", "dimension": 2, "lambda": 1, "Lambda": 2, "b": 1}
        )
        ic = InclinedCylinder.create([0.0, 0.0], 1.0, 0.0, 1.0, eta=[0.5, 0.25])
        tilted = tilt_operator(spec, ic)
        m = SymMat.diag([1.0, -1.0])
        p = np.array([2.0, 4.0])

        base = eval_operator(spec, [0.0, 0.0], 0.3, 0.0, p, m)
        moved = eval_operator(tilted, [0.0, 0.0], 0.3, 0.0, p, m)

        assert moved - base == pytest.approx(0.5 * 2.0 + 0.25 * 4.0)
        assert tilted.coeffs.drift_norm == pytest.approx(np.hypot(0.5, 0.25))

    def test_dimension_mismatch(self):
        spec = make_operator(
            {"kind": "pucci_plus", "dimension": 2, "lambda": 1, "Lambda": 2}
        )
        ic = InclinedCylinder.create([0.0], 1.0, 0.0, 1.0)

        with pytest.raises(GeometryError):
            tilt_operator(spec, ic)

    def test_residual_commutes_with_substitution(self):
        """M⁺ + b|Du| + cu - ∂t u agrees at corresponding points to 1e-10."""
        spec = make_operator(
            {
                "kind": "pucci_plus",
                "dimension": 2,
                "lambda": 1,
                "Lambda": 2,
                "b": 1.0,
                "c": -0.5,
            }
        )
        ic = InclinedCylinder.create([0.0, 0.0], 1.0, 0.1, 1.0, eta=[0.5, -0.25])
        tilted = tilt_operator(spec, ic)

        def u(x, t):
            x0, x1 = x[..., 0], x[..., 1]
            return x0**3 - 2.0 * x0 * x1 + 0.5 * x1**2 * t + t * t

        def du(x, t):
            return np.array([3.0 * x[0] ** 2 - 2.0 * x[1], -2.0 * x[0] + x[1] * t])

        def d2u(x, t):
            return SymMat.from_array([[6.0 * x[0], -2.0], [-2.0, t]])

        def ut(x, t):
            return 0.5 * x[1] ** 2 + 2.0 * t

        u_tilde = pull_back(ic, u)
        step = 1e-20
        rng = np.random.default_rng(29)
        points = rng.uniform(-1.0, 1.0, (50, 2))
        times = rng.uniform(0.1, 1.0, 50)
        for x_tilde, t in zip(points, times):
            x = unstraighten(ic, x_tilde, t)
            original = eval_operator(spec, x, t, u(x, t), du(x, t), d2u(x, t))
            # complex step gives ∂t ũ without the chain rule
            dt_tilde = float(np.imag(u_tilde(x_tilde, t + 1j * step))) / step
            value = float(u_tilde(x_tilde, t))
            straightened = eval_operator(
                tilted, x_tilde, t, value, du(x, t), d2u(x, t)
            )

            assert straightened - dt_tilde == pytest.approx(
                original - ut(x, t), abs=1e-10
            )
