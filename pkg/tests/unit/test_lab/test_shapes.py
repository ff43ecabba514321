"""Tests for data shapes and stationary quadratics."""

import numpy as np
import pytest

from src.config.experiment import ShapeDescriptor
from src.exceptions import InvalidConfigError
from src.lab import SHAPE_NAMES, make_shape, quadratic_residual, stationary_quadratic
from src.lab.shapes import shifted
from src.operators import make_operator

ORIGIN = np.zeros((1, 2))


class TestShapes:
    """Named shapes evaluated on point arrays."""

    def test_all_names_build(self):
        for name in SHAPE_NAMES:
            fn = make_shape(ShapeDescriptor(shape=name), 2)
            assert fn(np.zeros((3, 4, 2)), 0.0).shape == (3, 4)

    def test_bump_peak_and_support(self):
        fn = make_shape(ShapeDescriptor(shape="bump", amplitude=2.0, offset=0.5), 2)

        assert fn(ORIGIN, 0.0)[0] == pytest.approx(2.5)
        assert fn(np.array([[1.5, 0.0]]), 0.0)[0] == pytest.approx(0.5)

    def test_center_argument_used_when_descriptor_has_none(self):
        fn = make_shape(ShapeDescriptor(shape="cosine_bump"), 2, center=[1.0, 1.0])

        assert fn(np.array([[1.0, 1.0]]), 0.0)[0] == pytest.approx(1.0)
        assert fn(ORIGIN, 0.0)[0] == pytest.approx(0.0)

    def test_constant(self):
        fn = make_shape(ShapeDescriptor(shape="constant", amplitude=3.0), 1)

        np.testing.assert_allclose(fn(np.zeros((4, 1)), 0.2), 3.0)

    def test_quadratic_coefficients(self):
        fn = make_shape(
            ShapeDescriptor(shape="quadratic", coefficients=[-2.0, 1.0]), 2
        )

        assert fn(np.array([[1.0, 1.0]]), 0.0)[0] == pytest.approx(-1.0)

    def test_quadratic_coefficient_mismatch(self):
        with pytest.raises(InvalidConfigError):
            make_shape(ShapeDescriptor(shape="quadratic", coefficients=[1.0]), 2)

    def test_center_mismatch(self):
        with pytest.raises(InvalidConfigError):
            make_shape(ShapeDescriptor(shape="bump", center=[0.0]), 2)

    def test_shifted(self):
        fn = shifted(make_shape(ShapeDescriptor(shape="constant"), 2), -1.5)

        assert fn(ORIGIN, 0.0)[0] == pytest.approx(-0.5)


class TestStationaryQuadratic:
    """G(diag(2q)) = 0 by bisection."""

    def test_pucci_plus(self, pucci_plus_descriptor):
        spec = make_operator(pucci_plus_descriptor)

        q = stationary_quadratic(spec)

        # Λ·2 + λ·(-2s) = 0 gives s = 2
        assert q[0] == pytest.approx(-2.0)
        assert q[1] == 1.0
        assert quadratic_residual(spec, q) == pytest.approx(0.0, abs=1e-10)

    def test_heat_is_harmonic_quadratic(self):
        spec = make_operator({"kind": "linear", "matrices": [[[1, 0], [0, 1]]]})

        assert stationary_quadratic(spec) == pytest.approx((-1.0, 1.0))

    def test_one_dimension(self):
        spec = make_operator(
            {"kind": "pucci_minus", "dimension": 1, "lambda": 1, "Lambda": 2}
        )

        assert stationary_quadratic(spec) == (0.0,)

    def test_gradient_dependent_rejected(self):
        spec = make_operator(
            {
                "kind": "normalized_p_laplacian",
                "dimension": 2,
                "p": 3.0,
                "singular_gradient": "upper_envelope",
            }
        )

        with pytest.raises(InvalidConfigError):
            stationary_quadratic(spec)
