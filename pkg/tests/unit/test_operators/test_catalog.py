"""Tests for operator construction and evaluation."""

import numpy as np
import pytest

from src.exceptions import (
    EllipticityError,
    MalformedOperatorError,
    SingularGradientError,
    UnknownOperatorError,
)
from src.operators import (
    OperatorKind,
    bellman_operator,
    custom_operator,
    eval_operator,
    evaluate,
    linear_operator,
    make_operator,
    principal_part,
)
from src.symmat import SymMat


def _at(spec, m, p=None, r=0.0):
    n = spec.dimension
    return eval_operator(spec, np.zeros(n), 0.0, r, p or np.zeros(n), m)


class TestCatalog:
    """Principal parts of every catalog member."""

    def test_bellman_single_identity(self):
        spec = make_operator({"kind": "bellman", "matrices": [[[1, 0], [0, 1]]]})

        assert spec.ellipticity == (1.0, 1.0)
        assert _at(spec, SymMat.diag([2.0, 3.0])) == pytest.approx(5.0)

    def test_bellman_sup_and_inf(self):
        family = [np.diag([1.0, 2.0]), np.diag([2.0, 1.0])]
        m = SymMat.diag([1.0, -1.0])

        sup = bellman_operator(family, (1.0, 2.0))
        inf = make_operator(
            {
                "kind": "bellman",
                "matrices": [f.tolist() for f in family],
                "optimize": "inf",
            }
        )

        assert _at(sup, m) == pytest.approx(1.0)
        assert _at(inf, m) == pytest.approx(-1.0)

    def test_isaacs_sup_inf(self):
        spec = make_operator(
            {
                "kind": "isaacs",
                "isaacs_matrices": [
                    [[[1, 0], [0, 1]], [[2, 0], [0, 2]]],
                    [[[1, 0], [0, 2]], [[2, 0], [0, 1]]],
                ],
            }
        )
        m = SymMat.diag([1.0, -1.0])

        # rows: min(0, 0) = 0 and min(-1, 1) = -1; sup over rows is 0
        assert _at(spec, m) == pytest.approx(0.0)

    def test_linear(self):
        spec = linear_operator([[2.0, 0.5], [0.5, 1.0]])
        m = SymMat.from_array([[1.0, 1.0], [1.0, 1.0]])

        assert _at(spec, m) == pytest.approx(4.0)

    def test_pucci_plus_with_lower_order_terms(self):
        spec = make_operator(
            {
                "kind": "pucci_plus",
                "dimension": 2,
                "lambda": 1,
                "Lambda": 2,
                "b": 1.0,
                "c": -1.0,
                "f": 0.5,
            }
        )

        value = _at(spec, SymMat.diag([1.0, -1.0]), p=[3.0, 4.0], r=2.0)

        # M⁺ = 2 - 1, b|p| = 5, c r = -2, f = 0.5
        assert value == pytest.approx(4.5)

    def test_gradient_mode_minus(self):
        spec = make_operator(
            {
                "kind": "pucci_minus",
                "dimension": 2,
                "lambda": 1,
                "Lambda": 1,
                "b": 2.0,
                "gradient_mode": "minus",
            }
        )

        assert _at(spec, SymMat.zeros(2), p=[0.0, 1.0]) == pytest.approx(-2.0)

    def test_drift(self):
        spec = make_operator(
            {
                "kind": "pucci_plus",
                "dimension": 2,
                "lambda": 1,
                "Lambda": 1,
                "drift": [1.0, -2.0],
            }
        )

        assert _at(spec, SymMat.zeros(2), p=[3.0, 1.0]) == pytest.approx(1.0)

    def test_amplitude_scales_principal_part(self):
        spec = make_operator(
            {
                "kind": "pucci_plus",
                "dimension": 2,
                "lambda": 1,
                "Lambda": 2,
                "amplitude": 3.0,
            }
        )

        assert spec.effective_ellipticity == (3.0, 6.0)
        assert _at(spec, SymMat.identity(2)) == pytest.approx(12.0)

    def test_truncated(self):
        spec = make_operator(
            {
                "kind": "truncated_pucci",
                "dimension": 2,
                "k": 1,
                "lambda": 1,
                "Lambda": 2,
            }
        )

        assert spec.kind is OperatorKind.TRUNCATED_PUCCI
        assert _at(spec, SymMat.diag([0.0, 2.0])) == 0.0
        assert _at(spec, SymMat.diag([-1.0, 2.0])) == pytest.approx(-2.0)

    def test_p_laplacian_regular(self):
        spec = make_operator({"kind": "normalized_p_laplacian", "p": 3.0})

        assert spec.ellipticity == (1.0, 2.0)
        assert _at(spec, SymMat.diag([1.0, 2.0]), p=[1.0, 0.0]) == pytest.approx(4.0)

    def test_p_laplacian_rejects_zero_gradient(self):
        spec = make_operator({"kind": "normalized_p_laplacian", "p": 3.0})
        m = np.diag([1.0, 2.0])[None, ...]

        with pytest.raises(SingularGradientError):
            principal_part(spec, np.zeros((1, 2)), m)

    @pytest.mark.parametrize(
        "mode,expected",
        [("upper_envelope", 5.0), ("lower_envelope", 4.0), ("symmetric", 3.0)],
    )
    def test_p_laplacian_envelopes(self, mode, expected):
        spec = make_operator(
            {"kind": "normalized_p_laplacian", "p": 3.0, "singular_gradient": mode}
        )

        value = principal_part(spec, np.zeros((1, 2)), np.diag([1.0, 2.0])[None])

        assert value[0] == pytest.approx(expected)

    @pytest.mark.parametrize("exponent", [1.5, 3.0, 4.0])
    def test_p_laplacian_radial_closed_form(self, exponent):
        """M = a p̂⊗p̂ + b(I - p̂⊗p̂) gives a(p - 1) + b(n - 1)."""
        n = 3
        spec = make_operator(
            {"kind": "normalized_p_laplacian", "p": exponent, "dimension": n}
        )
        rng = np.random.default_rng(17)
        grad = rng.normal(size=(200, n)) * rng.uniform(0.1, 10.0, size=(200, 1))
        unit = grad / np.linalg.norm(grad, axis=-1, keepdims=True)
        a, b = rng.uniform(-3.0, 3.0, size=(2, 200))
        radial = unit[:, :, None] * unit[:, None, :]
        m = a[:, None, None] * radial + b[:, None, None] * (np.eye(n) - radial)

        values = principal_part(spec, grad, m)

        np.testing.assert_allclose(
            values, a * (exponent - 1.0) + b * (n - 1.0), rtol=0.0, atol=1e-10
        )

    @pytest.mark.parametrize(
        "descriptor",
        [
            {
                "kind": "bellman",
                "matrices": [
                    [[1.5, 0.4], [0.4, 1.5]],
                    [[1.0, 0.0], [0.0, 2.0]],
                    [[2.0, 0.0], [0.0, 1.0]],
                ],
            },
            {
                "kind": "isaacs",
                "isaacs_matrices": [
                    [[[1.5, 0.4], [0.4, 1.5]], [[1.0, 0.0], [0.0, 2.0]]],
                    [[[2.0, 0.0], [0.0, 1.0]], [[1.5, -0.4], [-0.4, 1.5]]],
                ],
            },
        ],
        ids=["bellman", "isaacs"],
    )
    def test_monotone_in_hessian(self, descriptor):
        """M <= M' implies F(M) <= F(M')."""
        spec = make_operator(descriptor)
        rng = np.random.default_rng(23)
        g = rng.normal(size=(1000, 2, 2))
        m = g + np.swapaxes(g, -1, -2)
        q = rng.normal(size=(1000, 2, 2))
        larger = m + q @ np.swapaxes(q, -1, -2)
        p = np.zeros((1000, 2))

        low = principal_part(spec, p, m)
        high = principal_part(spec, p, larger)

        assert np.all(low <= high + 1e-12 * (1.0 + np.abs(high)))

    def test_lagrangian_mcf(self):
        spec = make_operator(
            {"kind": "lagrangian_mcf", "dimension": 2, "theta0": 0.5}
        )

        assert spec.ellipticity == (0.5, 1.0)
        assert _at(spec, SymMat.diag([1.0, 1.0])) == pytest.approx(np.pi / 2)

    def test_custom_kernel(self):
        spec = custom_operator(
            lambda p, m: np.trace(m, axis1=-2, axis2=-1), 2, 1.0, 1.0
        )

        assert _at(spec, SymMat.diag([1.0, 2.0])) == pytest.approx(3.0)

    def test_batched_evaluate(self):
        spec = make_operator(
            {"kind": "pucci_plus", "dimension": 1, "lambda": 1, "Lambda": 2}
        )
        m = np.array([[[1.0]], [[-1.0]]])

        values = evaluate(spec, np.zeros((2, 1)), 0.0, np.zeros(2), np.zeros((2, 1)), m)

        np.testing.assert_allclose(values, [2.0, -1.0])


class TestFactoryErrors:
    """Invalid descriptors fail loudly."""

    def test_unknown_kind(self):
        with pytest.raises(UnknownOperatorError):
            make_operator({"kind": "monge_ampere", "dimension": 2})

    def test_custom_not_configurable(self):
        with pytest.raises(UnknownOperatorError):
            make_operator({"kind": "custom", "dimension": 2})

    def test_matrix_outside_band(self):
        with pytest.raises(EllipticityError):
            make_operator(
                {
                    "kind": "bellman",
                    "lambda": 1,
                    "Lambda": 2,
                    "matrices": [[[3, 0], [0, 1]]],
                }
            )

    def test_non_symmetric_matrix(self):
        with pytest.raises(MalformedOperatorError):
            make_operator({"kind": "linear", "matrices": [[[1, 1], [0, 1]]]})

    def test_truncation_needs_k_below_n(self):
        with pytest.raises(MalformedOperatorError):
            make_operator(
                {
                    "kind": "truncated_pucci",
                    "dimension": 2,
                    "k": 2,
                    "lambda": 1,
                    "Lambda": 1,
                }
            )

    def test_p_must_exceed_one(self):
        with pytest.raises(MalformedOperatorError):
            make_operator({"kind": "normalized_p_laplacian", "p": 1.0})

    def test_pucci_needs_constants(self):
        with pytest.raises(MalformedOperatorError):
            make_operator({"kind": "pucci_plus", "dimension": 2})

    def test_mcf_empty_branch(self):
        with pytest.raises(MalformedOperatorError):
            make_operator({"kind": "lagrangian_mcf", "dimension": 2, "theta0": 2.0})

    def test_degenerate_slot(self):
        """G(0, 0) must vanish."""
        with pytest.raises(MalformedOperatorError):
            custom_operator(lambda p, m: np.ones(p.shape[:-1]), 2, 1.0, 1.0)
