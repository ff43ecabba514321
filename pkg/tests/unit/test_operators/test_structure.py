"""Tests for the structure-condition verifier and the Pucci sandwich."""

import numpy as np
import pytest

from src.operators import (
    check_structure_condition,
    custom_operator,
    make_operator,
    pucci_sandwich_gap,
)


def _cubed_trace(p, m):
    return np.trace(m, axis1=-2, axis2=-1) ** 3


class TestStructureCondition:
    """Sampling verifier."""

    @pytest.mark.parametrize(
        "descriptor",
        [
            {"kind": "pucci_plus", "dimension": 2, "lambda": 1, "Lambda": 2},
            {"kind": "pucci_minus", "dimension": 3, "lambda": 0.5, "Lambda": 1.5},
            {
                "kind": "bellman",
                "matrices": [[[1, 0], [0, 2]], [[2, 0.5], [0.5, 1.5]]],
                "b": 1.0,
                "c": -0.5,
            },
            {"kind": "normalized_p_laplacian", "p": 3.0},
            {"kind": "normalized_p_laplacian", "p": 1.5, "dimension": 3},
            {"kind": "lagrangian_mcf", "dimension": 2, "theta0": 0.5},
            {
                "kind": "pucci_plus",
                "dimension": 2,
                "lambda": 1,
                "Lambda": 2,
                "drift": [0.5, -1.0],
            },
        ],
    )
    def test_catalog_operators_pass(self, descriptor):
        report = check_structure_condition(make_operator(descriptor), 2000, seed=1)

        assert report.passed, report.to_dict()
        assert report.samples_checked == 2000
        assert report.worst_lower_margin >= -1e-9
        assert report.worst_upper_margin >= -1e-9

    @pytest.mark.parametrize(
        "descriptor",
        [
            {
                "kind": "linear",
                "matrices": [[[1.5, 0.0], [0.0, 1.5]]],
                "lambda": 1.0,
                "Lambda": 2.0,
            },
            {"kind": "normalized_p_laplacian", "p": 3.0},
        ],
        ids=["linear_mid_band", "p_laplacian"],
    )
    def test_full_sample_count(self, descriptor):
        """10⁴ samples with (λ, Λ) = (1, 2)."""
        spec = make_operator(descriptor)

        report = check_structure_condition(spec, 10_000, seed=0)

        assert spec.ellipticity == (1.0, 2.0)
        assert report.passed, report.to_dict()
        assert report.samples_checked == 10_000
        assert report.violation_count == 0

    def test_mid_band_linear_margins(self):
        """F(M+N) - F(M) = 1.5 Tr(N) sits inside [Tr(N), 2 Tr(N)] at any scale."""
        spec = make_operator(
            {
                "kind": "linear",
                "matrices": [[[1.5, 0.0], [0.0, 1.5]]],
                "lambda": 1.0,
                "Lambda": 2.0,
            }
        )

        report = check_structure_condition(spec, 1000, scale=10.0, seed=2)

        assert report.passed
        assert report.worst_lower_margin >= -1e-9
        assert report.worst_upper_margin >= -1e-9

    def test_cubed_trace_is_detected(self):
        """Tr(M)³ is not uniformly elliptic."""
        spec = custom_operator(_cubed_trace, 2, 1.0, 2.0)

        report = check_structure_condition(spec, 1000, scale=10.0, seed=0)

        assert not report.passed
        assert report.violation_count > 0
        assert 0 < len(report.violations) <= 50
        sample = report.violations[0]
        assert sample.N.n == 2
        assert min(sample.lower_margin, sample.upper_margin) < 0

    def test_p_laplacian_shares_gradient(self):
        spec = make_operator({"kind": "normalized_p_laplacian", "p": 3.0})

        report = check_structure_condition(spec, 100, seed=0)

        assert report.gradient_coupling == "shared"

    def test_deterministic_in_seed(self):
        spec = make_operator(
            {"kind": "pucci_plus", "dimension": 2, "lambda": 1, "Lambda": 2}
        )

        first = check_structure_condition(spec, 3000, seed=5)
        second = check_structure_condition(spec, 3000, seed=5)

        assert first.to_dict() == second.to_dict()

    @pytest.mark.parametrize("samples,scale", [(0, 1.0), (10, 0.0)])
    def test_invalid_arguments(self, samples, scale):
        spec = make_operator(
            {"kind": "pucci_plus", "dimension": 2, "lambda": 1, "Lambda": 2}
        )

        with pytest.raises(ValueError):
            check_structure_condition(spec, samples, scale=scale)


class TestPucciSandwich:
    """M⁻(M) - b|p| + c r <= F(r,p,M) - F(0,0,0) <= M⁺(M) + b|p| + c r."""

    def test_bellman_sandwich(self):
        spec = make_operator(
            {
                "kind": "bellman",
                "matrices": [[[1, 0], [0, 2]], [[1.5, 0.2], [0.2, 1.2]]],
                "b": 0.7,
                "c": -0.3,
                "f": 1.0,
            }
        )
        rng = np.random.default_rng(11)
        g = rng.uniform(-1, 1, (200, 2, 2))
        m = 0.5 * (g + np.swapaxes(g, -1, -2))
        p = rng.uniform(-1, 1, (200, 2))
        r = rng.uniform(0, 1, 200)
        x = rng.uniform(-1, 1, (200, 2))

        upper, lower = pucci_sandwich_gap(spec, x, 0.3, r, p, m)

        assert np.all(upper >= -1e-9)
        assert np.all(lower >= -1e-9)
