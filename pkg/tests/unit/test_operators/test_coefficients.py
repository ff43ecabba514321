"""Tests for lower-order coefficient fields."""

import numpy as np
import pytest

from src.exceptions import CoefficientBoundError, MalformedOperatorError
from src.operators import CoefficientField, constant


def test_constants_declare_tight_bounds():
    field = CoefficientField.constants(b=2.0, c=-0.5, f=1.0, drift=[3.0, 4.0])

    assert field.b_sup == 2.0
    assert field.c_abs_sup == 0.5
    assert field.drift_norm == 5.0
    assert field.first_order_bound == 7.0
    assert field.has_lower_order_terms
    assert not field.forcing_free


def test_zero_field_has_no_lower_order_terms():
    field = CoefficientField()

    assert not field.has_lower_order_terms
    assert field.forcing_free


@pytest.mark.parametrize("kwargs", [{"b": -1.0}, {"c": 0.5}])
def test_sign_constraints(kwargs):
    with pytest.raises(MalformedOperatorError):
        CoefficientField.constants(**kwargs)


def test_amplitude_bounds():
    with pytest.raises(MalformedOperatorError):
        CoefficientField(a_inf=2.0, a_sup=1.0)


def test_bound_violation_on_evaluation():
    """A field leaving its declared bound fails when sampled."""
    field = CoefficientField(
        b=lambda x, t: np.abs(x[..., 0]), b_sup=0.5, c=constant(0.0)
    )
    x = np.array([[0.2, 0.0], [0.9, 0.0]])

    with pytest.raises(CoefficientBoundError):
        field.evaluate(x, 0.0)


def test_evaluate_broadcasts():
    field = CoefficientField.constants(b=1.0, c=-1.0)

    values = field.evaluate(np.zeros((3, 4, 2)), 0.0)

    assert values.b.shape == (3, 4)
    assert np.all(values.c == -1.0)
    assert np.all(values.a == 1.0)


def test_drift_dimension_mismatch():
    field = CoefficientField.constants(drift=[1.0, 2.0])

    with pytest.raises(MalformedOperatorError):
        field.drift_vector(3)


def test_tilted_adds_eta_to_drift():
    field = CoefficientField.constants(b=1.0, drift=[1.0, 0.0])

    tilted = field.tilted([0.5, -0.5], t1=0.0)

    np.testing.assert_allclose(tilted.drift_vector(2), [1.5, -0.5])
    assert tilted.b_sup == 1.0


def test_tilted_composes_variable_fields():
    """f̃(x̃, t) = f(x̃ + η(t - t1), t)."""
    field = CoefficientField(f=lambda x, t: x[..., 0])

    tilted = field.tilted([2.0, 0.0], t1=1.0)
    values = tilted.evaluate(np.array([[0.5, 0.0]]), 1.5)

    assert values.f[0] == pytest.approx(1.5)
    assert not tilted.forcing_free
