"""Test custom exceptions."""

import pytest

from src.exceptions import (
    CFLViolationError,
    ConfigurationError,
    EllipticityError,
    InvalidConfigError,
    OperatorError,
    ReportError,
    SmpLabError,
    SolverError,
    SteppingError,
    UnknownExperimentError,
    ZeroDurationSegmentError,
)


def test_base_exception():
    """Test base exception."""
    with pytest.raises(SmpLabError):
        raise SmpLabError("Test error")


def test_configuration_error():
    """Test configuration error inheritance."""
    with pytest.raises(SmpLabError):
        raise InvalidConfigError("Config error")

    with pytest.raises(ConfigurationError):
        raise UnknownExperimentError("no such experiment")


def test_operator_and_solver_errors():
    """Operator and solver errors stay outside the configuration branch."""
    with pytest.raises(OperatorError):
        raise EllipticityError("band")

    with pytest.raises(SolverError):
        raise CFLViolationError("dt")

    assert not issubclass(OperatorError, ConfigurationError)
    assert not issubclass(ZeroDurationSegmentError, ConfigurationError)


def test_errors_carry_context():
    """Stepping and report errors keep the step and the path."""
    stepping = SteppingError("blew up", step=12)
    report = ReportError("cannot write", "/tmp/report.json")

    assert stepping.step == 12
    assert report.path == "/tmp/report.json"
