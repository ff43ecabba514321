"""Environment override sets."""

import pytest

from src.config import Settings
from src.config.environments import DevelopmentConfig, ProductionConfig, TestingConfig

OVERRIDES = [DevelopmentConfig, TestingConfig, ProductionConfig]


@pytest.mark.parametrize("overrides", OVERRIDES, ids=lambda cls: cls.__name__)
def test_overrides_name_settings_fields(overrides):
    values = overrides.as_dict()

    assert values
    assert set(values) <= set(Settings.model_fields)
    Settings(_env_file=None, **values)


def test_development_logs_everything():
    assert DevelopmentConfig.as_dict() == {"debug": True, "log_level": "DEBUG"}


def test_testing_shrinks_sample_counts():
    values = TestingConfig.as_dict()
    defaults = Settings(_env_file=None)

    assert values["output_dir"] == "/tmp/smplab_test_results"
    assert values["certificate_grid"] < defaults.certificate_grid
    assert values["psi_sweep_samples"] < defaults.psi_sweep_samples
    assert values["structure_samples"] < defaults.structure_samples
    assert values["workers"] == 1


def test_production_is_quiet():
    values = ProductionConfig.as_dict()

    assert values["debug"] is False
    assert values["log_level"] == "INFO"
