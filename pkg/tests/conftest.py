"""Pytest configuration and fixtures."""

import pytest

from src.config import ExperimentConfig, Settings, create_test_config


@pytest.fixture
def test_settings(tmp_path) -> Settings:
    """Testing settings writing into a temporary directory."""
    return create_test_config(output_dir=str(tmp_path / "results"))


@pytest.fixture
def pucci_plus_descriptor():
    """M⁺ with λ=1, Λ=2 in two dimensions."""
    return {"kind": "pucci_plus", "dimension": 2, "lambda": 1.0, "Lambda": 2.0}


@pytest.fixture
def coarse_grid():
    """Grid section small enough for fast scenario runs."""
    return {"spacing": 0.125, "snapshots": 4}


@pytest.fixture
def make_experiment(pucci_plus_descriptor, coarse_grid):
    """Factory for experiment configs on a coarse grid."""

    def build(experiment: str, **overrides) -> ExperimentConfig:
        document = {
            "experiment": experiment,
            "operator": pucci_plus_descriptor,
            "geometry": {"radius": 1.0, "t_start": 0.0, "t_end": 0.05},
            "grid": coarse_grid,
            "seed": 7,
        }
        document.update(overrides)
        return ExperimentConfig.model_validate(document)

    return build
