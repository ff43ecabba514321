"""Configuration module."""

from .environments import DevelopmentConfig, ProductionConfig, TestingConfig
from .experiment import (
    BarrierConfig,
    ExperimentConfig,
    GeometryConfig,
    GridConfig,
    OperatorDescriptor,
    ShapeDescriptor,
)
from .loader import create_test_config, load_config, load_experiment_config
from .settings import Settings

__all__ = [
    "Settings",
    "load_config",
    "load_experiment_config",
    "create_test_config",
    "DevelopmentConfig",
    "ProductionConfig",
    "TestingConfig",
    "ExperimentConfig",
    "OperatorDescriptor",
    "GeometryConfig",
    "GridConfig",
    "ShapeDescriptor",
    "BarrierConfig",
]
