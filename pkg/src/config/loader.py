"""Configuration loading with environment detection."""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

import structlog
import yaml
from dotenv import load_dotenv
from pydantic import ValidationError

from src.exceptions import (
    ConfigurationError,
    InvalidConfigError,
    MissingConfigError,
)

from .environments import DevelopmentConfig, ProductionConfig, TestingConfig
from .experiment import ExperimentConfig
from .settings import Settings

logger = structlog.get_logger()


def load_config(
    env: Optional[str] = None, config_file: Optional[Path] = None
) -> Settings:
    """Load configuration based on environment.

    Args:
        env: Environment name (development, testing, production)
        config_file: Optional path to a .env file

    Returns:
        Configured Settings instance

    Raises:
        ConfigurationError: If configuration is invalid
    """
    env_file = config_file or Path(".env")
    if env_file.exists():
        logger.info("Loading .env file", path=str(env_file))
        load_dotenv(env_file)
    else:
        logger.debug("No .env file found", path=str(env_file))

    env = env or os.getenv("SMPLAB_ENVIRONMENT", "development")
    logger.info("Loading configuration", environment=env)

    try:
        settings = Settings()  # type: ignore[call-arg]
        settings = _apply_environment_overrides(settings, env)
        _validate_config(settings)

        logger.info(
            "Configuration loaded successfully",
            environment=env,
            debug=settings.debug,
            output_dir=str(settings.output_dir),
            workers=settings.workers,
        )
        return settings

    except Exception as e:
        logger.error("Failed to load configuration", error=str(e), environment=env)
        raise ConfigurationError(f"Configuration loading failed: {e}") from e


def _apply_environment_overrides(settings: Settings, env: Optional[str]) -> Settings:
    """Apply environment-specific configuration overrides."""
    overrides: Dict[str, Any] = {}

    if env == "development":
        overrides = DevelopmentConfig.as_dict()
    elif env == "testing":
        overrides = TestingConfig.as_dict()
    elif env == "production":
        overrides = ProductionConfig.as_dict()
    else:
        logger.warning("Unknown environment, using default settings", environment=env)

    values = settings.model_dump()
    for key, value in overrides.items():
        if key in values:
            values[key] = value
            logger.debug(
                "Applied environment override", key=key, value=value, environment=env
            )
    values["environment"] = env or settings.environment
    return Settings(**values)


def _validate_config(settings: Settings) -> None:
    """Perform additional runtime validation."""
    output_dir = settings.output_dir
    if output_dir.exists() and not output_dir.is_dir():
        raise InvalidConfigError(f"Output path is not a directory: {output_dir}")
    if output_dir.exists() and not os.access(output_dir, os.W_OK):
        raise InvalidConfigError(f"Output directory is not writable: {output_dir}")


def create_test_config(**overrides: Any) -> Settings:
    """Create configuration for testing with optional overrides.

    Args:
        **overrides: Configuration values to override

    Returns:
        Settings instance configured for testing
    """
    test_values = TestingConfig.as_dict()
    test_values["environment"] = "testing"
    test_values.update(overrides)
    return Settings(**test_values)


def _read_document(path: Path) -> Any:
    text = path.read_text(encoding="utf-8")
    if path.suffix.lower() in (".yaml", ".yml"):
        return yaml.safe_load(text)
    return json.loads(text)


def load_experiment_config(path: Path) -> ExperimentConfig:
    """Read and validate an experiment file (JSON, or YAML by suffix).

    Raises:
        MissingConfigError: file does not exist
        InvalidConfigError: unparsable document or schema violation
    """
    path = Path(path)
    if not path.exists():
        raise MissingConfigError(f"Experiment config not found: {path}")

    try:
        document = _read_document(path)
    except (json.JSONDecodeError, yaml.YAMLError, UnicodeDecodeError) as e:
        raise InvalidConfigError(f"Cannot parse {path}: {e}") from e

    if not isinstance(document, dict):
        raise InvalidConfigError(f"{path} must contain a mapping at top level")

    try:
        config = ExperimentConfig.model_validate(document)
    except ValidationError as e:
        raise InvalidConfigError(f"Invalid experiment config {path}: {e}") from e

    logger.debug(
        "Experiment config loaded",
        path=str(path),
        experiment=config.experiment,
        operator=config.operator.kind,
    )
    return config
