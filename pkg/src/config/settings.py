"""Configuration management using Pydantic Settings.

Features:
- Environment variable loading (prefix ``SMPLAB_``)
- Type validation
- Default values
- Environment-specific settings
"""

from pathlib import Path
from typing import Any

from pydantic import Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from src.utils.constants import (
    DEFAULT_CERTIFICATE_GRID,
    DEFAULT_CFL_SAFETY,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_PSI_SWEEP_SAMPLES,
    DEFAULT_STRICTNESS_START,
    DEFAULT_STRUCTURE_SAMPLES,
    DEFAULT_T_POS,
)


class Settings(BaseSettings):
    """Process-level settings loaded from environment variables."""

    # Runtime
    environment: str = Field("development", description="Deployment environment")
    debug: bool = Field(False, description="Enable debug mode")
    log_level: str = Field("INFO", description="Logging level")

    # Output
    output_dir: Path = Field(
        Path(DEFAULT_OUTPUT_DIR), description="Default report directory"
    )
    default_seed: int = Field(0, description="Seed used when a config has none")
    workers: int = Field(1, description="Parallel experiments")

    # Numerics
    cfl_safety: float = Field(
        DEFAULT_CFL_SAFETY, description="Fraction of the stable explicit time step"
    )
    certificate_grid: int = Field(
        DEFAULT_CERTIFICATE_GRID, description="Barrier certificate samples per axis"
    )
    psi_sweep_samples: int = Field(
        DEFAULT_PSI_SWEEP_SAMPLES, description="Dense sweep size for min Ψ"
    )
    structure_samples: int = Field(
        DEFAULT_STRUCTURE_SAMPLES, description="Structure-condition samples"
    )
    strictness_start: float = Field(
        DEFAULT_STRICTNESS_START, description="Time after which gaps must be strict"
    )
    t_pos: float = Field(DEFAULT_T_POS, description="Positivity check time")

    model_config = SettingsConfigDict(
        env_prefix="SMPLAB_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator("log_level")
    @classmethod
    def validate_log_level(cls, v: Any) -> str:
        """Validate log level."""
        valid_levels = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if str(v).upper() not in valid_levels:
            raise ValueError(f"log_level must be one of {valid_levels}")
        return str(v).upper()

    @field_validator("workers", "certificate_grid")
    @classmethod
    def validate_positive_int(cls, v: int) -> int:
        if v < 1:
            raise ValueError(f"must be >= 1, got {v}")
        return v

    @field_validator("cfl_safety")
    @classmethod
    def validate_cfl_safety(cls, v: float) -> float:
        if not 0.0 < v <= 1.0:
            raise ValueError(f"cfl_safety must lie in (0, 1], got {v}")
        return v

    @model_validator(mode="after")
    def validate_cross_field_dependencies(self) -> "Settings":
        """Validate dependencies between fields."""
        if self.strictness_start < 0 or self.t_pos < 0:
            raise ValueError("strictness_start and t_pos must be nonnegative")
        if self.psi_sweep_samples < 2 or self.structure_samples < 1:
            raise ValueError("sample counts are too small")
        return self
