"""Environment-specific configuration overrides."""

from typing import Any, Dict


class _Overrides:
    @classmethod
    def as_dict(cls) -> Dict[str, Any]:
        """Return config as dictionary."""
        return {
            key: value
            for key, value in vars(cls).items()
            if not key.startswith("_")
            and not callable(value)
            and not isinstance(value, classmethod)
        }


class DevelopmentConfig(_Overrides):
    """Development environment overrides."""

    debug: bool = True
    log_level: str = "DEBUG"


class TestingConfig(_Overrides):
    """Testing environment configuration."""

    debug: bool = True
    output_dir: str = "/tmp/smplab_test_results"
    certificate_grid: int = 16  # coarse certificate for fast tests
    psi_sweep_samples: int = 10_000
    structure_samples: int = 1_000
    workers: int = 1


class ProductionConfig(_Overrides):
    """Production environment configuration."""

    debug: bool = False
    log_level: str = "INFO"
