"""
Application settings management using Pydantic.
This module holds the numerical configuration of the Milnor frame toolkit:
defect tolerances, singular-value thresholds, sampling limits and logging.
Every value can be overridden through an environment variable of the same
name or a local .env file.
"""

from pydantic import field_validator
from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    PROJECT_NAME: str = "milnor-frames"

    # Tolerances
    MILNOR_TOL: float = 1e-8
    LAMBDA_SNAP_THRESHOLD: float = 1e-9
    CONDITION_WARNING_THRESHOLD: float = 1e12
    SIGNATURE_ZERO_TOL: float = 1e-8

    # Singular-value cut-offs, relative to the largest singular value
    DERIVATION_RCOND: float = 1e-9
    LSTSQ_RCOND: float = 1e-12

    # Random metric sampling
    RANDOM_METRIC_COND_CAP: float = 1e6
    RANDOM_METRIC_MAX_ATTEMPTS: int = 100

    LOG_LEVEL: str = "WARNING"

    @field_validator(
        "MILNOR_TOL",
        "LAMBDA_SNAP_THRESHOLD",
        "CONDITION_WARNING_THRESHOLD",
        "SIGNATURE_ZERO_TOL",
        "DERIVATION_RCOND",
        "LSTSQ_RCOND",
        "RANDOM_METRIC_COND_CAP",
    )
    @classmethod
    def check_positive(cls, v: float) -> float:
        """
        Rejects non-positive thresholds so a misconfigured environment fails
        at start-up instead of silently accepting every residual.
        """
        if not v > 0:
            raise ValueError("tolerances and thresholds must be positive")
        return v

    @field_validator("LOG_LEVEL")
    @classmethod
    def normalize_level(cls, v: str) -> str:
        return v.upper()

    class Config:
        case_sensitive = True
        env_file = ".env"


# Create a global settings instance
settings = Settings()
