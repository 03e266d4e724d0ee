"""
Application configuration using Pydantic Settings.
Loads configuration from environment variables prefixed with THETACHAR_.
"""

from typing import Literal, Optional

from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Engine settings with validation."""

    model_config = SettingsConfigDict(
        env_prefix="THETACHAR_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # Application
    APP_NAME: str = "thetachar"
    APP_VERSION: str = "1.0.0"
    ENVIRONMENT: str = "development"

    # Truncation: default depth (in units of q) of every expansion
    ORDER: int = Field(default=10, ge=1, le=500)

    # Root systems
    WEYL_GROUP_BOUND: int = Field(default=1_000_000, ge=1)

    # Modular data
    S_MATRIX_NORMALIZATION: Literal["calibrated", "literal"] = "calibrated"
    MATRIX_TOLERANCE: float = 1e-9
    FUSION_TOLERANCE: float = 1e-6

    # Expansion memo
    EXPANSION_CACHE_SIZE: int = 4096

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FILE: Optional[str] = None

    @field_validator("LOG_LEVEL")
    @classmethod
    def validate_log_level(cls, v: str) -> str:
        """Validate log level."""
        allowed = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
        if v.upper() not in allowed:
            raise ValueError(f"LOG_LEVEL must be one of: {', '.join(allowed)}")
        return v.upper()

    @property
    def is_production(self) -> bool:
        return self.ENVIRONMENT == "production"


# Create global settings instance
settings = Settings()
