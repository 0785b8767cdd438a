from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field, field_validator
from typing import Optional
from dotenv import load_dotenv
import psutil

# Load environment variables from .env file
load_dotenv()


def _hardware_threads() -> int:
    return psutil.cpu_count(logical=True) or 1


class Settings(BaseSettings):
    """Runtime settings with environment variable support"""

    model_config = SettingsConfigDict(
        env_prefix="ADRX_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    app_name: str = "adrx"

    # Parallelism (ADRX_THREADS)
    threads: int = Field(default_factory=_hardware_threads)

    # Logging
    log_level: str = Field(default="INFO")
    log_file: Optional[str] = Field(default=None)
    log_rotation: str = "1 day"
    log_retention: str = "30 days"

    # Trial counts
    default_trials: int = Field(default=100, ge=1)  # desk scale
    full_trials: int = Field(default=1000, ge=1)

    # Comparison thresholds
    z_threshold: float = Field(default=4.0, gt=0.0)
    relative_error_floor: float = Field(default=0.5, ge=0.0)  # molecules
    acceptance_fraction: float = Field(default=0.95, gt=0.0, le=1.0)
    rms_relative_error_limit: float = Field(default=0.10, gt=0.0)

    @field_validator("threads")
    @classmethod
    def clamp_threads(cls, v: int) -> int:
        return max(1, int(v))

    @field_validator("log_level")
    @classmethod
    def normalise_log_level(cls, v: str) -> str:
        return v.upper()


# Global settings instance
settings = Settings()
