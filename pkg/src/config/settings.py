"""Process-level settings read from FRACWAVE_* environment variables and .env."""

from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class RuntimeSettings(BaseSettings):
    """FRACWAVE_THREADS caps worker processes, FRACWAVE_ENVIRONMENT picks the loader."""

    model_config = SettingsConfigDict(env_prefix="FRACWAVE_", env_file=".env", extra="ignore")

    threads: Optional[int] = Field(default=None, ge=1)
    environment: str = Field(default="development")
    log_level: Optional[str] = Field(default=None)
    seed: Optional[int] = Field(default=None, ge=0)
    solver_rtol: Optional[float] = Field(default=None, gt=0.0)
    picard_tol: Optional[float] = Field(default=None, gt=0.0)
    picard_max_iter: Optional[int] = Field(default=None, ge=1)
    helmholtz_method: Optional[str] = Field(default=None)


def get_settings() -> RuntimeSettings:
    return RuntimeSettings()


def worker_cap(requested: int, settings: Optional[RuntimeSettings] = None) -> int:
    """Requested worker count limited by FRACWAVE_THREADS when it is set."""
    settings = settings or get_settings()
    requested = max(1, int(requested))
    if settings.threads is None:
        return requested
    return min(requested, settings.threads)
