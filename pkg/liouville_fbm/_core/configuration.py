from pathlib import Path
import json
import os
from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from liouville_fbm._core.errors import ConfigError

_app_configurations = None


class Settings(BaseModel):
    """Process-wide numerical settings, read from ``config/<APP_ENV>.json``."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    z_threshold: float = Field(default=4.0, gt=0)
    jitter_tolerance: float = Field(default=1e-12, ge=0)
    quad_tolerance: float = Field(default=1e-10, gt=0)
    max_memory_mb: float = Field(default=1024.0, gt=0)
    workers: int = Field(default=1, ge=1)
    log_level: str = "INFO"
    trace_spans: bool = False

    @field_validator("log_level")
    @classmethod
    def _upper_level(cls, value: str) -> str:
        value = value.upper()
        if value not in {"DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"}:
            raise ValueError(f"unknown log level: {value}")
        return value


def load_configurations(config_dir: str, env: Optional[str] = None) -> Settings:
    global _app_configurations
    env = env or os.getenv("APP_ENV", "dev")
    path = Path(config_dir) / f"{env}.json"
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {path}")
    with open(path, encoding="utf-8") as f:
        raw = json.load(f)
    try:
        _app_configurations = Settings(**raw)
    except ValidationError as ex:
        raise ConfigError(f"Invalid settings in {path}: {ex}") from ex
    return _app_configurations


def get_configurations() -> Settings:
    if _app_configurations is None:
        raise Exception("Configurations not loaded")
    return _app_configurations


def get_settings() -> Settings:
    """Loaded settings, or the defaults when running as a library."""
    return _app_configurations if _app_configurations is not None else Settings()


def reset_configurations() -> None:
    global _app_configurations
    _app_configurations = None
