from pathlib import Path
from typing import Union

import yaml
from pydantic import ValidationError, field_validator
from pydantic_settings import BaseSettings

from app.core.errors import ConfigurationError, ResultIOError
from app.schemas.run_config import RunConfigFile


class Settings(BaseSettings):
    PROJECT_NAME: str = "Multiscale Compressible Flow Solver"
    VERSION: str = "1.0.0"

    # Logging
    LOG_LEVEL: str = "WARNING"
    LOG_FORMAT: str = "%(levelname)-5.5s [%(name)s] %(message)s"

    # Output
    OUTPUT_DIR: str = "results"
    FIELD_FLOAT_FORMAT: str = "%.17g"

    # Numerics
    DEFAULT_JOBS: int = 1
    ZERO_PIVOT_TOL: float = 1e-14

    @field_validator("LOG_LEVEL", mode="before")
    @classmethod
    def normalize_level(cls, v):
        if isinstance(v, str):
            return v.strip().upper()
        raise ValueError(v)

    model_config = {"env_file": ".env"}


settings = Settings()


def parse_run_config(data: dict) -> RunConfigFile:
    try:
        return RunConfigFile.model_validate(data or {})
    except ValidationError as exc:
        raise ConfigurationError(f"invalid run configuration: {exc}") from exc


def load_run_config(path: Union[str, Path]) -> RunConfigFile:
    """Read and validate a YAML run configuration."""
    path = Path(path)
    if not path.is_file():
        raise ConfigurationError(f"configuration file not found: {path}")
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigurationError(f"malformed configuration {path}: {exc}") from exc
    if data is not None and not isinstance(data, dict):
        raise ConfigurationError(f"configuration {path} must be a mapping of sections")
    return parse_run_config(data)


def dump_run_config(config: RunConfigFile) -> str:
    """Canonical text form; loading it back yields an equal config."""
    return yaml.safe_dump(config.model_dump(mode="json"), sort_keys=True, default_flow_style=False)


def write_run_config(config: RunConfigFile, path: Union[str, Path]) -> None:
    try:
        Path(path).write_text(dump_run_config(config))
    except OSError as exc:
        raise ResultIOError(f"cannot write {path}: {exc}") from exc
