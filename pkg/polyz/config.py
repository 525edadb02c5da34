# polyz/config.py
import logging
import os
from pathlib import Path

from dotenv import load_dotenv
from pydantic import BaseModel, Field

from polyz.errors import ConfigError

# Load .env from the project root, then from the working directory
root_dir = Path(__file__).parent.parent
load_dotenv(root_dir / ".env")
load_dotenv()


class Settings(BaseModel):
    """Runtime defaults for sampling, benchmarks and logging."""

    seed: int = Field(default=20240601, description="Default sampling seed")
    sample_count: int = Field(default=1000, ge=0, description="Witness verification samples")
    exponent_bound: int = Field(default=10, ge=0, description="Sampling exponent bound")
    bench_count: int = Field(default=10000, ge=0, description="Default bench input count")
    log_level: str = Field(default="WARNING", description="Logging level for the CLI")


_ENV_FIELDS = {
    "POLYZ_SEED": "seed",
    "POLYZ_SAMPLE_COUNT": "sample_count",
    "POLYZ_EXPONENT_BOUND": "exponent_bound",
    "POLYZ_BENCH_COUNT": "bench_count",
    "POLYZ_LOG_LEVEL": "log_level",
}


def _read_int(variable: str, raw: str) -> int:
    try:
        return int(raw.strip())
    except ValueError:
        raise ConfigError(f"{variable} must be an integer, got {raw!r}")


def get_settings() -> Settings:
    """Build settings from environment variables."""
    values = {}
    for variable, field in _ENV_FIELDS.items():
        raw = os.environ.get(variable)
        if raw is None or raw.strip() == "":
            continue
        if field == "log_level":
            level = raw.strip().upper()
            if not isinstance(logging.getLevelName(level), int):
                raise ConfigError(f"{variable} is not a logging level: {raw!r}")
            values[field] = level
        else:
            values[field] = _read_int(variable, raw)

    try:
        return Settings(**values)
    except ValueError as e:
        raise ConfigError(f"Invalid polyz configuration: {e}")
