import os
from functools import lru_cache
from typing import Optional

from dotenv import find_dotenv, load_dotenv
from pydantic import BaseModel, Field, field_validator

from spr.errors import InvalidParameter

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


def _default_threads() -> int:
    return max(1, min(8, os.cpu_count() or 1))


class Settings(BaseModel):
    threads: int = Field(default_factory=_default_threads, ge=1)
    log_level: str = "INFO"
    bench_repeats: int = Field(default=3, ge=1)
    default_seed: int = Field(default=0, ge=0)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, v: str) -> str:
        if v not in LOG_LEVELS:
            raise ValueError(f"LOG_LEVEL must be one of {', '.join(LOG_LEVELS)}")
        return v


def _env_int(name: str) -> Optional[int]:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return None
    try:
        return int(raw)
    except ValueError:
        raise InvalidParameter(f"{name} must be an integer", value=raw)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """Settings from .env (if present) and the process environment."""
    load_dotenv(find_dotenv(usecwd=True))
    values = {}
    threads = _env_int("SPR_THREADS")
    if threads is not None:
        values["threads"] = threads
    repeats = _env_int("SPR_BENCH_REPEATS")
    if repeats is not None:
        values["bench_repeats"] = repeats
    seed = _env_int("SPR_DEFAULT_SEED")
    if seed is not None:
        values["default_seed"] = seed
    values["log_level"] = os.getenv("LOG_LEVEL", "INFO").upper()
    return Settings(**values)
