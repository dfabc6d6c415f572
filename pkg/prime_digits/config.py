"""Runtime settings for the prime engine and the CLI.

Values come from keyword arguments, then environment variables, then the
built-in defaults below.

Environment:
    PRIME_DIGITS_CAPACITY      upper bound (exclusive end) for any sieve request
    PRIME_DIGITS_CACHE_DIR     directory for cached decades (unset disables caching)
    PRIME_DIGITS_SEGMENT_SIZE  integers per sieve segment
    PRIME_DIGITS_WORKERS       threads used to sieve segments
"""

import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from .errors import ConfigurationError

DEFAULT_CAPACITY = 10**8
MIN_CAPACITY = 10**6
DEFAULT_SEGMENT_SIZE = 2**18
CACHE_DIR_ENV = "PRIME_DIGITS_CACHE_DIR"


@dataclass(frozen=True)
class Settings:
    """Engine settings shared by every analysis module."""

    capacity: int = DEFAULT_CAPACITY
    segment_size: int = DEFAULT_SEGMENT_SIZE
    workers: int = 1
    cache_dir: Optional[Path] = None
    refresh_cache: bool = False

    def __post_init__(self):
        if self.capacity < 2:
            raise ConfigurationError(f"capacity must be at least 2, got {self.capacity}")
        if self.segment_size < 2:
            raise ConfigurationError(f"segment_size must be at least 2, got {self.segment_size}")
        if self.workers < 1:
            raise ConfigurationError(f"workers must be at least 1, got {self.workers}")
        if self.cache_dir is not None and not isinstance(self.cache_dir, Path):
            object.__setattr__(self, "cache_dir", Path(self.cache_dir).expanduser())

    @classmethod
    def from_env(cls, **overrides) -> "Settings":
        """Build settings from the environment, letting explicit overrides win.

        Overrides set to None fall through to the environment value.
        """
        cache_dir = os.getenv(CACHE_DIR_ENV)
        settings = cls(
            capacity=_int_env("PRIME_DIGITS_CAPACITY", DEFAULT_CAPACITY),
            segment_size=_int_env("PRIME_DIGITS_SEGMENT_SIZE", DEFAULT_SEGMENT_SIZE),
            workers=_int_env("PRIME_DIGITS_WORKERS", 1),
            cache_dir=Path(cache_dir).expanduser() if cache_dir else None,
        )
        explicit = {key: value for key, value in overrides.items() if value is not None}
        return replace(settings, **explicit) if explicit else settings


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(float(raw)) if "e" in raw.lower() else int(raw.replace("_", ""))
    except ValueError:
        raise ConfigurationError(f"{name} must be an integer, got {raw!r}")
