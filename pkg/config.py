#!/usr/bin/env python3
"""
Runtime settings for the Bell-decomposable entanglement toolkit.
Values come from environment variables; command-line flags override them.
"""

import logging
import os
import sys
from typing import Callable, Optional, TypeVar

from exceptions import ConfigError

T = TypeVar('T')

LOG_FORMAT = '%(asctime)s %(levelname)s %(name)s: %(message)s'


def _env(name: str, default: T, cast: Callable[[str], T]) -> T:
    raw = os.getenv(name, '')
    if not raw.strip():
        return default
    try:
        return cast(raw.strip())
    except ValueError:
        raise ConfigError(f"Environment variable {name}={raw!r} is not a valid {cast.__name__}")


class Settings:
    """Defaults for the verification suite and logging."""

    def __init__(self):
        self.seed = _env('BDENT_SEED', 0, int)
        self.samples = _env('BDENT_SAMPLES', 1000, int)
        self.grid_step = _env('BDENT_GRID_STEP', 0.01, float)
        self.workers = _env('BDENT_WORKERS', 1, int)
        self.log_level = _env('BDENT_LOG_LEVEL', 'WARNING', str).upper()

        if self.seed < 0 or self.seed >= 2 ** 64:
            raise ConfigError(f"BDENT_SEED must be an unsigned 64-bit integer, got {self.seed}")
        if self.samples < 1:
            raise ConfigError(f"BDENT_SAMPLES must be at least 1, got {self.samples}")
        if self.workers < 1:
            raise ConfigError(f"BDENT_WORKERS must be at least 1, got {self.workers}")
        if not isinstance(logging.getLevelName(self.log_level), int):
            raise ConfigError(f"BDENT_LOG_LEVEL {self.log_level!r} is not a logging level")

    def __repr__(self) -> str:
        return (f"Settings(seed={self.seed}, samples={self.samples}, grid_step={self.grid_step}, "
                f"workers={self.workers}, log_level={self.log_level!r})")


def configure_logging(level: Optional[str] = None) -> None:
    """Send log records to stderr; stdout is reserved for command output."""
    logging.basicConfig(
        level=(level or 'WARNING').upper(),
        format=LOG_FORMAT,
        stream=sys.stderr,
        force=True,
    )
