"""
Run-time configuration
Defaults for exploration depth, history budget and output, read from the
environment (and a local .env file)
"""

import os
from dataclasses import dataclass, replace
from typing import Optional
from dotenv import load_dotenv

from src.error_handler import ConfigError

load_dotenv()

OUTPUT_FORMATS = ("text", "json")


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw.replace("_", ""))
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got '{raw}'", variable=name)
    if value < 0:
        raise ConfigError(f"{name} must be non-negative, got {value}", variable=name)
    return value


def _env_bool(name: str, default: bool) -> bool:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    return raw.strip().lower() in ("1", "true", "yes", "on")


@dataclass(frozen=True)
class PadelConfig:
    """Settings shared by the CLI, the demo and the checkers"""
    depth: int = 3
    depth_cap: int = 6
    budget: int = 1_000_000
    strict_depth: bool = False
    output_format: str = "text"
    verbose: bool = False

    @classmethod
    def from_env(cls) -> "PadelConfig":
        """Build a config from PADEL_* environment variables"""
        output_format = os.getenv("PADEL_FORMAT", cls.output_format).strip().lower()
        if output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"PADEL_FORMAT must be one of {OUTPUT_FORMATS}, got '{output_format}'",
                              variable="PADEL_FORMAT")
        return cls(
            depth=_env_int("PADEL_DEPTH", cls.depth),
            depth_cap=_env_int("PADEL_DEPTH_CAP", cls.depth_cap),
            budget=_env_int("PADEL_BUDGET", cls.budget),
            strict_depth=_env_bool("PADEL_STRICT_DEPTH", cls.strict_depth),
            output_format=output_format,
            verbose=_env_bool("PADEL_VERBOSE", cls.verbose),
        )

    def with_overrides(self, depth: Optional[int] = None, budget: Optional[int] = None,
                       strict_depth: Optional[bool] = None, output_format: Optional[str] = None,
                       verbose: Optional[bool] = None) -> "PadelConfig":
        """Apply command-line flags on top of the environment values"""
        changes = {
            "depth": depth,
            "budget": budget,
            "strict_depth": strict_depth,
            "output_format": output_format,
            "verbose": verbose,
        }
        return replace(self, **{k: v for k, v in changes.items() if v is not None})
