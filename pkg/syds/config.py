"""
Configuration
Resource caps and logging level, read from the environment (.env supported)
"""

import logging
import os
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field

logger = logging.getLogger(__name__)

# Try multiple paths to find .env file (project root or package directory)
env_paths = [
    Path(__file__).parent.parent / ".env",  # Project root
    Path(__file__).parent / ".env",         # Package directory
    Path(".env"),                           # Current directory
]


def load_environment() -> Optional[Path]:
    """Load the first .env file found; returns its path or None"""
    for env_path in env_paths:
        if env_path.exists():
            load_dotenv(dotenv_path=env_path, override=False)
            logger.debug(f"✅ Loaded .env from: {env_path}")
            return env_path
    load_dotenv(override=False)
    return None


class Settings(BaseModel):
    orbit_memory_cap: int = Field(1 << 22, ge=1)
    max_config_bits: int = Field(24, ge=1)
    treedepth_exact_cap: int = Field(20, ge=1)
    logic_variable_cap: int = Field(20, ge=1)
    influence_set_cap: int = Field(20, ge=1)
    tuple_position_cap: int = Field(14, ge=1)
    log_level: str = "WARNING"

    @classmethod
    def from_env(cls) -> "Settings":
        def _int(name: str, default: int) -> int:
            raw = os.getenv(name)
            if raw is None or raw.strip() == "":
                return default
            try:
                return int(raw)
            except ValueError:
                raise ValueError(f"Invalid {name}: {raw!r}. Expected an integer.")

        return cls(
            orbit_memory_cap=_int("SYDS_ORBIT_MEMORY_CAP", 1 << 22),
            max_config_bits=_int("SYDS_MAX_CONFIG_BITS", 24),
            treedepth_exact_cap=_int("SYDS_TREEDEPTH_EXACT_CAP", 20),
            logic_variable_cap=_int("SYDS_LOGIC_VARIABLE_CAP", 20),
            influence_set_cap=_int("SYDS_INFLUENCE_SET_CAP", 20),
            tuple_position_cap=_int("SYDS_TUPLE_POSITION_CAP", 14),
            log_level=os.getenv("SYDS_LOG_LEVEL", "WARNING").upper(),
        )


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Settings from the environment, loaded once"""
    global _settings
    if _settings is None:
        load_environment()
        _settings = Settings.from_env()
    return _settings


def override_settings(**changes) -> Settings:
    """Replace individual settings for the rest of the process (CLI flags)"""
    global _settings
    _settings = get_settings().model_copy(update={k: v for k, v in changes.items() if v is not None})
    return _settings


def reset_settings() -> None:
    global _settings
    _settings = None
