"""
Tests for environment-driven settings
"""

import pytest

from syds import config
from syds.config import Settings, get_settings, override_settings, reset_settings


def test_defaults():
    settings = get_settings()
    assert settings.orbit_memory_cap == 1 << 22
    assert settings.max_config_bits == 24
    assert settings.treedepth_exact_cap == 20
    assert settings.log_level == "WARNING"


def test_settings_are_loaded_once(monkeypatch):
    first = get_settings()
    monkeypatch.setenv("SYDS_MAX_CONFIG_BITS", "10")
    assert get_settings() is first
    reset_settings()
    assert get_settings().max_config_bits == 10


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("SYDS_ORBIT_MEMORY_CAP", "512")
    monkeypatch.setenv("SYDS_INFLUENCE_SET_CAP", " ")
    monkeypatch.setenv("SYDS_LOG_LEVEL", "debug")
    settings = Settings.from_env()
    assert settings.orbit_memory_cap == 512
    # blank values fall back to the default
    assert settings.influence_set_cap == 20
    assert settings.log_level == "DEBUG"


def test_invalid_values(monkeypatch):
    monkeypatch.setenv("SYDS_TUPLE_POSITION_CAP", "many")
    with pytest.raises(ValueError) as exc_info:
        Settings.from_env()
    assert "SYDS_TUPLE_POSITION_CAP" in str(exc_info.value)

    monkeypatch.setenv("SYDS_TUPLE_POSITION_CAP", "0")
    with pytest.raises(ValueError):
        Settings.from_env()


def test_override_ignores_none():
    settings = override_settings(orbit_memory_cap=64, log_level=None)
    assert settings.orbit_memory_cap == 64
    assert settings.log_level == "WARNING"
    assert get_settings() is settings


def test_load_environment_reads_dotenv(tmp_path, monkeypatch):
    env_file = tmp_path / ".env"
    env_file.write_text("SYDS_LOGIC_VARIABLE_CAP=7\n")
    monkeypatch.setattr(config, "env_paths", [tmp_path / "missing.env", env_file])
    # setenv first so monkeypatch restores whatever load_dotenv writes
    monkeypatch.setenv("SYDS_LOGIC_VARIABLE_CAP", "")
    monkeypatch.delenv("SYDS_LOGIC_VARIABLE_CAP")
    assert config.load_environment() == env_file
    assert get_settings().logic_variable_cap == 7


def test_environment_wins_over_dotenv(tmp_path, monkeypatch):
    env_file = tmp_path / ".env"
    env_file.write_text("SYDS_LOGIC_VARIABLE_CAP=7\n")
    monkeypatch.setattr(config, "env_paths", [env_file])
    monkeypatch.setenv("SYDS_LOGIC_VARIABLE_CAP", "9")
    assert get_settings().logic_variable_cap == 9


if __name__ == "__main__":
    pytest.main([__file__, "-v"])
