# -*- coding: utf-8 -*-
"""Tests for platoon formation configuration module."""
import pytest

from mixed_platoon.formation.config import Config
from mixed_platoon.formation.exceptions import ConfigurationError


def test_default_config_values():
    """Test that default configuration values are set correctly."""
    config = Config()
    assert config.output_formats == ["json"]
    assert config.output_directory == "./platoon-results"
    assert config.include_timestamp is True
    assert config.workers == 1
    assert config.debug is False
    assert config.quiet is False


def test_config_validation_valid_formats():
    """Test that valid output formats pass validation."""
    Config(output_formats=["json"]).validate()
    Config(output_formats=["yaml"]).validate()
    Config(output_formats=["both"]).validate()


def test_config_validation_invalid_format():
    """Test that invalid output formats raise ConfigurationError."""
    config = Config(output_formats=["csv"])
    with pytest.raises(ConfigurationError, match="Invalid output format: csv"):
        config.validate()


def test_config_validation_workers():
    """Test that a non-positive worker count is rejected."""
    config = Config(workers=0)
    with pytest.raises(ConfigurationError, match="Workers must be at least 1"):
        config.validate()


def test_environment_variable_override(monkeypatch):
    """Test that environment variables override default values."""
    monkeypatch.setenv("PLATOON_OUTPUT_DIR", "/tmp/platoon")
    monkeypatch.setenv("PLATOON_WORKERS", "4")
    monkeypatch.setenv("PLATOON_DEBUG", "true")
    monkeypatch.setenv("PLATOON_QUIET", "TRUE")

    config = Config()
    assert config.output_directory == "/tmp/platoon"
    assert config.workers == 4
    assert config.debug is True
    assert config.quiet is True


def test_environment_workers_must_be_integer(monkeypatch):
    """Test that a malformed PLATOON_WORKERS raises ConfigurationError."""
    monkeypatch.setenv("PLATOON_WORKERS", "many")
    with pytest.raises(ConfigurationError, match="PLATOON_WORKERS"):
        Config()


def test_constructor_overrides():
    """Test that constructor parameters override defaults."""
    config = Config(output_directory="/tmp/test", debug=True, workers=3,
                    include_timestamp=False)
    assert config.output_directory == "/tmp/test"
    assert config.debug is True
    assert config.workers == 3
    assert config.include_timestamp is False
