"""Pytest fixtures for cellpm tests."""

import os
import tempfile
from unittest.mock import patch

import pytest

from cellpm.config import ConfigManager
from tests.fixtures.instances import swap_instance, write_instance_file


@pytest.fixture
def temp_config():
    """Create a temporary config file and make it the global config."""
    temp_dir = tempfile.TemporaryDirectory()
    config_path = os.path.join(temp_dir.name, "test_config.json")
    config_manager = ConfigManager(config_path)
    with patch("cellpm.config._config_manager", config_manager):
        yield config_manager
    temp_dir.cleanup()


@pytest.fixture
def clean_env():
    """
    Provide a completely clean environment for config tests.

    PM_THREADS and CELLPM_* variables from the host never leak into a test.
    """
    with patch.dict(os.environ, {}, clear=True):
        yield


@pytest.fixture
def log_dir(tmp_path):
    """Send session logs of CLI tests to a temporary directory."""
    path = tmp_path / "log"
    with patch.dict(os.environ, {"CELLPM_LOG_DIR": str(path)}):
        yield path


@pytest.fixture
def swap():
    """The 1-D two-particle ExchangeDiffusion instance (h=10 and h=4, t_max=2)."""
    return swap_instance()


@pytest.fixture
def swap_file(tmp_path):
    """The swap instance written as an instance file."""
    return write_instance_file(tmp_path / "swap.json", swap_instance())
