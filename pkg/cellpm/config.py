"""
Configuration management for cellpm using Pydantic for schema validation.
"""

import json
import os
import logging
import tempfile
from typing import Any, Dict, Optional, Tuple
from pydantic import BaseModel, Field, field_validator


class CellpmConfig(BaseModel):
    """Pydantic model for cellpm configuration"""

    threads: Optional[int] = Field(
        default=None,
        description="Worker cap for the concurrent execution mode (None = CPU count)",
    )
    max_iterations: int = Field(
        default=100000, description="State transitions allowed before giving up"
    )
    log_level: str = Field(default="WARNING", description="Console log level")
    log_dir: str = Field(default="./log", description="Directory for session logs")
    float_rel_tolerance: float = Field(
        default=1e-9, description="Relative tolerance for floating-point methods"
    )
    float_abs_floor: float = Field(
        default=1e-12, description="Absolute floor for floating-point comparison"
    )
    default_seed: int = Field(default=0, description="Seed used when none is given")
    output_dir: str = Field(default=".", description="Default directory for run output")

    model_config = {
        # Unknown keys are kept so older config files still load
        "extra": "allow"
    }

    @field_validator("threads")
    @classmethod
    def _positive_threads(cls, value: Optional[int]) -> Optional[int]:
        if value is not None and value < 1:
            logging.warning(f"Ignoring non-positive thread cap {value}")
            return None
        return value

    @field_validator("max_iterations")
    @classmethod
    def _positive_iterations(cls, value: int) -> int:
        if value < 1:
            raise ValueError("max_iterations must be at least 1")
        return value


# Environment variables that override the config file, first match wins
ENV_OVERRIDES: Dict[str, Tuple[str, ...]] = {
    "threads": ("PM_THREADS", "CELLPM_THREADS"),
    "max_iterations": ("CELLPM_MAX_ITERATIONS",),
    "log_level": ("CELLPM_LOG_LEVEL",),
    "log_dir": ("CELLPM_LOG_DIR",),
    "default_seed": ("CELLPM_DEFAULT_SEED",),
}
_INT_FIELDS = frozenset({"threads", "max_iterations", "default_seed"})


def _env_overrides() -> Dict[str, Any]:
    overrides: Dict[str, Any] = {}
    for field, env_vars in ENV_OVERRIDES.items():
        for env_var in env_vars:
            value = os.getenv(env_var)
            if value is None:
                continue
            if field in _INT_FIELDS:
                try:
                    overrides[field] = int(value)
                except ValueError:
                    logging.warning(f"Ignoring non-integer value {value!r} in {env_var}")
                    continue
            else:
                overrides[field] = value
            logging.debug(f"Using {field} from environment variable {env_var}")
            break
    return overrides


class ConfigManager:
    """Configuration manager for cellpm"""

    # Class variable for singleton pattern
    _instance = None
    # Track instances by config path to support testing with different paths
    _instances_by_path = {}

    @classmethod
    def _resolve_config_path(cls, config_path: Optional[str] = None) -> str:
        """Resolve configuration file path with precedence: parameter > CELLPM_CONFIG_PATH > default.

        Args:
            config_path: Explicit path provided by caller

        Returns:
            Resolved configuration file path
        """
        if config_path is not None:
            return config_path

        env_path = os.getenv("CELLPM_CONFIG_PATH")
        if env_path is not None:
            return env_path

        return os.path.join(os.path.expanduser("~"), ".cellpm_config.json")

    def __new__(cls, config_path: Optional[str] = None):
        """Singleton pattern that also respects different config paths for testing."""
        config_path = cls._resolve_config_path(config_path)

        if config_path in cls._instances_by_path:
            return cls._instances_by_path[config_path]

        instance = super(ConfigManager, cls).__new__(cls)
        if cls._instance is None:
            cls._instance = instance
        cls._instances_by_path[config_path] = instance
        instance._initialized = False
        return instance

    def __init__(self, config_path: Optional[str] = None):
        """Initialize config manager with optional custom path"""
        if getattr(self, "_initialized", False):
            return

        self.config_path = self._resolve_config_path(config_path)

        self._config: Optional[CellpmConfig] = None
        self._initialized = True

    def load(self) -> CellpmConfig:
        """Load configuration from file or create default"""
        # Don't cache in tests (always reload)
        if not self.config_path.startswith(tempfile.gettempdir()):
            if self._config:
                return self._config

        config_data = {}
        if os.path.exists(self.config_path):
            try:
                with open(self.config_path, "r") as f:
                    config_data = json.load(f)
                    logging.debug(f"Loaded configuration from {self.config_path}")
            except json.JSONDecodeError:
                logging.error("Config file is corrupted. Using default config.")
            except Exception as e:
                logging.error(f"Error loading config: {e}")

        config_data.update(_env_overrides())
        self._config = CellpmConfig(**config_data)
        return self._config

    def get_config(self) -> CellpmConfig:
        """Get configuration object"""
        return self.load()


# Global config manager instance
_config_manager = ConfigManager()


def get_threads() -> int:
    """Worker cap for concurrent mode; falls back to the CPU count."""
    threads = _config_manager.get_config().threads
    return threads or os.cpu_count() or 1


def get_max_iterations() -> int:
    return _config_manager.get_config().max_iterations


def get_tolerances() -> Tuple[float, float]:
    """Return (relative tolerance, absolute floor) for float comparisons."""
    config = _config_manager.get_config()
    return config.float_rel_tolerance, config.float_abs_floor


def get_default_seed() -> int:
    return _config_manager.get_config().default_seed


def get_log_level() -> str:
    return _config_manager.get_config().log_level


def get_log_dir() -> str:
    return _config_manager.get_config().log_dir


def get_output_dir() -> str:
    return _config_manager.get_config().output_dir
