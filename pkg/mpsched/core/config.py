"""
mpsched - Core Configuration Module
Loads process settings from the environment and simulation defaults from YAML

This module provides centralized configuration management with:
- Environment variable loading (prefix MPSCHED_)
- YAML configuration parsing for protocol and scenario defaults
- Seed list resolution for CLI, CI and scenario files
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import yaml
from pydantic import Field, field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

from mpsched.core.exceptions import ConfigurationError


class Settings(BaseSettings):
    """
    Process-wide settings loaded from environment variables.

    Attributes are loaded with priority:
    1. Environment variables (MPSCHED_*)
    2. .env file
    3. Default values
    """

    model_config = SettingsConfigDict(
        env_prefix="MPSCHED_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )

    # ================================
    # Logging Settings
    # ================================
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "console"

    # ================================
    # Execution Settings
    # ================================
    WORKERS: int = Field(default=1, ge=1)
    SEEDS: Optional[str] = None
    OUTPUT_DIR: Path = Path("results")

    # ================================
    # Configuration File Paths
    # ================================
    CONFIG_DIR: Path = Path(__file__).parent.parent.parent / "config"

    @field_validator("LOG_FORMAT")
    @classmethod
    def validate_log_format(cls, v: str) -> str:
        """Only json and console renderers exist."""
        v = v.lower()
        if v not in ("json", "console"):
            raise ValueError("LOG_FORMAT must be 'json' or 'console'")
        return v


class ConfigManager:
    """
    Manages loading and caching of YAML configuration files.

    This class handles:
    - Loading YAML config files
    - Caching configurations
    - Dotted-key lookups with defaults
    """

    CONFIG_FILES = ("simulation_config",)

    def __init__(self, config_dir: Optional[Path] = None):
        """
        Initialize configuration manager.

        Args:
            config_dir: Directory containing YAML config files
        """
        self.config_dir = Path(config_dir) if config_dir else Path(__file__).parent.parent.parent / "config"
        self._cache: Dict[str, Any] = {}
        self._load_all_configs()

    def _load_yaml(self, filename: str) -> Dict[str, Any]:
        """
        Load YAML configuration file.

        Args:
            filename: Name of the YAML file (with or without .yaml extension)

        Returns:
            Parsed YAML content as dictionary

        Raises:
            FileNotFoundError: If config file doesn't exist
            yaml.YAMLError: If YAML parsing fails
        """
        if not filename.endswith(".yaml") and not filename.endswith(".yml"):
            filename = f"{filename}.yaml"

        filepath = self.config_dir / filename

        if not filepath.exists():
            raise FileNotFoundError(f"Configuration file not found: {filepath}")

        with open(filepath, "r", encoding="utf-8") as f:
            loaded = yaml.safe_load(f)

        return loaded or {}

    def _load_all_configs(self) -> None:
        """Load all configuration files into cache."""
        for config_name in self.CONFIG_FILES:
            try:
                self._cache[config_name] = self._load_yaml(config_name)
            except FileNotFoundError:
                # Config file is optional; built-in defaults apply
                self._cache[config_name] = {}

    def get(self, config_name: str, key: Optional[str] = None, default: Any = None) -> Any:
        """
        Get configuration value.

        Args:
            config_name: Name of the config file (without .yaml)
            key: Dot-separated key path (e.g., "protocol.min_rto_s")
            default: Default value if key not found

        Returns:
            Configuration value
        """
        value: Any = self._cache.get(config_name, {})

        if key is None:
            return value

        for k in key.split("."):
            if not isinstance(value, dict):
                return default
            value = value.get(k)
            if value is None:
                return default

        return value

    def reload(self, config_name: Optional[str] = None) -> None:
        """
        Reload configuration files.

        Args:
            config_name: Specific config to reload, or None to reload all
        """
        if config_name:
            self._cache[config_name] = self._load_yaml(config_name)
        else:
            self._load_all_configs()

    @property
    def simulation_config(self) -> Dict[str, Any]:
        """Get simulation defaults."""
        return self._cache.get("simulation_config", {})


def parse_seed_list(raw: str) -> List[int]:
    """Parse "1,2,5-8" into [1, 2, 5, 6, 7, 8]."""
    seeds: List[int] = []
    for part in raw.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            if "-" in part:
                lo, hi = part.split("-", 1)
                lo_i, hi_i = int(lo), int(hi)
                if hi_i < lo_i:
                    raise ValueError(part)
                seeds.extend(range(lo_i, hi_i + 1))
            else:
                seeds.append(int(part))
        except ValueError:
            raise ConfigurationError([f"seeds: cannot parse {part!r} as a seed or seed range"])
    if not seeds:
        raise ConfigurationError(["seeds: empty seed list"])
    return seeds


def resolve_seeds(
    cli_seeds: Optional[str],
    config_seeds: Sequence[int],
    env_seeds: Optional[str] = None,
) -> List[int]:
    """
    Pick the seed list for a run.

    Precedence: CLI flag > MPSCHED_SEEDS environment variable > scenario config.
    """
    if cli_seeds:
        return parse_seed_list(cli_seeds)
    if env_seeds is None:
        env_seeds = settings.SEEDS
    if env_seeds:
        return parse_seed_list(env_seeds)
    return list(config_seeds)


# Global instances
settings = Settings()
config = ConfigManager(settings.CONFIG_DIR)


# Export
__all__ = [
    "settings",
    "config",
    "Settings",
    "ConfigManager",
    "parse_seed_list",
    "resolve_seeds",
]
