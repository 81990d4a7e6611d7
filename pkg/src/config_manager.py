"""
Configuration management with persistence and environment overrides
"""

import json
import os
from pathlib import Path
from typing import Optional

import click
from dotenv import load_dotenv

from models import SolverConfig


ENV_OVERRIDES = {
    "RECOLOR_ORACLE_CAP": ("oracle_cap", int),
    "RECOLOR_CACHE_DIR": ("cache_dir", str),
    "RECOLOR_WORKERS": ("bench_workers", int),
    "RECOLOR_DOMAIN_POLICY": ("domain_policy", str),
    "RECOLOR_USE_CACHE": ("use_cache", lambda value: value.strip().lower() in ("1", "true", "yes", "on")),
}


class ConfigManager:
    """Manages solver configuration with file persistence"""

    def __init__(self, config_path: str = "recolor_config.json"):
        """
        Initialize configuration manager

        Args:
            config_path: Path to configuration file
        """
        self.config_path = Path(config_path)
        self.config: Optional[SolverConfig] = None

    def load(self, create_if_missing: bool = True) -> SolverConfig:
        """
        Load configuration from file, falling back to defaults

        Environment variables (read from .env as well) override file values.

        Args:
            create_if_missing: Write the default configuration when no valid file exists
        """
        load_dotenv()
        if self.config_path.exists():
            try:
                with open(self.config_path, 'r', encoding='utf-8') as f:
                    data = json.load(f)
                self.config = self._apply_env(SolverConfig.from_dict(data))
                return self.config
            except Exception as e:
                click.echo(f"Warning: Failed to load config from {self.config_path}: {e}", err=True)
                click.echo("Using default configuration", err=True)

        self.config = SolverConfig.get_default_config()
        if create_if_missing:
            self.save()
        self.config = self._apply_env(self.config)
        return self.config

    def _apply_env(self, config: SolverConfig) -> SolverConfig:
        data = config.to_dict()
        for variable, (key, convert) in ENV_OVERRIDES.items():
            value = os.environ.get(variable)
            if value is None or value == "":
                continue
            try:
                data[key] = convert(value)
            except ValueError:
                click.echo(f"Warning: Ignoring {variable}={value!r}", err=True)
        try:
            return SolverConfig.from_dict(data)
        except ValueError as e:
            click.echo(f"Warning: Ignoring environment overrides: {e}", err=True)
            return config

    def save(self) -> None:
        """Save configuration to file"""
        if self.config is None:
            return

        try:
            self.config_path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.config_path, 'w', encoding='utf-8') as f:
                json.dump(self.config.to_dict(), f, indent=2)
        except Exception as e:
            click.echo(f"Warning: Failed to save config to {self.config_path}: {e}", err=True)

    def update_config(self, config: SolverConfig) -> None:
        """Update and persist configuration"""
        self.config = config
        self.save()

    def reset_to_default(self) -> SolverConfig:
        """Reset to default configuration"""
        self.config = SolverConfig.get_default_config()
        self.save()
        return self.config
