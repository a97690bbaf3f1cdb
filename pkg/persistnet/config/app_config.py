import os
from typing import Any, Dict, Optional

import yaml
from environs import Env

from ..errors import DataError
from .logging_config import LoggingConfig

DEFAULT_CONFIG_PATH = "config.yaml"


class AppConfig:
    """Configuration manager for persistnet runs."""

    def __init__(
        self,
        config_path: Optional[str] = None,
        init_logging: bool = True,
        logging_overrides: Optional[Dict[str, Any]] = None,
    ):
        self.env = Env()
        self.env.read_env()
        explicit = config_path or self.env.str("PERSISTNET_CONFIG", None)
        self.config_path = explicit or DEFAULT_CONFIG_PATH
        self.config = self.load_config(required=explicit is not None)
        self.logging_overrides = {k: v for k, v in (logging_overrides or {}).items() if v}

        # Initialize logging as early as possible
        if init_logging:
            self.init_logging()

    def load_config(self, required: bool = False) -> Dict[str, Any]:
        """Load configuration from the YAML file.

        A missing default file gives an empty configuration; a missing file that was asked for
        explicitly is an error.
        """
        if not os.path.exists(self.config_path):
            if required:
                raise DataError(f"Configuration file not found at {self.config_path}")
            return {}

        with open(self.config_path, encoding="utf-8") as f:
            loaded = yaml.safe_load(f) or {}
        if not isinstance(loaded, dict):
            raise DataError(f"Configuration file {self.config_path} must contain a mapping")
        return loaded

    def section(self, name: str) -> Dict[str, Any]:
        """Return a top-level section, or an empty mapping when absent."""
        value = self.config.get(name) or {}
        if not isinstance(value, dict):
            raise DataError(f"Configuration section '{name}' must be a mapping")
        return value

    def command_defaults(self) -> Dict[str, Dict[str, Any]]:
        """Per-subcommand flag defaults, shaped for click's ``default_map``."""
        commands = self.section("commands")
        return {
            name: {key.replace("-", "_"): value for key, value in (flags or {}).items()}
            for name, flags in commands.items()
        }

    def init_logging(self) -> None:
        """Initialize logging system based on configuration."""
        logging_config = dict(self.section("logging"))

        # Override with environment variables if present
        log_level = self.env.str("PERSISTNET_LOG_LEVEL", None)
        log_file = self.env.str("PERSISTNET_LOG_FILE", None)

        if log_level:
            logging_config["log_level"] = log_level

        if log_file:
            logging_config["log_file"] = log_file

        # Command-line flags win over both the file and the environment
        logging_config.update(self.logging_overrides)

        LoggingConfig(logging_config)
