"""
Configuration management for fluortrace.

This module provides configuration classes and utilities for managing
process-wide settings, including logging configuration for render progress
and the location of the fluorophore database.
"""

import logging
import os
from pathlib import Path
from typing import Any, Optional

DB_ENV_VAR = "FLUOR_DB"


class LoggingConfig:
    """
    Configuration for render progress logging.

    This class manages how render and validation progress is reported
    while scenes are traced.
    """

    def __init__(
        self,
        log_level: str = "INFO",
        log_format: str = "[FLUOR] {message}",
        progress: bool = True,
    ):
        """
        Initialize logging configuration.

        Args:
            log_level: Log level for progress messages (DEBUG, INFO, WARNING, ERROR)
            log_format: Format template for progress messages
            progress: Whether to report per-tile progress
        """
        self.log_level = self._parse_log_level(log_level)
        self.log_format = log_format
        self.progress = progress

    @staticmethod
    def _parse_log_level(level: str) -> int:
        """
        Parse string log level to logging constant.

        Args:
            level: Log level as string (DEBUG, INFO, WARNING, ERROR)

        Returns:
            Logging level constant

        Raises:
            ValueError: If log level is invalid
        """
        level_map = {
            "DEBUG": logging.DEBUG,
            "INFO": logging.INFO,
            "WARNING": logging.WARNING,
            "ERROR": logging.ERROR,
        }

        level_upper = level.upper()
        if level_upper not in level_map:
            raise ValueError(
                f"Invalid log level: {level}. "
                f"Must be one of: {', '.join(level_map.keys())}"
            )

        return level_map[level_upper]

    @classmethod
    def from_args(cls, args: Any) -> "LoggingConfig":
        """
        Create configuration from parsed command-line arguments.

        Args:
            args: argparse namespace

        Returns:
            LoggingConfig instance
        """
        return cls(
            log_level=getattr(args, "log_level", "INFO") or "INFO",
            progress=not getattr(args, "quiet", False),
        )

    @classmethod
    def get_default(cls) -> "LoggingConfig":
        """Get default configuration."""
        return cls()

    def __repr__(self) -> str:
        """String representation of configuration."""
        return (
            f"LoggingConfig("
            f"log_level={logging.getLevelName(self.log_level)}, "
            f"log_format='{self.log_format}', "
            f"progress={self.progress}"
            f")"
        )


class DatabaseConfig:
    """
    Configuration for the fluorophore database location.

    The bundled database ships inside the package; the FLUOR_DB environment
    variable or an explicit path overrides it.
    """

    def __init__(self, path: Optional[str] = None):
        """
        Initialize database configuration.

        Args:
            path: Database directory. Uses FLUOR_DB, then the bundled data, if None.
        """
        self.explicit_path = path

    @property
    def path(self) -> Path:
        """Resolve the effective database directory."""
        if self.explicit_path:
            return Path(self.explicit_path)
        env_path = os.environ.get(DB_ENV_VAR)
        if env_path:
            return Path(env_path)
        return bundled_database_path()

    @classmethod
    def from_args(cls, args: Any) -> "DatabaseConfig":
        """Create configuration from parsed command-line arguments."""
        return cls(path=getattr(args, "db", None))

    @classmethod
    def get_default(cls) -> "DatabaseConfig":
        """Get default configuration."""
        return cls()

    def __repr__(self) -> str:
        """String representation of configuration."""
        return f"DatabaseConfig(path='{self.path}')"


class ToolConfig:
    """
    Global configuration for fluortrace.

    This class aggregates all process-wide settings and provides access to
    subsystem configurations.
    """

    def __init__(self, args: Optional[Any] = None):
        """
        Initialize tool configuration.

        Args:
            args: Parsed command-line arguments
        """
        self.args = args

        if args is not None:
            self.logging = LoggingConfig.from_args(args)
            self.database = DatabaseConfig.from_args(args)
            # A subcommand's --threads takes precedence over the global one
            threads = getattr(args, "command_threads", None)
            if threads is None:
                threads = getattr(args, "threads", 1)
            self.threads = max(1, int(threads or 1))
        else:
            self.logging = LoggingConfig.get_default()
            self.database = DatabaseConfig.get_default()
            self.threads = 1

    @classmethod
    def get_default(cls) -> "ToolConfig":
        """Get default tool configuration."""
        return cls()


def bundled_database_path() -> Path:
    """Directory of the dye datasets shipped with the package."""
    return Path(__file__).parent / "fluorophore" / "data"


def bundled_scenes_path() -> Path:
    """Directory of the reference scenes shipped with the package."""
    return Path(__file__).parent / "scenes"


# Global configuration instance
_global_config: Optional[ToolConfig] = None


def get_config() -> ToolConfig:
    """
    Get the global tool configuration.

    Returns:
        Current tool configuration
    """
    global _global_config
    if _global_config is None:
        _global_config = ToolConfig.get_default()
    return _global_config


def set_config(config: ToolConfig) -> None:
    """
    Set the global tool configuration.

    Args:
        config: Tool configuration to set
    """
    global _global_config
    _global_config = config
