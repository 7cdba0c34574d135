"""
Progress logging for renders and validation runs.

This module provides a unified logger that reports tile progress and
throughput with consistent formatting and log levels.
"""

import logging
from typing import Optional


class RenderLogger:
    """
    Unified logger for render progress.

    This logger formats progress lines from the renderer and the validation
    protocols with a shared template and log level.
    """

    def __init__(
        self,
        level: int = logging.INFO,
        format_template: str = "[FLUOR] {message}",
        logger_name: Optional[str] = None,
        progress: bool = True,
    ):
        """
        Initialize the render logger.

        Args:
            level: Logging level for all progress messages
            format_template: Format template for log messages
            logger_name: Logger name; the shared progress logger if None
            progress: Whether per-tile progress lines are emitted
        """
        self.level = level
        self.format_template = format_template
        self.progress = progress

        self.logger = logging.getLogger(logger_name) if logger_name else get_progress_logger()
        self.logger.propagate = True

    def log_line(self, line: str, stage: Optional[str] = None) -> None:
        """
        Log a single progress line.

        Args:
            line: Message to log
            stage: Optional stage tag (e.g. "render", "validate")
        """
        if not line.strip():
            return

        if self.logger.isEnabledFor(self.level):
            if stage:
                message = f"[{stage.upper()}] {line.rstrip()}"
            else:
                message = line.rstrip()
            self.logger.log(self.level, self.format_template.format(message=message))

    def log_progress(self, done: int, total: int, paths: int, elapsed: float) -> None:
        """
        Log tile progress with throughput.

        Args:
            done: Completed work units
            total: Total work units
            paths: Paths traced so far
            elapsed: Seconds since the render started
        """
        if not self.progress:
            return
        rate = paths / elapsed if elapsed > 0 else 0.0
        self.log_line(
            f"{done}/{total} tiles, {paths} paths, {rate:,.0f} paths/s", "render"
        )

    def is_enabled(self) -> bool:
        """Check if logging is enabled for this logger's level."""
        return self.logger.isEnabledFor(self.level)

    def __repr__(self) -> str:
        """String representation of the logger."""
        return (
            f"RenderLogger("
            f"level={logging.getLevelName(self.level)}, "
            f"logger={self.logger.name}, "
            f"progress={self.progress}"
            f")"
        )


class RenderLoggerFactory:
    """
    Factory for creating render loggers with consistent configuration.
    """

    @staticmethod
    def create_logger(
        level: int = logging.INFO,
        format_template: str = "[FLUOR] {message}",
        progress: bool = True,
    ) -> RenderLogger:
        """
        Create a render logger.

        Args:
            level: Logging level for progress messages
            format_template: Format template for log messages
            progress: Whether per-tile progress lines are emitted

        Returns:
            Configured RenderLogger instance
        """
        return RenderLogger(
            level=level, format_template=format_template, progress=progress
        )

    @staticmethod
    def create_logger_from_config(config) -> RenderLogger:
        """
        Create a render logger from configuration.

        Args:
            config: LoggingConfig instance

        Returns:
            Configured RenderLogger instance
        """
        return RenderLoggerFactory.create_logger(
            level=config.log_level,
            format_template=config.log_format,
            progress=config.progress,
        )


def get_progress_logger() -> logging.Logger:
    """Get the underlying progress logger."""
    return logging.getLogger("fluortrace.progress")
