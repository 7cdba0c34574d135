"""
Tests for render progress logging.
"""

import logging

from fluortrace.config import LoggingConfig
from fluortrace.loggers import RenderLogger, RenderLoggerFactory, get_progress_logger


class TestRenderLogger:
    """Test the RenderLogger class."""

    def test_init_defaults(self):
        """Test default initialization."""
        logger = RenderLogger()

        assert logger.level == logging.INFO
        assert logger.format_template == "[FLUOR] {message}"
        assert logger.progress is True
        assert logger.logger.name == "fluortrace.progress"
        assert logger.logger.propagate is True

    def test_log_line_basic(self, caplog):
        """Test logging a single line."""
        with caplog.at_level(logging.INFO):
            RenderLogger().log_line("Test message")

        assert len(caplog.records) == 1
        assert "[FLUOR] Test message" in caplog.text

    def test_log_line_with_stage(self, caplog):
        """Test logging a line with a stage tag."""
        with caplog.at_level(logging.INFO):
            RenderLogger().log_line("Test message", "validate")

        assert "[FLUOR] [VALIDATE] Test message" in caplog.text

    def test_log_line_empty(self, caplog):
        """Test that blank lines are not logged."""
        with caplog.at_level(logging.INFO):
            logger = RenderLogger()
            logger.log_line("")
            logger.log_line("   \n")

        assert len(caplog.records) == 0

    def test_log_line_below_level(self, caplog):
        """Test that messages below the logger level are suppressed."""
        with caplog.at_level(logging.WARNING):
            RenderLogger(level=logging.DEBUG).log_line("hidden")

        assert len(caplog.records) == 0

    def test_log_progress(self, caplog):
        """Test progress lines include tiles, paths and throughput."""
        with caplog.at_level(logging.INFO):
            RenderLogger().log_progress(3, 12, 4000, 2.0)

        assert "[FLUOR] [RENDER] 3/12 tiles, 4000 paths, 2,000 paths/s" in caplog.text

    def test_log_progress_disabled(self, caplog):
        """Test that progress lines are dropped when progress is off."""
        with caplog.at_level(logging.INFO):
            RenderLogger(progress=False).log_progress(1, 1, 10, 1.0)

        assert len(caplog.records) == 0

    def test_log_progress_zero_elapsed(self, caplog):
        """Test throughput with no elapsed time."""
        with caplog.at_level(logging.INFO):
            RenderLogger().log_progress(1, 1, 10, 0.0)

        assert "0 paths/s" in caplog.text

    def test_repr(self):
        """Test string representation."""
        repr_str = repr(RenderLogger(level=logging.DEBUG, progress=False))

        assert "level=DEBUG" in repr_str
        assert "logger=fluortrace.progress" in repr_str
        assert "progress=False" in repr_str


class TestRenderLoggerFactory:
    """Test the RenderLoggerFactory class."""

    def test_create_logger(self):
        """Test creating a logger with explicit settings."""
        logger = RenderLoggerFactory.create_logger(
            level=logging.WARNING, format_template="[T] {message}", progress=False
        )

        assert logger.level == logging.WARNING
        assert logger.format_template == "[T] {message}"
        assert logger.progress is False

    def test_create_logger_from_config(self):
        """Test creating a logger from LoggingConfig."""
        config = LoggingConfig(log_level="DEBUG", log_format="[C] {message}", progress=False)

        logger = RenderLoggerFactory.create_logger_from_config(config)

        assert logger.level == logging.DEBUG
        assert logger.format_template == "[C] {message}"
        assert logger.progress is False

    def test_get_progress_logger(self):
        """Test the underlying logger name."""
        assert get_progress_logger().name == "fluortrace.progress"

    def test_default_logger_is_progress_logger(self):
        """Test that render loggers share the progress logger unless named otherwise."""
        assert RenderLogger().logger is get_progress_logger()
        assert RenderLogger(logger_name="fluortrace.other").logger.name == "fluortrace.other"

    def test_is_enabled_follows_level(self, caplog):
        """Test that a logger below the effective level reports itself disabled."""
        with caplog.at_level(logging.INFO, logger="fluortrace.progress"):
            assert RenderLogger(level=logging.INFO).is_enabled()
            assert not RenderLogger(level=logging.DEBUG).is_enabled()
