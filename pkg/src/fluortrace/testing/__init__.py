"""
Pytest integration for fluortrace.

When installed, pytest discovers the plugin through the pytest11 entry point
defined in pyproject.toml.
"""

from .plugin import (
    bundled_scene,
    fluorophore_db,
    pytest_addoption,
    pytest_collection_modifyitems,
    pytest_configure,
    pytest_report_header,
    render_grid,
)

__all__ = [
    # Plugin hooks
    "pytest_addoption",
    "pytest_collection_modifyitems",
    "pytest_configure",
    "pytest_report_header",
    # Fixtures
    "bundled_scene",
    "fluorophore_db",
    "render_grid",
]
