"""
fluortrace: spectral volumetric path tracing of fluorescent media

This package renders scenes containing participating media with dissolved
fluorescent dyes. Light is traced per wavelength, absorbed by the dye at the
excitation wavelength and re-emitted at a longer wavelength drawn from the
dye's emission spectrum. Rendered spectra can be validated against the dye's
published emission profile and excitation scaling.

The pytest plugin in ``fluortrace.testing`` is registered through the
pytest11 entry point and provides fixtures for scene-based tests.
"""

from .config import DatabaseConfig, LoggingConfig, ToolConfig, get_config, set_config
from .errors import FluorTraceError
from .film import Film, read_flspd, write_outputs
from .fluorophore import Fluorophore, FluorophoreDatabase
from .render import RenderConfig, render, trace_path
from .scene import Scene, load_scene, parse_scene
from .spectral import SpectralDistribution, WavelengthGrid

__version__ = "1.0.0"

__all__ = [
    # Configuration
    "DatabaseConfig",
    "LoggingConfig",
    "ToolConfig",
    "get_config",
    "set_config",
    # Errors
    "FluorTraceError",
    # Core types
    "Film",
    "Fluorophore",
    "FluorophoreDatabase",
    "RenderConfig",
    "Scene",
    "SpectralDistribution",
    "WavelengthGrid",
    # Operations
    "load_scene",
    "parse_scene",
    "read_flspd",
    "render",
    "trace_path",
    "write_outputs",
]
