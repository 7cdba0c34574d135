"""
Spectral film for fluortrace.

This package provides per-pixel spectral accumulation, scene spectra over
illuminated pixels, and PNG, CSV and FLSPD outputs.
"""

from .film import Film
from .io import flspd_bytes, read_flspd, write_flspd, write_outputs

__all__ = [
    "Film",
    "flspd_bytes",
    "read_flspd",
    "write_flspd",
    "write_outputs",
]
