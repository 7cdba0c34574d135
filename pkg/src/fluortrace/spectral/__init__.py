"""
Wavelength-domain math for fluortrace.

This package provides tabulated spectra on regular grids, their resampling,
integration and inverse-CDF sampling, spectrum CSV ingestion, and conversion
of spectra to sRGB colors.
"""

from .color import spd_to_rgb, spectra_to_rgb, spectra_to_xyz, xyz_to_srgb
from .csvio import load_spectrum_csv, read_spectrum_csv, write_spectrum_csv
from .distribution import (
    SpectralDistribution,
    integrate,
    normalize_pdf,
    regrid,
    resample,
    sample_discrete,
    sample_wavelength,
)
from .grid import DEFAULT_GRID, WavelengthGrid

__all__ = [
    "DEFAULT_GRID",
    "SpectralDistribution",
    "WavelengthGrid",
    "integrate",
    "load_spectrum_csv",
    "normalize_pdf",
    "read_spectrum_csv",
    "regrid",
    "resample",
    "sample_discrete",
    "sample_wavelength",
    "spd_to_rgb",
    "spectra_to_rgb",
    "spectra_to_xyz",
    "write_spectrum_csv",
    "xyz_to_srgb",
]
