"""
Spectrum to color conversion.

This module converts spectral power distributions to display sRGB through
the CIE 1931 2-degree standard observer. The color matching functions ship
as the CIE 15:2004 table (5 nm, 380-780 nm) and are interpolated to 1 nm.
"""

from functools import cache
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from .distribution import SpectralDistribution
from .grid import WavelengthGrid

CMF_PATH = Path(__file__).parent / "data" / "cie1931_2deg.csv"
CMF_GRID = WavelengthGrid(380.0, 780.0, 1.0)

XYZ_TO_LINEAR_SRGB = np.array(
    [
        [3.2406, -1.5372, -0.4986],
        [-0.9689, 1.8758, 0.0415],
        [0.0557, -0.2040, 1.0570],
    ]
)

GAMMA = 2.2


@cache
def cie_1931_cmfs() -> np.ndarray:
    """
    Standard observer tabulated on ``CMF_GRID``.

    Returns:
        Read-only array of shape (CMF_GRID.count, 3) with x-bar, y-bar, z-bar
    """
    frame = pd.read_csv(CMF_PATH)
    table = np.stack(
        [
            np.interp(CMF_GRID.wavelengths, frame["wavelength_nm"], frame[column])
            for column in ("x_bar", "y_bar", "z_bar")
        ],
        axis=-1,
    )
    table.setflags(write=False)
    return table


def color_matching_weights(grid: WavelengthGrid) -> np.ndarray:
    """
    Trapezoid-weighted color matching functions on a render grid.

    The tables are truncated to the overlap of the grid with 380-780 nm.

    Args:
        grid: Grid the spectra are tabulated on

    Returns:
        Array of shape (grid.count, 3) such that ``values @ weights`` is XYZ
    """
    wavelengths = grid.wavelengths
    cmfs = cie_1931_cmfs()
    weights = np.stack(
        [
            np.interp(wavelengths, CMF_GRID.wavelengths, cmfs[:, i], left=0.0, right=0.0)
            for i in range(3)
        ],
        axis=-1,
    )
    trapezoid = np.full(grid.count, grid.step)
    trapezoid[0] *= 0.5
    trapezoid[-1] *= 0.5
    return weights * trapezoid[:, None]


def spectra_to_xyz(values: np.ndarray, grid: WavelengthGrid) -> np.ndarray:
    """Integrate spectra of shape (..., grid.count) against the observer."""
    return np.asarray(values, dtype=np.float64) @ color_matching_weights(grid)


def xyz_to_srgb(xyz: np.ndarray, exposure: float = 1.0) -> np.ndarray:
    """
    Map XYZ tristimulus values to gamma-encoded sRGB in [0, 1].

    Args:
        xyz: Array of shape (..., 3)
        exposure: Linear scale applied before clamping

    Returns:
        Array of shape (..., 3)
    """
    linear = (np.asarray(xyz, dtype=np.float64) @ XYZ_TO_LINEAR_SRGB.T) * exposure
    linear = np.clip(linear, 0.0, 1.0)
    return np.power(linear, 1.0 / GAMMA)


def spectra_to_rgb(
    values: np.ndarray, grid: WavelengthGrid, exposure: float = 1.0
) -> np.ndarray:
    """Convert an array of spectra to sRGB, last axis being wavelength."""
    return xyz_to_srgb(spectra_to_xyz(values, grid), exposure)


def spd_to_rgb(
    s: SpectralDistribution, exposure: float = 1.0
) -> Tuple[float, float, float]:
    """
    Convert a spectral power distribution to an sRGB triple.

    Args:
        s: Spectrum to convert
        exposure: Linear scale applied to XYZ before clamping

    Returns:
        Tuple (r, g, b) with components in [0, 1]
    """
    r, g, b = spectra_to_rgb(s.values, s.grid, exposure)
    return float(r), float(g), float(b)


def auto_exposure(luminance: np.ndarray, percentile: float = 99.0) -> Optional[float]:
    """
    Exposure mapping a high percentile of Y to one.

    Args:
        luminance: Per-pixel Y values
        percentile: Percentile of the positive Y values that maps to white

    Returns:
        Exposure scale, or None if every pixel is black
    """
    positive = luminance[luminance > 0.0]
    if positive.size == 0:
        return None
    return 1.0 / float(np.percentile(positive, percentile))
