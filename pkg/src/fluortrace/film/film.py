"""
Spectral film.

This module provides the Film type that accumulates per-pixel spectral
radiance sums and sample counts, and derives pixel spectra, the scene-level
spectrum of illuminated pixels and sRGB images from them.
"""

import hashlib
import logging
from typing import Optional, Tuple

import numpy as np

from ..errors import FluorTraceError, NoIlluminatedPixelsError
from ..spectral import SpectralDistribution, WavelengthGrid
from ..spectral.color import auto_exposure, spectra_to_rgb, spectra_to_xyz

logger = logging.getLogger(__name__)

# Rectangle (x0, y0, x1, y1), half-open in pixels
RegionOfInterest = Tuple[int, int, int, int]


class Film:
    """
    Per-pixel spectral accumulators.

    ``bins`` holds the sum of all sample values per pixel and grid
    wavelength, ``sample_counts`` the number of samples per pixel and
    wavelength. Pixel radiance is their ratio.
    """

    def __init__(self, width: int, height: int, grid: WavelengthGrid):
        """
        Initialize an empty film.

        Args:
            width: Width in pixels
            height: Height in pixels
            grid: Wavelength grid of the bins
        """
        if width < 1 or height < 1:
            raise FluorTraceError(f"Invalid film size: {width}x{height}")
        self.grid = grid
        self.bins = np.zeros((height, width, grid.count), dtype=np.float64)
        self.sample_counts = np.zeros((height, width), dtype=np.uint32)

    @property
    def resolution(self) -> Tuple[int, int]:
        return self.bins.shape[1], self.bins.shape[0]

    @property
    def width(self) -> int:
        return self.bins.shape[1]

    @property
    def height(self) -> int:
        return self.bins.shape[0]

    def add_sample(self, pixel: Tuple[int, int], wavelength: float, value: float) -> None:
        """
        Add one sample value to a pixel bin.

        Args:
            pixel: Pixel (x, y)
            wavelength: Wavelength in nm, snapped to the grid
            value: Non-negative, finite radiance sample

        Raises:
            FluorTraceError: If the value is negative or not finite
        """
        if not np.isfinite(value) or value < 0.0:
            raise FluorTraceError(f"Invalid film sample: {value}")
        x, y = pixel
        self.bins[y, x, self.grid.index_of(wavelength)] += value

    def add_block(self, rows: slice, cols: slice, wavelengths: slice, sums: np.ndarray) -> None:
        """Add a block of per-pixel sums (single writer per block)."""
        self.bins[rows, cols, wavelengths] += sums

    def add_counts(self, rows: slice, cols: slice, count: int) -> None:
        """Record completed samples for a block of pixels."""
        self.sample_counts[rows, cols] += np.uint32(count)

    def merge(self, other: "Film") -> "Film":
        """
        Sum of two partial films.

        Raises:
            FluorTraceError: If sizes or grids differ
        """
        if self.bins.shape != other.bins.shape or self.grid != other.grid:
            raise FluorTraceError("Cannot merge films of different sizes or grids")
        merged = Film(self.width, self.height, self.grid)
        merged.bins = self.bins + other.bins
        merged.sample_counts = self.sample_counts + other.sample_counts
        return merged

    def radiance(self) -> np.ndarray:
        """Mean spectral radiance per pixel, shape (h, w, n)."""
        counts = self.sample_counts.astype(np.float64)[:, :, None]
        return np.divide(self.bins, counts, out=np.zeros_like(self.bins), where=counts > 0)

    def pixel_spd(self, x: int, y: int) -> SpectralDistribution:
        """Mean spectral radiance of one pixel."""
        return SpectralDistribution(self.grid, self.radiance()[y, x])

    def scene_spd(self, threshold: float = 0.0, roi: Optional[RegionOfInterest] = None) -> SpectralDistribution:
        """
        Mean spectrum over illuminated pixels.

        A pixel is illuminated when its spectral energy (radiance summed over
        the grid times the step) exceeds the threshold.

        Args:
            threshold: Energy threshold, 0 means any nonzero pixel
            roi: Optional rectangle (x0, y0, x1, y1) restricting the pixels

        Returns:
            Mean pixel spectrum

        Raises:
            NoIlluminatedPixelsError: If no pixel exceeds the threshold
        """
        radiance = self.radiance()
        if roi is not None:
            x0, y0, x1, y1 = roi
            radiance = radiance[y0:y1, x0:x1]
        pixels = radiance.reshape(-1, self.grid.count)
        energy = pixels.sum(axis=1) * self.grid.step
        illuminated = energy > threshold
        count = int(np.count_nonzero(illuminated))
        if count == 0:
            raise NoIlluminatedPixelsError(
                f"No pixel exceeds the illumination threshold {threshold:g}",
                "Increase samples per pixel or lower the threshold",
            )
        logger.debug(f"Scene spectrum over {count} of {len(pixels)} pixels")
        return SpectralDistribution(self.grid, pixels[illuminated].sum(axis=0) / count)

    def to_rgb(self, exposure: Optional[float] = None) -> np.ndarray:
        """
        8-bit sRGB image, shape (h, w, 3).

        Args:
            exposure: Linear exposure; maps the 99th percentile of luminance to
                one if None

        Returns:
            uint8 array
        """
        radiance = self.radiance()
        if exposure is None:
            luminance = spectra_to_xyz(radiance, self.grid)[..., 1]
            exposure = auto_exposure(luminance) or 1.0
            logger.debug(f"Automatic exposure {exposure:.4g}")
        rgb = spectra_to_rgb(radiance, self.grid, exposure)
        return np.round(rgb * 255.0).astype(np.uint8)

    def checksum(self) -> str:
        """SHA-256 hex digest of the film's raw spectral dump."""
        from .io import flspd_bytes

        return hashlib.sha256(flspd_bytes(self)).hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Film):
            return NotImplemented
        return (
            self.grid == other.grid
            and np.array_equal(self.sample_counts, other.sample_counts)
            and np.array_equal(self.bins, other.bins)
        )

    def __repr__(self) -> str:
        """String representation of the film."""
        return f"Film({self.width}x{self.height}, {self.grid.count} wavelengths)"
