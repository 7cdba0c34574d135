"""
Tabulated spectral distributions.

This module provides the SpectralDistribution type together with the
resampling, integration and inverse-CDF sampling operations used by the
fluorophore, medium and integrator layers.
"""

import logging
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from ..errors import FluorTraceError, ZeroSpectrumError
from .grid import WavelengthGrid

logger = logging.getLogger(__name__)

ArrayLike = Union[float, Sequence[float], np.ndarray]


@dataclass(frozen=True, eq=False)
class SpectralDistribution:
    """
    Non-negative function of wavelength tabulated on a regular grid.

    Off-grid lookups interpolate linearly; wavelengths outside the grid
    support evaluate to 0.

    Attributes:
        grid: Wavelength grid the values are tabulated on
        values: One non-negative value per grid wavelength
    """

    grid: WavelengthGrid
    values: np.ndarray

    def __post_init__(self):
        """Validate and freeze the value table."""
        values = np.array(self.values, dtype=np.float64)
        if values.shape != (self.grid.count,):
            raise FluorTraceError(
                f"Spectrum has {values.size} values but grid has {self.grid.count} samples"
            )
        if not np.all(np.isfinite(values)):
            raise FluorTraceError("Spectrum values must be finite")
        if np.any(values < 0):
            raise FluorTraceError("Spectrum values must be non-negative")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, grid: WavelengthGrid, value: float) -> "SpectralDistribution":
        """Constant spectrum over the whole grid."""
        return cls(grid, np.full(grid.count, float(value)))

    @classmethod
    def zeros(cls, grid: WavelengthGrid) -> "SpectralDistribution":
        """All-zero spectrum."""
        return cls(grid, np.zeros(grid.count))

    @classmethod
    def monochromatic(
        cls, grid: WavelengthGrid, wavelength: float, value: float = 1.0
    ) -> "SpectralDistribution":
        """
        Single-sample impulse at the grid point nearest to a wavelength.

        Args:
            grid: Target grid
            wavelength: Impulse wavelength in nm
            value: Impulse height

        Returns:
            SpectralDistribution with one nonzero sample
        """
        values = np.zeros(grid.count)
        values[grid.index_of(wavelength)] = float(value)
        return cls(grid, values)

    @classmethod
    def from_samples(
        cls,
        wavelengths: ArrayLike,
        values: ArrayLike,
        grid: WavelengthGrid,
    ) -> "SpectralDistribution":
        """
        Tabulate arbitrary (wavelength, value) samples onto a grid.

        Args:
            wavelengths: Increasing sample wavelengths in nm
            values: Sample values
            grid: Target grid

        Returns:
            SpectralDistribution on ``grid``, zero outside the samples' support
        """
        wavelengths = np.atleast_1d(np.asarray(wavelengths, dtype=np.float64))
        values = np.atleast_1d(np.asarray(values, dtype=np.float64))
        order = np.argsort(wavelengths, kind="stable")
        tabulated = np.interp(
            grid.wavelengths, wavelengths[order], values[order], left=0.0, right=0.0
        )
        return cls(grid, tabulated)

    @property
    def wavelengths(self) -> np.ndarray:
        """Grid wavelengths in nm."""
        return self.grid.wavelengths

    def __call__(self, wavelength: ArrayLike) -> Union[float, np.ndarray]:
        """
        Evaluate the spectrum at arbitrary wavelengths.

        Args:
            wavelength: Scalar or array of wavelengths in nm

        Returns:
            Interpolated values, 0 outside the grid support
        """
        result = np.interp(
            wavelength, self.grid.wavelengths, self.values, left=0.0, right=0.0
        )
        if np.ndim(result) == 0:
            return float(result)
        return result

    def peak_wavelength(self) -> float:
        """Wavelength of the largest sample (first one on ties)."""
        return float(self.grid.wavelengths[int(np.argmax(self.values))])

    def scaled(self, factor: float) -> "SpectralDistribution":
        """Spectrum multiplied by a non-negative factor."""
        return SpectralDistribution(self.grid, self.values * float(factor))

    def __add__(self, other: "SpectralDistribution") -> "SpectralDistribution":
        other = resample(other, self.grid)
        return SpectralDistribution(self.grid, self.values + other.values)

    def __mul__(self, other: Union[float, "SpectralDistribution"]) -> "SpectralDistribution":
        if isinstance(other, SpectralDistribution):
            other = resample(other, self.grid)
            return SpectralDistribution(self.grid, self.values * other.values)
        return self.scaled(other)

    __rmul__ = __mul__

    def __repr__(self) -> str:
        """String representation of the spectrum."""
        return (
            f"SpectralDistribution("
            f"grid={self.grid.lambda_min:g}-{self.grid.lambda_max:g}@{self.grid.step:g}nm, "
            f"peak={self.peak_wavelength():g}nm, "
            f"max={float(self.values.max()):.4g}"
            f")"
        )


def resample(src: SpectralDistribution, dst_grid: WavelengthGrid) -> SpectralDistribution:
    """
    Re-tabulate a spectrum on another grid.

    Args:
        src: Source spectrum
        dst_grid: Destination grid

    Returns:
        Spectrum on ``dst_grid``, linear inside the source support and 0 outside
    """
    if src.grid == dst_grid:
        return src
    return SpectralDistribution.from_samples(src.grid.wavelengths, src.values, dst_grid)


def regrid(src: SpectralDistribution, dst_grid: WavelengthGrid) -> SpectralDistribution:
    """
    Re-tabulate a spectrum so its integral survives a change of grid step.

    A single-sample impulse (a monochromatic line) is snapped to the nearest
    destination sample and rescaled by the ratio of the grid steps; any other
    spectrum is resampled linearly.

    Args:
        src: Source spectrum
        dst_grid: Destination grid

    Returns:
        Spectrum on ``dst_grid``; zero if an impulse lies outside it
    """
    if src.grid == dst_grid:
        return src
    nonzero = np.flatnonzero(src.values)
    if nonzero.size != 1:
        return resample(src, dst_grid)

    index = int(nonzero[0])
    wavelength = float(src.grid.wavelengths[index])
    if not dst_grid.contains(wavelength):
        return SpectralDistribution.zeros(dst_grid)
    value = float(src.values[index]) * src.grid.step / dst_grid.step
    snapped = SpectralDistribution.monochromatic(dst_grid, wavelength, value)
    if snapped.peak_wavelength() != wavelength:
        logger.debug(f"Line at {wavelength:g} nm snapped to {snapped.peak_wavelength():g} nm")
    return snapped


def integrate(s: SpectralDistribution) -> float:
    """Trapezoidal integral of a spectrum over its grid."""
    return float(np.trapezoid(s.values, dx=s.grid.step))


def normalize_pdf(s: SpectralDistribution) -> SpectralDistribution:
    """
    Scale a spectrum so it integrates to one.

    Args:
        s: Spectrum with positive integral

    Returns:
        Probability density per nm with the same shape

    Raises:
        ZeroSpectrumError: If the spectrum integrates to zero
    """
    total = integrate(s)
    if total <= 0.0:
        raise ZeroSpectrumError("Cannot normalize a spectrum whose integral is zero")
    return SpectralDistribution(s.grid, s.values / total)


def _segment_cdf(pdf: SpectralDistribution) -> Tuple[np.ndarray, np.ndarray]:
    """Cumulative trapezoid areas at the grid knots and per-segment slopes."""
    step = pdf.grid.step
    values = pdf.values
    areas = 0.5 * (values[:-1] + values[1:]) * step
    cdf = np.concatenate(([0.0], np.cumsum(areas)))
    slopes = (values[1:] - values[:-1]) / step
    return cdf, slopes


def sample_wavelength(
    pdf: SpectralDistribution, u: ArrayLike
) -> Tuple[Union[float, np.ndarray], Union[float, np.ndarray]]:
    """
    Draw wavelengths by inverting the piecewise-quadratic CDF of a tabulated pdf.

    The inversion is exact for the piecewise-linear density, so the returned
    pdf value is the density at the sampled wavelength.

    Args:
        pdf: Density per nm (its integral is renormalized if not exactly 1)
        u: Uniform number(s) in [0, 1)

    Returns:
        Tuple of (wavelength in nm, pdf value per nm)

    Raises:
        ZeroSpectrumError: If the pdf is zero everywhere
    """
    cdf, slopes = _segment_cdf(pdf)
    total = cdf[-1]
    if total <= 0.0:
        raise ZeroSpectrumError("Cannot sample from an all-zero spectrum")

    scalar = np.ndim(u) == 0
    u = np.atleast_1d(np.asarray(u, dtype=np.float64))
    target = np.clip(u, 0.0, 1.0) * total

    segment = np.searchsorted(cdf, target, side="right") - 1
    segment = np.clip(segment, 0, slopes.size - 1)

    p0 = pdf.values[segment]
    slope = slopes[segment]
    remainder = np.maximum(target - cdf[segment], 0.0)

    # Root of p0*x + slope*x^2/2 = remainder in its cancellation-free form
    discriminant = np.maximum(p0 * p0 + 2.0 * slope * remainder, 0.0)
    denominator = p0 + np.sqrt(discriminant)
    offset = np.divide(
        2.0 * remainder,
        denominator,
        out=np.zeros_like(remainder),
        where=denominator > 0.0,
    )
    offset = np.clip(offset, 0.0, pdf.grid.step)

    wavelength = pdf.grid.wavelengths[segment] + offset
    density = (p0 + slope * offset) / total

    if scalar:
        return float(wavelength[0]), float(density[0])
    return wavelength, density


def sample_discrete(weights: np.ndarray, u: ArrayLike) -> Tuple[np.ndarray, np.ndarray]:
    """
    Draw indices proportionally to non-negative weights along the last axis.

    Args:
        weights: Array of shape (..., n); rows must have a positive sum
        u: Uniform numbers broadcastable to ``weights.shape[:-1]``

    Returns:
        Tuple of (indices, probabilities of the drawn indices)
    """
    weights = np.asarray(weights, dtype=np.float64)
    cumulative = np.cumsum(weights, axis=-1)
    totals = cumulative[..., -1]
    target = np.asarray(u, dtype=np.float64) * totals
    indices = np.sum(cumulative <= target[..., None], axis=-1)
    indices = np.minimum(indices, weights.shape[-1] - 1)
    chosen = np.take_along_axis(weights, indices[..., None], axis=-1)[..., 0]
    probabilities = np.divide(
        chosen, totals, out=np.zeros_like(chosen), where=totals > 0.0
    )
    return indices, probabilities
