"""
Homogeneous participating media with dissolved fluorophores.

This module provides the Medium type, transmittance, free-flight sampling
and the classification of medium collisions into elastic scattering,
fluorescent emission and absorption.
"""

import enum
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import List, Optional, Tuple, Union

import numpy as np

from ..errors import InvariantViolationError, VacuumMediumError
from ..fluorophore import DissolvedFluorophore
from ..spectral import SpectralDistribution, WavelengthGrid, resample

logger = logging.getLogger(__name__)

# Pure-water scattering at 500 nm in 1/m and its wavelength exponent
WATER_SCATTERING_500 = 0.00288
WATER_SCATTERING_EXPONENT = -4.32


class MediumEvent(enum.IntEnum):
    """Outcome of a collision inside a medium."""

    ELASTIC_SCATTER = 0
    FLUORESCENT_EMISSION = 1
    ABSORBED = 2


def water_scattering(grid: WavelengthGrid, scale: float = 1.0) -> SpectralDistribution:
    """
    Pure-water scattering coefficient scaled by a factor.

    b(lambda) = 0.00288 * (lambda / 500)^-4.32 in 1/m

    Args:
        grid: Wavelength grid
        scale: Multiplier, e.g. 100 for a solvent scattering 100 times more than water

    Returns:
        Scattering coefficient spectrum in 1/m
    """
    values = WATER_SCATTERING_500 * np.power(grid.wavelengths / 500.0, WATER_SCATTERING_EXPONENT)
    return SpectralDistribution(grid, values * scale)


@dataclass(frozen=True, eq=False)
class Medium:
    """
    Homogeneous medium filling the interior of a closed shape.

    Attributes:
        sigma_a_bg: Background absorption coefficient in 1/m
        sigma_s_bg: Background scattering coefficient in 1/m
        phase_g: Henyey-Greenstein asymmetry in (-1, 1)
        fluorophores: Dissolved dyes
        name: Identifier used in scene files and logs
    """

    sigma_a_bg: SpectralDistribution
    sigma_s_bg: SpectralDistribution
    phase_g: float = 0.0
    fluorophores: List[DissolvedFluorophore] = field(default_factory=list)
    name: str = "medium"

    def __post_init__(self):
        """Validate medium configuration and unify grids."""
        if not -1.0 < self.phase_g < 1.0:
            raise InvariantViolationError(
                f"{self.name}: phase_g must lie in (-1, 1), got {self.phase_g}"
            )
        if self.sigma_s_bg.grid != self.sigma_a_bg.grid:
            object.__setattr__(self, "sigma_s_bg", resample(self.sigma_s_bg, self.grid))
        object.__setattr__(self, "fluorophores", list(self.fluorophores))

    @property
    def grid(self) -> WavelengthGrid:
        """Grid all coefficient tables live on."""
        return self.sigma_a_bg.grid

    @property
    def is_fluorescent(self) -> bool:
        """Whether any dissolved dye can absorb."""
        return any(d.concentration > 0 for d in self.fluorophores)

    @cached_property
    def sigma_a_fluor(self) -> np.ndarray:
        """Per-dye absorption coefficients on the grid, shape (K, n)."""
        if not self.fluorophores:
            return np.zeros((0, self.grid.count))
        table = np.stack(
            [d.absorption_spectrum(self.grid).values for d in self.fluorophores]
        )
        table.setflags(write=False)
        return table

    @cached_property
    def quantum_yields(self) -> np.ndarray:
        """Per-dye quantum yields, shape (K,)."""
        return np.array([d.dye.quantum_yield for d in self.fluorophores], dtype=np.float64)

    @cached_property
    def sigma_t_table(self) -> np.ndarray:
        """Extinction coefficient on the grid."""
        table = (
            self.sigma_a_bg.values
            + self.sigma_s_bg.values
            + self.sigma_a_fluor.sum(axis=0)
        )
        table.setflags(write=False)
        return table

    @cached_property
    def emission_weights(self) -> np.ndarray:
        """Per-dye discrete emission probabilities on the grid, shape (K, n)."""
        if not self.fluorophores:
            return np.zeros((0, self.grid.count))
        return np.stack([d.dye.emission_weights(self.grid) for d in self.fluorophores])

    @cached_property
    def event_probability_table(self) -> np.ndarray:
        """
        Event probabilities per grid wavelength, shape (n, K + 2).

        Columns are elastic scatter, emission via each dye, then absorption.
        Wavelengths with zero extinction get zero rows.
        """
        sigma_t = self.sigma_t_table
        elastic = self.sigma_s_bg.values
        emission = self.sigma_a_fluor * self.quantum_yields[:, None]
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = np.where(sigma_t > 0.0, 1.0 / sigma_t, 0.0)
        p_elastic = elastic * inv
        p_emission = emission * inv[None, :]
        p_absorbed = np.clip(1.0 - p_elastic - p_emission.sum(axis=0), 0.0, 1.0)
        p_absorbed = np.where(sigma_t > 0.0, p_absorbed, 0.0)
        table = np.column_stack([p_elastic, p_emission.T, p_absorbed])
        table.setflags(write=False)
        return table

    def sigma_t(self, wavelength: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Extinction coefficient in 1/m at arbitrary wavelengths."""
        result = np.interp(
            wavelength, self.grid.wavelengths, self.sigma_t_table, left=0.0, right=0.0
        )
        if np.ndim(result) == 0:
            return float(result)
        return result

    def sigma_s(self, wavelength: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Background scattering coefficient in 1/m."""
        return self.sigma_s_bg(wavelength)

    def albedo(self, wavelength: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """Single-scattering albedo sigma_s / sigma_t, 0 where sigma_t is 0."""
        sigma_t = np.asarray(self.sigma_t(wavelength))
        sigma_s = np.asarray(self.sigma_s(wavelength))
        result = np.divide(
            sigma_s, sigma_t, out=np.zeros_like(sigma_t, dtype=np.float64), where=sigma_t > 0
        )
        if np.ndim(result) == 0:
            return float(result)
        return result

    def mean_free_path(self, wavelength: float) -> float:
        """Mean distance between collisions in m, infinite in vacuum."""
        sigma_t = self.sigma_t(wavelength)
        return float("inf") if sigma_t == 0.0 else 1.0 / sigma_t

    def with_fluorophores(self, fluorophores: List[DissolvedFluorophore]) -> "Medium":
        """Copy of the medium with a different set of dissolved dyes."""
        return Medium(
            sigma_a_bg=self.sigma_a_bg,
            sigma_s_bg=self.sigma_s_bg,
            phase_g=self.phase_g,
            fluorophores=fluorophores,
            name=self.name,
        )

    def on_grid(self, grid: WavelengthGrid) -> "Medium":
        """Copy of the medium with its background coefficients resampled to a grid."""
        if grid == self.grid:
            return self
        return Medium(
            sigma_a_bg=resample(self.sigma_a_bg, grid),
            sigma_s_bg=resample(self.sigma_s_bg, grid),
            phase_g=self.phase_g,
            fluorophores=self.fluorophores,
            name=self.name,
        )

    def __repr__(self) -> str:
        """String representation of the medium."""
        dyes = ", ".join(f"{d.dye.name}@{d.concentration:g}g/L" for d in self.fluorophores)
        return f"Medium(name='{self.name}', g={self.phase_g:g}, dyes=[{dyes}])"


def transmittance(
    m: Medium, a: np.ndarray, b: np.ndarray, wavelength: Union[float, np.ndarray]
) -> Union[float, np.ndarray]:
    """
    Fraction of radiance surviving straight travel between two points.

    Args:
        m: Homogeneous medium
        a: Start point(s), shape (..., 3)
        b: End point(s), shape (..., 3)
        wavelength: Wavelength(s) in nm

    Returns:
        exp(-sigma_t * |b - a|), 1 when the points coincide
    """
    distance = np.linalg.norm(np.asarray(b, dtype=np.float64) - np.asarray(a, dtype=np.float64), axis=-1)
    result = np.exp(-np.asarray(m.sigma_t(wavelength)) * distance)
    if np.ndim(result) == 0:
        return float(result)
    return result


def sample_free_flight(
    m: Medium, wavelength: float, u: Union[float, np.ndarray]
) -> Tuple[Union[float, np.ndarray], Union[float, np.ndarray]]:
    """
    Sample a collision distance from the exponential free-flight distribution.

    Args:
        m: Homogeneous medium
        wavelength: Wavelength in nm
        u: Uniform number(s) in [0, 1)

    Returns:
        Tuple of (distance in m, pdf value sigma_t * exp(-sigma_t * t))

    Raises:
        VacuumMediumError: If the extinction is zero at this wavelength
    """
    sigma_t = m.sigma_t(wavelength)
    if sigma_t <= 0.0:
        raise VacuumMediumError(
            f"{m.name}: zero extinction at {wavelength:g} nm",
            "Treat the segment as transparent",
        )
    distance = -np.log1p(-np.asarray(u, dtype=np.float64)) / sigma_t
    pdf = sigma_t * np.exp(-sigma_t * distance)
    if np.ndim(distance) == 0:
        return float(distance), float(pdf)
    return distance, pdf


def classify_events(
    m: Medium, wavelength_index: np.ndarray, u: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Vectorized collision classification at grid wavelengths.

    Args:
        m: Medium
        wavelength_index: Grid indices of the wavelengths
        u: Uniform numbers in [0, 1)

    Returns:
        Tuple of (MediumEvent codes, dye indices; -1 where no dye was selected)
    """
    probabilities = m.event_probability_table[np.asarray(wavelength_index)]
    cumulative = np.cumsum(probabilities, axis=-1)
    column = np.sum(cumulative <= np.asarray(u)[..., None], axis=-1)
    column = np.minimum(column, probabilities.shape[-1] - 1)

    n_dyes = len(m.fluorophores)
    events = np.full(column.shape, int(MediumEvent.ABSORBED), dtype=np.int8)
    events[column == 0] = int(MediumEvent.ELASTIC_SCATTER)
    emitted = (column >= 1) & (column <= n_dyes)
    events[emitted] = int(MediumEvent.FLUORESCENT_EMISSION)
    dye = np.where(emitted, column - 1, -1)
    return events, dye


def classify_event(
    m: Medium, wavelength: float, u: float
) -> Tuple[MediumEvent, Optional[int]]:
    """
    Classify a collision at a wavelength.

    Elastic scatter has probability sigma_s/sigma_t; emission through dye k
    has probability Q_k * sigma_a,f_k / sigma_t; the remainder is absorption.

    Args:
        m: Medium
        wavelength: Wavelength in nm (snapped to the medium grid)
        u: Uniform number in [0, 1)

    Returns:
        Tuple of (event, selected dye index or None)
    """
    index = m.grid.index_of(wavelength)
    events, dye = classify_events(m, np.array([index]), np.array([u]))
    event = MediumEvent(int(events[0]))
    return event, (int(dye[0]) if event == MediumEvent.FLUORESCENT_EMISSION else None)


def event_probabilities(m: Medium, wavelength: float) -> Tuple[float, List[float], float]:
    """
    Analytic event probabilities at a wavelength.

    Returns:
        Tuple of (elastic, per-dye emission list, absorbed)
    """
    row = m.event_probability_table[m.grid.index_of(wavelength)]
    return float(row[0]), [float(p) for p in row[1:-1]], float(row[-1])
