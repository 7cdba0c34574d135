"""
Fluorescent dye model.

This module provides the Fluorophore and DissolvedFluorophore types, the
Beer-Lambert absorption coefficient of a dissolved dye, the
excitation-to-emission function and emission-wavelength sampling.
"""

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import InvariantViolationError, ZeroSpectrumError
from ..spectral import (
    SpectralDistribution,
    WavelengthGrid,
    integrate,
    normalize_pdf,
    resample,
    sample_wavelength,
)

LN10 = math.log(10.0)
# L/(mol*cm) * mol/L gives cm^-1; this converts to m^-1
PER_CM_TO_PER_M = 100.0


@dataclass(frozen=True, eq=False)
class Fluorophore:
    """
    Intrinsic spectroscopic identity of a fluorescent dye.

    The excitation spectrum is peak-normalized on construction.

    Attributes:
        name: Database identifier (e.g. ``alexa488``)
        excitation: Relative excitation spectrum f_x
        emission: Relative emission spectrum f_m
        epsilon_max: Peak molar absorptivity in L/(mol*cm)
        quantum_yield: Fraction of absorbed photons re-emitted, in [0, 1]
        molecular_weight: Molecular weight in g/mol
        display_name: Human-readable name
        molar_absorptivity: Optional absorptivity curve in L/(mol*cm); when
            absent, epsilon_max scales the excitation shape
    """

    name: str
    excitation: SpectralDistribution
    emission: SpectralDistribution
    epsilon_max: float
    quantum_yield: float
    molecular_weight: float
    display_name: Optional[str] = None
    molar_absorptivity: Optional[SpectralDistribution] = field(default=None)

    def __post_init__(self):
        """Validate dye invariants and peak-normalize the excitation spectrum."""
        if not 0.0 <= self.quantum_yield <= 1.0:
            raise InvariantViolationError(
                f"{self.name}: quantum yield {self.quantum_yield} outside [0, 1]"
            )
        if self.molecular_weight <= 0:
            raise InvariantViolationError(
                f"{self.name}: molecular weight must be positive, got {self.molecular_weight}"
            )
        if self.epsilon_max < 0:
            raise InvariantViolationError(
                f"{self.name}: molar absorptivity must be non-negative, got {self.epsilon_max}"
            )

        peak = float(self.excitation.values.max())
        if peak <= 0.0:
            raise InvariantViolationError(f"{self.name}: excitation spectrum is all zero")
        if float(self.emission.values.max()) <= 0.0:
            raise InvariantViolationError(f"{self.name}: emission spectrum is all zero")
        if peak != 1.0:
            object.__setattr__(self, "excitation", self.excitation.scaled(1.0 / peak))

        if self.emission_peak < self.excitation_peak:
            raise InvariantViolationError(
                f"{self.name}: emission peak {self.emission_peak:g} nm is below "
                f"excitation peak {self.excitation_peak:g} nm"
            )

    @property
    def label(self) -> str:
        """Display name, falling back to the identifier."""
        return self.display_name or self.name

    @property
    def excitation_peak(self) -> float:
        """Wavelength of maximum excitation in nm."""
        return self.excitation.peak_wavelength()

    @property
    def emission_peak(self) -> float:
        """Wavelength of maximum emission in nm."""
        return self.emission.peak_wavelength()

    @cached_property
    def emission_pdf(self) -> SpectralDistribution:
        """Emission spectrum normalized to unit integral."""
        return normalize_pdf(self.emission)

    def absorptivity(self, wavelength: Union[float, np.ndarray]) -> Union[float, np.ndarray]:
        """
        Molar absorptivity in L/(mol*cm) at given wavelengths.

        Args:
            wavelength: Wavelength(s) in nm

        Returns:
            epsilon(lambda), zero outside the excitation support
        """
        if self.molar_absorptivity is not None:
            return self.molar_absorptivity(wavelength)
        return self.epsilon_max * np.asarray(self.excitation(wavelength))

    def emission_weights(self, grid: WavelengthGrid) -> np.ndarray:
        """
        Discrete emission probabilities f_m(lambda) * dlambda / integral(f_m) on a grid.

        Args:
            grid: Render grid

        Returns:
            Array of shape (grid.count,)

        Raises:
            ZeroSpectrumError: If the emission integrates to zero
        """
        total = integrate(self.emission)
        if total <= 0.0:
            raise ZeroSpectrumError(f"{self.name}: emission spectrum integrates to zero")
        return resample(self.emission, grid).values * grid.step / total

    def __repr__(self) -> str:
        """String representation of the dye."""
        return (
            f"Fluorophore("
            f"name='{self.name}', "
            f"excitation_peak={self.excitation_peak:g}, "
            f"emission_peak={self.emission_peak:g}, "
            f"epsilon_max={self.epsilon_max:g}, "
            f"quantum_yield={self.quantum_yield:g}"
            f")"
        )


@dataclass(frozen=True)
class DissolvedFluorophore:
    """
    A dye dissolved in a medium at a mass concentration.

    Attributes:
        dye: The fluorophore
        concentration: Mass concentration in g/L
    """

    dye: Fluorophore
    concentration: float

    def __post_init__(self):
        """Validate concentration."""
        if self.concentration < 0:
            raise InvariantViolationError(
                f"{self.dye.name}: concentration must be non-negative, got {self.concentration}"
            )

    @property
    def molarity(self) -> float:
        """Molar concentration in mol/L."""
        return self.concentration / self.dye.molecular_weight

    def absorption_spectrum(self, grid: WavelengthGrid) -> SpectralDistribution:
        """Absorption coefficient sigma_a,f tabulated on a grid, in 1/m."""
        return SpectralDistribution(
            grid, np.asarray(fluor_absorption_coefficient(self, grid.wavelengths))
        )


def fluor_absorption_coefficient(
    d: DissolvedFluorophore, wavelength: Union[float, np.ndarray]
) -> Union[float, np.ndarray]:
    """
    Beer-Lambert absorption coefficient of a dissolved dye.

    sigma_a,f = ln(10) * epsilon(lambda) * (concentration / molecular_weight) * 100

    Args:
        d: Dissolved dye
        wavelength: Wavelength(s) in nm

    Returns:
        Absorption coefficient in 1/m, zero outside the excitation support
    """
    result = LN10 * np.asarray(d.dye.absorptivity(wavelength)) * d.molarity * PER_CM_TO_PER_M
    if np.ndim(result) == 0:
        return float(result)
    return result


def excitation_to_emission(
    f: Fluorophore,
    lambda_x: Union[float, np.ndarray],
    wavelength: Union[float, np.ndarray],
    delta_lambda: float,
) -> Union[float, np.ndarray]:
    """
    Probability that excitation at lambda_x re-emits into the band around lambda.

    F_f(lambda_x, lambda) = f_m(lambda) * dlambda / integral(f_m) * f_x(lambda_x)

    Args:
        f: Fluorophore
        lambda_x: Excitation wavelength(s) in nm
        wavelength: Emission wavelength(s) in nm
        delta_lambda: Spectral sampling step in nm

    Returns:
        Value(s) in [0, f_x(lambda_x)]

    Raises:
        ZeroSpectrumError: If the emission integrates to zero
        ValueError: If delta_lambda is not positive
    """
    if delta_lambda <= 0:
        raise ValueError(f"delta_lambda must be positive, got {delta_lambda}")
    total = integrate(f.emission)
    if total <= 0.0:
        raise ZeroSpectrumError(f"{f.name}: emission spectrum integrates to zero")
    result = (
        np.asarray(f.emission(wavelength)) * delta_lambda / total
    ) * np.asarray(f.excitation(lambda_x))
    if np.ndim(result) == 0:
        return float(result)
    return result


def sample_emission(
    f: Fluorophore, u: Union[float, np.ndarray]
) -> Tuple[Union[float, np.ndarray], Union[float, np.ndarray]]:
    """
    Draw emission wavelengths from the normalized emission spectrum.

    Args:
        f: Fluorophore
        u: Uniform number(s) in [0, 1)

    Returns:
        Tuple of (wavelength in nm, pdf value per nm)
    """
    return sample_wavelength(f.emission_pdf, u)
