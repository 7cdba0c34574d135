"""
Tests for the fluorescent dye model.

This module tests dye invariants, Beer-Lambert absorption, the
excitation-to-emission function and emission sampling.
"""

import math

import numpy as np
import pytest

from fluortrace.errors import InvariantViolationError
from fluortrace.fluorophore import (
    DissolvedFluorophore,
    Fluorophore,
    excitation_to_emission,
    fluor_absorption_coefficient,
    sample_emission,
)
from fluortrace.spectral import SpectralDistribution, WavelengthGrid, integrate

GRID = WavelengthGrid(400.0, 600.0, 1.0)


def box(lo: float, hi: float, height: float = 1.0) -> SpectralDistribution:
    values = np.where((GRID.wavelengths >= lo) & (GRID.wavelengths <= hi), height, 0.0)
    return SpectralDistribution(GRID, values)


def make_dye(**kwargs) -> Fluorophore:
    """Box-shaped test dye: excitation 450-500 nm, emission 500-550 nm."""
    fields = dict(
        name="testdye",
        excitation=box(450.0, 500.0, 2.0),
        emission=box(500.0, 550.0, 1.0),
        epsilon_max=50000.0,
        quantum_yield=0.8,
        molecular_weight=500.0,
    )
    fields.update(kwargs)
    return Fluorophore(**fields)


class TestFluorophore:
    """Test the Fluorophore class."""

    def test_excitation_peak_normalized(self):
        """Test that excitation is rescaled to a unit peak."""
        dye = make_dye()

        assert dye.excitation.values.max() == 1.0
        assert dye.excitation(475.0) == 1.0

    def test_peaks(self):
        """Test excitation and emission peak wavelengths."""
        dye = make_dye()

        assert dye.excitation_peak == 450.0
        assert dye.emission_peak == 500.0

    def test_label(self):
        """Test display name fallback."""
        assert make_dye().label == "testdye"
        assert make_dye(display_name="Test Dye").label == "Test Dye"

    @pytest.mark.parametrize("quantum_yield", [-0.1, 1.5])
    def test_quantum_yield_range(self, quantum_yield):
        """Test that quantum yields outside [0, 1] are rejected."""
        with pytest.raises(InvariantViolationError, match="quantum yield"):
            make_dye(quantum_yield=quantum_yield)

    def test_molecular_weight_positive(self):
        """Test that molecular weight must be positive."""
        with pytest.raises(InvariantViolationError, match="molecular weight"):
            make_dye(molecular_weight=0.0)

    def test_negative_stokes_shift(self):
        """Test that an emission peak below the excitation peak is rejected."""
        with pytest.raises(InvariantViolationError, match="below excitation peak"):
            make_dye(excitation=box(520.0, 560.0), emission=box(460.0, 500.0))

    def test_zero_excitation(self):
        """Test that an all-zero excitation spectrum is rejected."""
        with pytest.raises(InvariantViolationError, match="excitation spectrum is all zero"):
            make_dye(excitation=SpectralDistribution.zeros(GRID))

    def test_emission_pdf_integrates_to_one(self):
        """Test the normalized emission density."""
        assert integrate(make_dye().emission_pdf) == pytest.approx(1.0)

    def test_absorptivity_from_peak(self):
        """Test that epsilon_max scales the excitation shape."""
        dye = make_dye()

        assert dye.absorptivity(475.0) == pytest.approx(50000.0)
        assert dye.absorptivity(420.0) == pytest.approx(0.0)

    def test_absorptivity_curve(self):
        """Test that an explicit absorptivity curve takes precedence."""
        dye = make_dye(molar_absorptivity=box(450.0, 500.0, 1234.0))

        assert dye.absorptivity(475.0) == pytest.approx(1234.0)

    def test_emission_weights_sum_to_one(self):
        """Test discrete emission probabilities on a grid."""
        weights = make_dye().emission_weights(GRID)

        assert weights.shape == (GRID.count,)
        assert weights.sum() == pytest.approx(1.0, rel=0.03)

    def test_repr(self):
        """Test string representation."""
        repr_str = repr(make_dye())

        assert "name='testdye'" in repr_str
        assert "excitation_peak=450" in repr_str
        assert "quantum_yield=0.8" in repr_str


class TestDissolvedFluorophore:
    """Test dissolved dyes and Beer-Lambert absorption."""

    def test_molarity(self):
        """Test mass to molar concentration."""
        dissolved = DissolvedFluorophore(make_dye(), 1.0)

        assert dissolved.molarity == pytest.approx(0.002)

    def test_negative_concentration(self):
        """Test that negative concentrations are rejected."""
        with pytest.raises(InvariantViolationError, match="concentration"):
            DissolvedFluorophore(make_dye(), -1.0)

    def test_absorption_coefficient(self):
        """Test the Beer-Lambert coefficient in 1/m."""
        dissolved = DissolvedFluorophore(make_dye(), 1.0)

        expected = math.log(10.0) * 50000.0 * 0.002 * 100.0
        assert fluor_absorption_coefficient(dissolved, 475.0) == pytest.approx(expected)

    def test_absorption_zero_outside_support(self):
        """Test no absorption outside the excitation band."""
        dissolved = DissolvedFluorophore(make_dye(), 1.0)

        assert fluor_absorption_coefficient(dissolved, 580.0) == 0.0

    def test_absorption_monotone_in_concentration(self):
        """Test absorption grows with concentration."""
        dye = make_dye()
        wavelengths = np.array([455.0, 475.0, 495.0])

        values = [
            fluor_absorption_coefficient(DissolvedFluorophore(dye, c), wavelengths)
            for c in (0.0, 0.1, 1.0, 10.0)
        ]

        for lower, higher in zip(values, values[1:]):
            assert np.all(higher >= lower)
        assert np.all(values[0] == 0.0)

    def test_absorption_spectrum(self):
        """Test tabulation of the absorption coefficient."""
        dissolved = DissolvedFluorophore(make_dye(), 1.0)

        spectrum = dissolved.absorption_spectrum(GRID)

        assert spectrum(475.0) == pytest.approx(fluor_absorption_coefficient(dissolved, 475.0))


class TestExcitationToEmission:
    """Test the excitation-to-emission function."""

    def test_box_value(self):
        """Test the value for box spectra at a 1 nm step."""
        dye = make_dye(emission=box(500.0, 550.0, 3.0))

        # Emission integrates to 51 * 3 over the 51-sample band
        value = excitation_to_emission(dye, 475.0, 525.0, 1.0)

        assert value == pytest.approx(1.0 / 51.0)

    def test_scales_with_excitation(self):
        """Test proportionality to the excitation spectrum."""
        dye = make_dye()

        assert excitation_to_emission(dye, 420.0, 525.0, 1.0) == 0.0

    def test_zero_outside_emission(self):
        """Test no emission outside the emission band."""
        assert excitation_to_emission(make_dye(), 475.0, 580.0, 1.0) == 0.0

    def test_invalid_step(self):
        """Test that the sampling step must be positive."""
        with pytest.raises(ValueError, match="delta_lambda"):
            excitation_to_emission(make_dye(), 475.0, 525.0, 0.0)

    def test_sums_to_excitation(self):
        """Test that emission over the grid sums to f_x(lambda_x)."""
        dye = make_dye()

        values = excitation_to_emission(dye, 475.0, GRID.wavelengths, GRID.step)

        assert values.sum() == pytest.approx(1.0, rel=0.03)


class TestSampleEmission:
    """Test emission-wavelength sampling."""

    def test_samples_inside_band(self):
        """Test sampled wavelengths lie in the emission band."""
        u = np.linspace(0.001, 0.999, 200)

        wavelengths, densities = sample_emission(make_dye(), u)

        assert np.all(wavelengths >= 499.0)
        assert np.all(wavelengths <= 551.0)
        assert np.all(densities > 0.0)

    def test_median(self):
        """Test the median of a symmetric band is its center."""
        wavelength, _ = sample_emission(make_dye(), 0.5)

        assert wavelength == pytest.approx(525.0, abs=0.5)
