"""
Tests for the single-scatter quadrature reference.
"""

import math

import numpy as np
import pytest

from fluortrace.errors import NonConvergentError, SceneValidationError
from fluortrace.fluorophore import DissolvedFluorophore
from fluortrace.medium import Medium
from fluortrace.render import Slab, single_scatter_reference
from fluortrace.scene import Box, Light, Quad, Sphere
from fluortrace.spectral import SpectralDistribution, WavelengthGrid

GRID = WavelengthGrid(400.0, 700.0, 5.0)
RAY = (np.array([0.0, 0.0, 3.0]), np.array([0.0, 0.0, -1.0]))


def medium(db, concentration=2.0e-5, dye="alexa488") -> Medium:
    return Medium(
        sigma_a_bg=SpectralDistribution.zeros(GRID),
        sigma_s_bg=SpectralDistribution.zeros(GRID),
        fluorophores=[DissolvedFluorophore(db.get(dye), concentration)],
    )


def light(wavelength=495.0, radiance=10.0) -> Light:
    return Light(
        Quad([-0.5, 1.0, -0.5], [1.0, 0.0, 0.0], [0.0, 0.0, 1.0]),
        SpectralDistribution.monochromatic(GRID, wavelength, radiance),
    )


@pytest.fixture
def slab(fluorophore_db):
    return Slab(Box([-0.5, -0.5, -0.5], [0.5, 0.5, 0.5]), medium(fluorophore_db))


class TestSingleScatterReference:
    """Test the quadrature oracle."""

    def test_positive_in_emission_band(self, slab):
        """Test that the reference is positive where the dye emits."""
        assert single_scatter_reference(slab, light(), RAY, 520.0) > 0.0

    def test_zero_outside_emission_band(self, slab):
        """Test that wavelengths without emission give zero."""
        assert single_scatter_reference(slab, light(), RAY, 420.0) == 0.0

    def test_linear_in_radiance(self, slab):
        """Test that doubling the light radiance doubles the reference."""
        single = single_scatter_reference(slab, light(radiance=10.0), RAY, 520.0)
        double = single_scatter_reference(slab, light(radiance=20.0), RAY, 520.0)
        assert double == pytest.approx(2.0 * single, rel=1e-9)

    def test_follows_excitation_spectrum(self, fluorophore_db):
        """Test that emission follows the excitation spectrum in the thin limit."""
        dye = fluorophore_db.get("alexa488")
        dilute = Slab(Box([-0.5, -0.5, -0.5], [0.5, 0.5, 0.5]), medium(fluorophore_db, 1.0e-9))
        peak = single_scatter_reference(dilute, light(495.0), RAY, 520.0)
        off_peak = single_scatter_reference(dilute, light(450.0), RAY, 520.0)
        ratio = float(dye.excitation(450.0)) / float(dye.excitation(495.0))
        assert off_peak / peak == pytest.approx(ratio, rel=1e-3)

    def test_thin_slab_limit(self, fluorophore_db):
        """Test the optically thin limit against a closed-form estimate."""
        dilute = Slab(Box([-0.5, -0.5, -0.5], [0.5, 0.5, 0.5]), medium(fluorophore_db, 1.0e-9))
        value = single_scatter_reference(dilute, light(), RAY, 520.0)
        m = dilute.medium
        j, i = GRID.index_of(495.0), GRID.index_of(520.0)
        source = 10.0 * m.quantum_yields[0] * m.sigma_a_fluor[0, j] * m.emission_weights[0, i] / (4.0 * math.pi)
        # Irradiance integrated along the ray: light solid angle seen from points on the z axis
        points = np.linspace(-0.5, 0.5, 2001)
        irradiance = []
        for z in points:
            u, v = np.meshgrid(np.linspace(-0.5, 0.5, 201), np.linspace(-0.5, 0.5, 201))
            d2 = u**2 + (v - z) ** 2 + 1.0
            irradiance.append(np.trapezoid(np.trapezoid(1.0 / d2**1.5, dx=0.005), dx=0.005))
        expected = source * np.trapezoid(irradiance, points)
        assert value == pytest.approx(expected, rel=0.01)

    def test_non_fluorescent_medium(self):
        """Test that a slab without dyes gives zero."""
        clear = Slab(
            Box([-0.5, -0.5, -0.5], [0.5, 0.5, 0.5]),
            Medium(SpectralDistribution.zeros(GRID), SpectralDistribution.constant(GRID, 1.0)),
        )
        assert single_scatter_reference(clear, light(), RAY, 520.0) == 0.0

    def test_ray_misses_slab(self, slab):
        """Test that a ray missing the slab gives zero."""
        ray = (np.array([3.0, 0.0, 3.0]), np.array([0.0, 0.0, -1.0]))
        assert single_scatter_reference(slab, light(), ray, 520.0) == 0.0

    def test_sphere_light_rejected(self, slab):
        """Test that only quad lights are supported."""
        sphere = Light(Sphere([0.0, 2.0, 0.0], 0.2), SpectralDistribution.constant(GRID, 1.0), name="bulb")
        with pytest.raises(SceneValidationError, match="quad lights only"):
            single_scatter_reference(slab, sphere, RAY, 520.0)

    def test_non_convergent(self, slab):
        """Test that an unreachable tolerance raises."""
        with pytest.raises(NonConvergentError, match="did not converge with 8 points"):
            single_scatter_reference(slab, light(), RAY, 520.0, rel_tol=0.0, max_points=8)
