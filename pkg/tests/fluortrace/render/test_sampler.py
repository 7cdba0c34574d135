"""
Tests for the counter-based random streams.
"""

import numpy as np
import pytest
from scipy import stats

from fluortrace.render.sampler import (
    CAMERA_DIMENSIONS,
    DIMENSIONS_PER_STEP,
    mix64,
    path_keys,
    step_dimension,
    uniform,
)


class TestMix64:
    """Test the 64-bit finalizer."""

    def test_known_value(self):
        """Test the finalizer of zero plus the golden increment."""
        # First output of a SplitMix64 generator seeded with zero
        x = np.array([0x9E3779B97F4A7C15], dtype=np.uint64)
        assert int(mix64(x)[0]) == 0xE220A8397B1DCDAF

    def test_zero_is_fixed_point(self):
        """Test that zero maps to zero."""
        assert int(mix64(np.array([0], dtype=np.uint64))[0]) == 0


class TestPathKeys:
    """Test stream key derivation."""

    def test_keys_differ_per_coordinate(self):
        """Test that pixel, sample and wavelength each change the key."""
        base = path_keys(1, np.array([0]), np.array([0]), np.array([0]))
        assert path_keys(1, np.array([1]), np.array([0]), np.array([0]))[0] != base[0]
        assert path_keys(1, np.array([0]), np.array([1]), np.array([0]))[0] != base[0]
        assert path_keys(1, np.array([0]), np.array([0]), np.array([1]))[0] != base[0]
        assert path_keys(2, np.array([0]), np.array([0]), np.array([0]))[0] != base[0]

    def test_correlated_wavelengths_share_keys(self):
        """Test that correlated streams ignore the wavelength index."""
        keys = path_keys(7, np.array([3, 3]), np.array([5, 5]), np.array([0, 200]), correlated_wavelengths=True)
        assert keys[0] == keys[1]

    def test_batch_independence(self):
        """Test that a key depends only on its own tuple."""
        pixels = np.arange(10)
        batch = path_keys(9, pixels, pixels * 2, pixels % 3)
        single = [path_keys(9, np.array([p]), np.array([p * 2]), np.array([p % 3]))[0] for p in pixels]
        assert list(batch) == single

    def test_large_seed(self):
        """Test that the full 64-bit seed range is accepted."""
        keys = path_keys(2**64 - 1, np.array([0]), np.array([0]), np.array([0]))
        assert keys.dtype == np.uint64


class TestUniform:
    """Test uniform number generation."""

    def test_range(self):
        """Test that values lie in [0, 1)."""
        keys = path_keys(0, np.arange(10000), np.zeros(10000), np.zeros(10000))
        values = uniform(keys, 0)
        assert values.min() >= 0.0
        assert values.max() < 1.0

    def test_distribution(self):
        """Test that values pass a Kolmogorov-Smirnov test for uniformity."""
        keys = path_keys(3, np.arange(20000), np.zeros(20000), np.zeros(20000))
        assert stats.kstest(uniform(keys, 5), "uniform").pvalue > 1e-3

    def test_dimensions_are_independent(self):
        """Test that two dimensions of the same streams are uncorrelated."""
        keys = path_keys(3, np.arange(20000), np.zeros(20000), np.zeros(20000))
        correlation = np.corrcoef(uniform(keys, 0), uniform(keys, 1))[0, 1]
        assert abs(correlation) < 0.03

    def test_deterministic(self):
        """Test that the same key and dimension give the same value."""
        keys = path_keys(11, np.arange(5), np.arange(5), np.arange(5))
        np.testing.assert_array_equal(uniform(keys, 4), uniform(keys, 4))

    def test_per_path_dimension(self):
        """Test that a dimension array selects per-path dimensions."""
        keys = path_keys(11, np.arange(3), np.zeros(3), np.zeros(3))
        mixed = uniform(keys, np.array([0, 1, 2]))
        expected = [uniform(keys[i : i + 1], i)[0] for i in range(3)]
        np.testing.assert_array_equal(mixed, expected)


class TestStepDimension:
    """Test the layout of random dimensions along a path."""

    def test_layout(self):
        """Test that steps use disjoint blocks after the camera dimensions."""
        assert step_dimension(0, 0) == CAMERA_DIMENSIONS
        assert step_dimension(1, 0) == CAMERA_DIMENSIONS + DIMENSIONS_PER_STEP
        assert step_dimension(2, 3) == CAMERA_DIMENSIONS + 2 * DIMENSIONS_PER_STEP + 3

    @pytest.mark.parametrize("slot", [0, DIMENSIONS_PER_STEP - 1])
    def test_blocks_do_not_overlap(self, slot):
        """Test that slots stay inside their step's block."""
        dimension = step_dimension(np.arange(4), slot)
        assert np.all((dimension - CAMERA_DIMENSIONS) // DIMENSIONS_PER_STEP == np.arange(4))
