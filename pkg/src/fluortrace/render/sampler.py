"""
Counter-based random numbers for path tracing.

Every (seed, pixel, sample, wavelength) tuple owns an independent stream, and
each random dimension of a path is a pure hash of the stream key, so results
do not depend on how paths are batched or scheduled.
"""

from typing import Union

import numpy as np

GOLDEN = np.uint64(0x9E3779B97F4A7C15)
MIX_1 = np.uint64(0xBF58476D1CE4E5B9)
MIX_2 = np.uint64(0x94D049BB133111EB)
SHIFT_30 = np.uint64(30)
SHIFT_27 = np.uint64(27)
SHIFT_31 = np.uint64(31)
SHIFT_11 = np.uint64(11)
INV_2_53 = 1.0 / float(1 << 53)

# Dimensions consumed by the camera ray, then a fixed block per path step
CAMERA_DIMENSIONS = 2
DIMENSIONS_PER_STEP = 12


def mix64(x: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on uint64 arrays (wrapping arithmetic)."""
    x = np.asarray(x, dtype=np.uint64)
    with np.errstate(over="ignore"):
        x = (x ^ (x >> SHIFT_30)) * MIX_1
        x = (x ^ (x >> SHIFT_27)) * MIX_2
        return x ^ (x >> SHIFT_31)


def path_keys(
    seed: int,
    pixel: np.ndarray,
    sample: np.ndarray,
    wavelength_index: np.ndarray,
    correlated_wavelengths: bool = False,
) -> np.ndarray:
    """
    Stream keys for a batch of paths.

    Args:
        seed: 64-bit render seed
        pixel: Linear pixel indices
        sample: Sample indices within each pixel
        wavelength_index: Grid indices of the carried wavelengths
        correlated_wavelengths: Share streams across wavelengths of a sample

    Returns:
        uint64 key per path
    """
    base = np.uint64(seed & 0xFFFFFFFFFFFFFFFF)
    with np.errstate(over="ignore"):
        key = mix64(base + np.asarray(pixel, dtype=np.uint64))
        key = mix64(key + np.asarray(sample, dtype=np.uint64))
        if not correlated_wavelengths:
            key = mix64(key + np.asarray(wavelength_index, dtype=np.uint64))
    return key


def uniform(keys: np.ndarray, dimension: Union[int, np.ndarray]) -> np.ndarray:
    """
    Uniform numbers in [0, 1) for one dimension of each path's stream.

    Args:
        keys: Stream keys
        dimension: Dimension index, scalar or per path

    Returns:
        float64 array with 53 random bits per value
    """
    with np.errstate(over="ignore"):
        counter = (np.asarray(dimension, dtype=np.uint64) + np.uint64(1)) * GOLDEN
        bits = mix64(keys + counter)
    return (bits >> SHIFT_11).astype(np.float64) * INV_2_53


def step_dimension(step: np.ndarray, slot: int) -> np.ndarray:
    """Dimension index of a slot within a path step's block."""
    return CAMERA_DIMENSIONS + np.asarray(step, dtype=np.int64) * DIMENSIONS_PER_STEP + slot
