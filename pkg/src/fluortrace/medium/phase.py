"""
Henyey-Greenstein phase function and direction sampling.

Cosines are measured against the propagation direction, so g > 0 favours
forward scattering. All functions accept numpy arrays and broadcast.
"""

from typing import Optional, Tuple, Union

import numpy as np

INV_4PI = 0.25 / np.pi
ISOTROPIC_THRESHOLD = 1e-3

Scalar = Union[float, np.ndarray]


def phase_eval(g: Scalar, cos_theta: Scalar) -> Scalar:
    """
    Henyey-Greenstein density per steradian.

    Args:
        g: Asymmetry parameter in (-1, 1)
        cos_theta: Cosine between propagation and scattered directions

    Returns:
        Phase function value, 1/(4*pi) for g = 0
    """
    g = np.asarray(g, dtype=np.float64)
    denom = np.maximum(1.0 + g * g - 2.0 * g * np.asarray(cos_theta), 1e-300)
    result = INV_4PI * (1.0 - g * g) / (denom * np.sqrt(denom))
    if np.ndim(result) == 0:
        return float(result)
    return result


def sample_cos_theta(g: Scalar, u: Scalar) -> np.ndarray:
    """Invert the Henyey-Greenstein CDF for the scattering cosine."""
    g = np.asarray(g, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    safe_g = np.where(np.abs(g) < ISOTROPIC_THRESHOLD, 1.0, g)
    ratio = (1.0 - safe_g * safe_g) / (1.0 - safe_g + 2.0 * safe_g * u)
    cos_hg = (1.0 + safe_g * safe_g - ratio * ratio) / (2.0 * safe_g)
    cos_theta = np.where(np.abs(g) < ISOTROPIC_THRESHOLD, 1.0 - 2.0 * u, cos_hg)
    return np.clip(cos_theta, -1.0, 1.0)


def orthonormal_basis(n: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    Branchless tangent frame around unit vectors of shape (..., 3).

    Returns:
        Tuple of two tangent vectors, each of shape (..., 3)
    """
    x, y, z = n[..., 0], n[..., 1], n[..., 2]
    sign = np.where(z >= 0.0, 1.0, -1.0)
    a = -1.0 / (sign + z)
    b = x * y * a
    t = np.stack([1.0 + sign * x * x * a, sign * b, -sign * x], axis=-1)
    s = np.stack([b, sign + y * y * a, -y], axis=-1)
    return t, s


def to_world(local: np.ndarray, axis: np.ndarray) -> np.ndarray:
    """Rotate local directions (z along ``axis``) into world space."""
    t, s = orthonormal_basis(axis)
    return (
        local[..., 0:1] * t + local[..., 1:2] * s + local[..., 2:3] * axis
    )


def spherical_direction(cos_theta: np.ndarray, phi: np.ndarray) -> np.ndarray:
    """Local direction from polar cosine and azimuth."""
    sin_theta = np.sqrt(np.maximum(0.0, 1.0 - cos_theta * cos_theta))
    return np.stack(
        [sin_theta * np.cos(phi), sin_theta * np.sin(phi), cos_theta], axis=-1
    )


def phase_sample(
    g: Scalar,
    u1: Scalar,
    u2: Scalar,
    direction: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, Scalar]:
    """
    Sample a scattered direction from the Henyey-Greenstein distribution.

    Args:
        g: Asymmetry parameter in (-1, 1)
        u1: Uniform number(s) for the polar angle
        u2: Uniform number(s) for the azimuth
        direction: Propagation direction(s); +z if None

    Returns:
        Tuple of (unit direction(s), pdf per steradian equal to phase_eval)
    """
    cos_theta = sample_cos_theta(g, u1)
    phi = 2.0 * np.pi * np.asarray(u2, dtype=np.float64)
    local = spherical_direction(cos_theta, phi)
    if direction is None:
        world = local
    else:
        world = to_world(local, np.asarray(direction, dtype=np.float64))
    return world, phase_eval(g, cos_theta)


def sample_isotropic(u1: Scalar, u2: Scalar) -> np.ndarray:
    """Uniform direction(s) on the unit sphere."""
    cos_theta = 1.0 - 2.0 * np.asarray(u1, dtype=np.float64)
    phi = 2.0 * np.pi * np.asarray(u2, dtype=np.float64)
    return spherical_direction(cos_theta, phi)
