"""
Surface materials.

Opaque materials carry a spectral reflectance; dielectrics bound the media
and are either thin (rays pass straight through) or refractive.
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import SceneValidationError
from ..spectral import SpectralDistribution


class Material:
    """Base class for surface materials."""

    opaque: bool = True


def _check_reflectance(reflectance: SpectralDistribution, kind: str) -> None:
    if np.any(reflectance.values > 1.0 + 1e-9):
        raise SceneValidationError(kind, "reflectance exceeds 1 (energy conservation)")


@dataclass(frozen=True, eq=False)
class Lambertian(Material):
    """
    Ideal diffuse reflector.

    Attributes:
        reflectance: Albedo per wavelength in [0, 1]
    """

    reflectance: SpectralDistribution

    def __post_init__(self):
        """Validate energy conservation."""
        _check_reflectance(self.reflectance, "lambertian")


@dataclass(frozen=True, eq=False)
class GlossyPhong(Material):
    """
    Normalized modified-Phong glossy reflector.

    Attributes:
        reflectance: Specular albedo per wavelength in [0, 1]
        exponent: Phong exponent
    """

    reflectance: SpectralDistribution
    exponent: float

    def __post_init__(self):
        """Validate material configuration."""
        _check_reflectance(self.reflectance, "phong")
        if not self.exponent > 0:
            raise SceneValidationError("phong", f"exponent must be positive, got {self.exponent}")


@dataclass(frozen=True, eq=False)
class SmoothDielectric(Material):
    """
    Transparent boundary of a medium-filled shape.

    Attributes:
        ior: Index of refraction of the interior
        refract: Bend rays by Snell's law instead of passing straight through
        medium: Index of the interior medium in the scene, if any
    """

    ior: float = 1.33
    refract: bool = False
    medium: Optional[int] = None
    opaque = False

    def __post_init__(self):
        """Validate material configuration."""
        if not self.ior > 1.0:
            raise SceneValidationError("dielectric", f"ior must exceed 1, got {self.ior}")


@dataclass(frozen=True, eq=False)
class Emissive(Material):
    """Black surface of an area light; its radiance lives on the Light."""

    light: int
