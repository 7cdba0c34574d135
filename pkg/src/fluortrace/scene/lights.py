"""
Spectral area lights.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from ..errors import SceneValidationError
from ..spectral import SpectralDistribution, WavelengthGrid, regrid
from .geometry import Quad, Shape, Sphere


@dataclass(frozen=True, eq=False)
class Light:
    """
    Area emitter with a spectral radiance.

    Attributes:
        shape: Emitting quad or sphere
        spd: Radiance per nm
        two_sided: Emit from both faces of a quad
        name: Identifier used in logs
    """

    shape: Shape
    spd: SpectralDistribution
    two_sided: bool = False
    name: str = "light"

    def __post_init__(self):
        """Validate light configuration."""
        if not isinstance(self.shape, (Quad, Sphere)):
            raise SceneValidationError(self.name, "lights must be quads or spheres")
        if float(self.spd.values.max()) <= 0.0:
            raise SceneValidationError(self.name, "light spectrum is zero everywhere")

    @property
    def area(self) -> float:
        """Emitting area in m^2."""
        return self.shape.area

    def sample(self, u1: np.ndarray, u2: np.ndarray) -> Tuple[np.ndarray, np.ndarray, float]:
        """
        Uniform point on the emitter.

        Returns:
            Tuple of (points, outward normals, area pdf)
        """
        points, normals = self.shape.sample_area(u1, u2)
        return points, normals, 1.0 / self.area

    def on_grid(self, grid: WavelengthGrid) -> Optional["Light"]:
        """Copy of the light tabulated on another grid, None if it no longer emits there."""
        spd = regrid(self.spd, grid)
        if not np.any(spd.values > 0.0):
            return None
        return Light(self.shape, spd, self.two_sided, self.name)

    def emission_cosine(self, normals: np.ndarray, to_receiver: np.ndarray) -> np.ndarray:
        """
        Cosine of the emission angle, zero on the dark face.

        Args:
            normals: Outward normals at the emitting points
            to_receiver: Unit directions from the emitter toward the receiver

        Returns:
            Emission cosine per point
        """
        cos = np.einsum("ij,ij->i", normals, to_receiver)
        if self.two_sided:
            return np.abs(cos)
        return np.maximum(cos, 0.0)

    def __repr__(self) -> str:
        """String representation of the light."""
        return f"Light(name='{self.name}', shape={type(self.shape).__name__}, peak={self.spd.peak_wavelength():g}nm)"
