"""
Regular wavelength grids.

This module provides the WavelengthGrid type shared by every tabulated
spectrum, film and render configuration.
"""

from dataclasses import dataclass
from functools import cached_property
from typing import Dict, Union

import numpy as np

from ..errors import InvalidGridError

DEFAULT_LAMBDA_MIN = 300.0
DEFAULT_LAMBDA_MAX = 800.0
DEFAULT_STEP = 1.0


@dataclass(frozen=True)
class WavelengthGrid:
    """
    Regular sampling of the wavelength axis, endpoints inclusive.

    Attributes:
        lambda_min: First wavelength in nm
        lambda_max: Last wavelength in nm
        step: Spacing between samples in nm
    """

    lambda_min: float = DEFAULT_LAMBDA_MIN
    lambda_max: float = DEFAULT_LAMBDA_MAX
    step: float = DEFAULT_STEP

    def __post_init__(self):
        """Validate grid configuration."""
        if not self.lambda_min < self.lambda_max:
            raise InvalidGridError(
                f"lambda_min ({self.lambda_min}) must be below lambda_max ({self.lambda_max})"
            )
        if self.step <= 0:
            raise InvalidGridError(f"Invalid grid step: {self.step}")

        intervals = (self.lambda_max - self.lambda_min) / self.step
        if abs(intervals - round(intervals)) > 1e-6:
            raise InvalidGridError(
                f"Grid span {self.lambda_max - self.lambda_min} nm is not a multiple "
                f"of step {self.step} nm"
            )

    @property
    def count(self) -> int:
        """Number of samples on the grid."""
        return int(round((self.lambda_max - self.lambda_min) / self.step)) + 1

    @cached_property
    def wavelengths(self) -> np.ndarray:
        """Sample wavelengths in nm."""
        values = self.lambda_min + self.step * np.arange(self.count, dtype=np.float64)
        values.setflags(write=False)
        return values

    def __len__(self) -> int:
        return self.count

    def contains(self, wavelength: float) -> bool:
        """Check whether a wavelength lies within the grid support."""
        return self.lambda_min <= wavelength <= self.lambda_max

    def index_of(self, wavelength: float) -> int:
        """
        Index of the grid sample nearest to a wavelength.

        Args:
            wavelength: Wavelength in nm

        Returns:
            Nearest sample index, clamped to the grid

        """
        index = int(round((wavelength - self.lambda_min) / self.step))
        return min(max(index, 0), self.count - 1)

    def to_dict(self) -> Dict[str, float]:
        """Convert to dictionary format used in scene files."""
        return {
            "min": self.lambda_min,
            "max": self.lambda_max,
            "step": self.step,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Union[int, float]]) -> "WavelengthGrid":
        """
        Create a grid from a scene-file mapping.

        Args:
            data: Mapping with optional ``min``, ``max`` and ``step`` keys

        Returns:
            WavelengthGrid instance
        """
        return cls(
            lambda_min=float(data.get("min", DEFAULT_LAMBDA_MIN)),
            lambda_max=float(data.get("max", DEFAULT_LAMBDA_MAX)),
            step=float(data.get("step", DEFAULT_STEP)),
        )


DEFAULT_GRID = WavelengthGrid()
