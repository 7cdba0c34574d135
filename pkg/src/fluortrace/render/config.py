"""
Configuration management for renders.

This module provides the type-safe RenderConfig dataclass and its
validation.
"""

from dataclasses import asdict, dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

from ..errors import RenderConfigError
from ..spectral import WavelengthGrid


@dataclass(frozen=True)
class RenderConfig:
    """
    Complete configuration for a render.

    Attributes:
        spp: Samples per pixel per wavelength
        max_bounces: Maximum scattering vertices per path
        seed: 64-bit seed of the counter-based random streams
        grid: Render wavelength grid
        elastic_component: Add classical elastic transport (visible lights)
        resolution: Film size override (width, height); camera size if None
        tile_size: Tile edge in pixels
        batch_size: Upper bound on paths traced per work item
        continue_after_emission: Keep walking at the excitation wavelength
            after the fluorescent emission vertex
        correlated_wavelengths: Share random streams across wavelengths
        exposure: Linear exposure for PNG output; automatic if None
    """

    spp: int = 16
    max_bounces: int = 32
    seed: int = 0
    grid: WavelengthGrid = field(default_factory=WavelengthGrid)
    elastic_component: bool = False
    resolution: Optional[Tuple[int, int]] = None
    tile_size: int = 16
    batch_size: int = 65536
    continue_after_emission: bool = False
    correlated_wavelengths: bool = False
    exposure: Optional[float] = None

    def __post_init__(self):
        """Validate render configuration."""
        if self.spp < 1:
            raise RenderConfigError(f"Invalid spp: {self.spp}")
        if self.max_bounces < 1:
            raise RenderConfigError(f"Invalid max_bounces: {self.max_bounces}")
        if not 0 <= self.seed < 2**64:
            raise RenderConfigError(f"Seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.tile_size < 1:
            raise RenderConfigError(f"Invalid tile_size: {self.tile_size}")
        if self.batch_size < 1:
            raise RenderConfigError(f"Invalid batch_size: {self.batch_size}")
        if self.resolution is not None:
            width, height = self.resolution
            if width < 1 or height < 1:
                raise RenderConfigError(f"Invalid resolution: {width}x{height}")
            object.__setattr__(self, "resolution", (int(width), int(height)))
        if self.exposure is not None and self.exposure <= 0:
            raise RenderConfigError(f"Invalid exposure: {self.exposure}")

    def with_overrides(self, **kwargs: Any) -> "RenderConfig":
        """
        Copy with selected fields replaced; None values are ignored.

        Raises:
            RenderConfigError: If a field name is unknown or a value is invalid
        """
        known = set(self.__dataclass_fields__)
        unknown = set(kwargs) - known
        if unknown:
            raise RenderConfigError(f"Unknown render settings: {', '.join(sorted(unknown))}")
        return replace(self, **{k: v for k, v in kwargs.items() if v is not None})

    def to_dict(self) -> Dict[str, Any]:
        """Convert to the scene-file ``render`` block format."""
        result = asdict(self)
        result["grid"] = self.grid.to_dict()
        if self.resolution is not None:
            result["resolution"] = list(self.resolution)
        return result

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RenderConfig":
        """
        Create configuration from a scene-file ``render`` block.

        Args:
            data: Mapping of field names to values; ``grid`` may be a mapping

        Returns:
            RenderConfig instance

        Raises:
            RenderConfigError: If a key is unknown or a value is invalid
        """
        data = dict(data or {})
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise RenderConfigError(f"Unknown render settings: {', '.join(sorted(unknown))}")
        if isinstance(data.get("grid"), dict):
            data["grid"] = WavelengthGrid.from_dict(data["grid"])
        if data.get("resolution") is not None:
            data["resolution"] = tuple(data["resolution"])
        try:
            return cls(**data)
        except TypeError as e:
            raise RenderConfigError(f"Invalid render settings: {e}")
