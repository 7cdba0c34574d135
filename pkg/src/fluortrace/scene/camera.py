"""
Pinhole camera.
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import SceneValidationError
from .geometry import normalize


@dataclass(frozen=True, eq=False)
class Camera:
    """
    Pinhole camera looking at a target.

    Attributes:
        position: Eye point in m
        look_at: Target point in m
        up: Approximate up vector
        vertical_fov: Vertical field of view in degrees
        resolution: Film size (width, height) in pixels
    """

    position: np.ndarray
    look_at: np.ndarray
    up: np.ndarray
    vertical_fov: float
    resolution: Tuple[int, int]

    def __post_init__(self):
        """Validate camera configuration and build the view frame."""
        for name in ("position", "look_at", "up"):
            value = np.asarray(getattr(self, name), dtype=np.float64)
            if value.shape != (3,):
                raise SceneValidationError("camera", f"{name} must have three components")
            object.__setattr__(self, name, value)
        if not 0.0 < self.vertical_fov < 180.0:
            raise SceneValidationError("camera", f"vertical_fov must lie in (0, 180), got {self.vertical_fov}")
        width, height = (int(v) for v in self.resolution)
        if width < 1 or height < 1:
            raise SceneValidationError("camera", f"resolution must be at least 1x1, got {width}x{height}")
        object.__setattr__(self, "resolution", (width, height))

        forward = self.look_at - self.position
        if np.linalg.norm(forward) == 0.0:
            raise SceneValidationError("camera", "look_at coincides with position")
        forward = normalize(forward)
        right = np.cross(forward, self.up)
        if np.linalg.norm(right) < 1e-12:
            raise SceneValidationError("camera", "up is parallel to the viewing direction")
        right = normalize(right)
        true_up = np.cross(right, forward)

        half_height = np.tan(np.radians(self.vertical_fov) / 2.0)
        half_width = half_height * width / height
        object.__setattr__(self, "_forward", forward)
        object.__setattr__(self, "_right", right * half_width)
        object.__setattr__(self, "_up", true_up * half_height)

    @property
    def width(self) -> int:
        return self.resolution[0]

    @property
    def height(self) -> int:
        return self.resolution[1]

    def with_resolution(self, width: int, height: int) -> "Camera":
        """Copy of the camera with another film size."""
        return Camera(self.position, self.look_at, self.up, self.vertical_fov, (width, height))

    def generate_rays(
        self,
        pixel: np.ndarray,
        jitter_x: np.ndarray,
        jitter_y: np.ndarray,
    ) -> Tuple[np.ndarray, np.ndarray]:
        """
        Primary rays through jittered positions inside pixels.

        Args:
            pixel: Linear pixel indices (row-major, row 0 at the top)
            jitter_x: Horizontal offsets in [0, 1)
            jitter_y: Vertical offsets in [0, 1)

        Returns:
            Tuple of (origins, unit directions), each of shape (N, 3)
        """
        px = pixel % self.width
        py = pixel // self.width
        sx = 2.0 * (px + jitter_x) / self.width - 1.0
        sy = 1.0 - 2.0 * (py + jitter_y) / self.height
        directions = (
            self._forward
            + sx[:, None] * self._right
            + sy[:, None] * self._up
        )
        origins = np.broadcast_to(self.position, directions.shape).copy()
        return origins, normalize(directions)
