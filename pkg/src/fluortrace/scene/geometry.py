"""
Ray-primitive geometry.

This module provides spheres, quads and axis-aligned boxes with vectorized
ray intersection, chord lengths through closed shapes and uniform area
sampling. Rays are batches of origins and unit directions of shape (N, 3).
"""

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import SceneValidationError

EPSILON = 1e-9
INF = np.inf


def normalize(v: np.ndarray) -> np.ndarray:
    """Unit vectors along the last axis."""
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("...i,...i->...", a, b)


class Shape:
    """Base class for scene primitives."""

    closed: bool = False

    def intersect(self, origins: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Nearest intersection beyond EPSILON.

        Args:
            origins: Ray origins, shape (N, 3)
            directions: Unit ray directions, shape (N, 3)

        Returns:
            Tuple of (distances, inf on miss; outward normals, shape (N, 3))
        """
        raise NotImplementedError

    def interval(self, origins: np.ndarray, directions: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Entry and exit distances along the full ray line (t0 > t1 on miss)."""
        raise NotImplementedError

    def chord(self, origins: np.ndarray, directions: np.ndarray, t_max: np.ndarray) -> np.ndarray:
        """
        Length of the segment [0, t_max] lying inside a closed shape.

        Args:
            origins: Segment starts, shape (N, 3)
            directions: Unit directions, shape (N, 3)
            t_max: Segment lengths, shape (N,)

        Returns:
            Inside length per segment, 0 for open shapes
        """
        if not self.closed:
            return np.zeros(len(origins))
        t0, t1 = self.interval(origins, directions)
        return np.maximum(np.minimum(t1, t_max) - np.maximum(t0, 0.0), 0.0)

    def contains(self, points: np.ndarray) -> np.ndarray:
        """Whether points lie strictly inside a closed shape."""
        return np.zeros(len(points), dtype=bool)

    @property
    def area(self) -> float:
        """Surface area in m^2."""
        raise NotImplementedError

    def sample_area(self, u1: np.ndarray, u2: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """
        Uniform points on the surface.

        Returns:
            Tuple of (points, outward normals), each of shape (N, 3)
        """
        raise NotImplementedError


@dataclass(frozen=True, eq=False)
class Sphere(Shape):
    """
    Sphere primitive.

    Attributes:
        center: Center point in m
        radius: Radius in m
    """

    center: np.ndarray
    radius: float
    closed = True

    def __post_init__(self):
        """Validate sphere configuration."""
        object.__setattr__(self, "center", np.asarray(self.center, dtype=np.float64))
        if self.center.shape != (3,):
            raise SceneValidationError("sphere", "center must have three components")
        if not self.radius > 0:
            raise SceneValidationError("sphere", f"radius must be positive, got {self.radius}")

    def interval(self, origins, directions):
        oc = origins - self.center
        b = _dot(oc, directions)
        c = _dot(oc, oc) - self.radius * self.radius
        disc = b * b - c
        hit = disc >= 0.0
        root = np.sqrt(np.where(hit, disc, 0.0))
        t0 = np.where(hit, -b - root, INF)
        t1 = np.where(hit, -b + root, -INF)
        return t0, t1

    def intersect(self, origins, directions):
        t0, t1 = self.interval(origins, directions)
        t = np.where(t0 > EPSILON, t0, np.where(t1 > EPSILON, t1, INF))
        points = origins + np.where(np.isfinite(t), t, 0.0)[:, None] * directions
        normals = (points - self.center) / self.radius
        return t, normals

    def contains(self, points):
        offset = points - self.center
        return _dot(offset, offset) < self.radius * self.radius

    @property
    def area(self) -> float:
        return 4.0 * np.pi * self.radius * self.radius

    def sample_area(self, u1, u2):
        cos_theta = 1.0 - 2.0 * u1
        sin_theta = np.sqrt(np.maximum(0.0, 1.0 - cos_theta * cos_theta))
        phi = 2.0 * np.pi * u2
        normals = np.stack(
            [sin_theta * np.cos(phi), sin_theta * np.sin(phi), cos_theta], axis=-1
        )
        return self.center + self.radius * normals, normals


@dataclass(frozen=True, eq=False)
class Quad(Shape):
    """
    Parallelogram spanned by two edges from a corner.

    Attributes:
        corner: Corner point in m
        edge_u: First edge vector in m
        edge_v: Second edge vector in m
    """

    corner: np.ndarray
    edge_u: np.ndarray
    edge_v: np.ndarray

    def __post_init__(self):
        """Validate quad configuration."""
        for name in ("corner", "edge_u", "edge_v"):
            value = np.asarray(getattr(self, name), dtype=np.float64)
            if value.shape != (3,):
                raise SceneValidationError("quad", f"{name} must have three components")
            object.__setattr__(self, name, value)
        cross = np.cross(self.edge_u, self.edge_v)
        if np.linalg.norm(cross) <= 1e-12 * max(
            np.linalg.norm(self.edge_u) * np.linalg.norm(self.edge_v), 1e-300
        ):
            raise SceneValidationError("quad", "edge vectors are linearly dependent")
        object.__setattr__(self, "_normal", normalize(cross))
        # Dual basis for barycentric coordinates within the plane
        uu = self.edge_u @ self.edge_u
        uv = self.edge_u @ self.edge_v
        vv = self.edge_v @ self.edge_v
        det = uu * vv - uv * uv
        object.__setattr__(self, "_dual_u", (vv * self.edge_u - uv * self.edge_v) / det)
        object.__setattr__(self, "_dual_v", (uu * self.edge_v - uv * self.edge_u) / det)

    @property
    def normal(self) -> np.ndarray:
        """Unit normal edge_u x edge_v."""
        return self._normal

    def intersect(self, origins, directions):
        denom = directions @ self._normal
        parallel = np.abs(denom) < 1e-12
        safe = np.where(parallel, 1.0, denom)
        t = ((self.corner - origins) @ self._normal) / safe
        points = origins + t[:, None] * directions
        rel = points - self.corner
        a = rel @ self._dual_u
        b = rel @ self._dual_v
        hit = (~parallel) & (t > EPSILON) & (a >= 0.0) & (a <= 1.0) & (b >= 0.0) & (b <= 1.0)
        normals = np.broadcast_to(self._normal, origins.shape)
        return np.where(hit, t, INF), normals

    def interval(self, origins, directions):
        n = len(origins)
        return np.full(n, INF), np.full(n, -INF)

    @property
    def area(self) -> float:
        return float(np.linalg.norm(np.cross(self.edge_u, self.edge_v)))

    def sample_area(self, u1, u2):
        points = self.corner + u1[:, None] * self.edge_u + u2[:, None] * self.edge_v
        normals = np.broadcast_to(self._normal, points.shape)
        return points, normals


@dataclass(frozen=True, eq=False)
class Box(Shape):
    """
    Axis-aligned box.

    Attributes:
        min: Minimum corner in m
        max: Maximum corner in m
    """

    min: np.ndarray
    max: np.ndarray
    closed = True

    def __post_init__(self):
        """Validate box configuration."""
        lo = np.asarray(self.min, dtype=np.float64)
        hi = np.asarray(self.max, dtype=np.float64)
        if lo.shape != (3,) or hi.shape != (3,):
            raise SceneValidationError("box", "min and max must have three components")
        if not np.all(lo < hi):
            raise SceneValidationError("box", "min must be below max componentwise")
        object.__setattr__(self, "min", lo)
        object.__setattr__(self, "max", hi)

    def interval(self, origins, directions):
        with np.errstate(divide="ignore", invalid="ignore"):
            inv = 1.0 / directions
            ta = (self.min - origins) * inv
            tb = (self.max - origins) * inv
        # Axis-parallel rays inside the slab are unbounded on that axis
        inside = (origins >= self.min) & (origins <= self.max)
        lo = np.where(directions == 0.0, np.where(inside, -INF, INF), np.minimum(ta, tb))
        hi = np.where(directions == 0.0, np.where(inside, INF, -INF), np.maximum(ta, tb))
        return lo.max(axis=-1), hi.min(axis=-1)

    def intersect(self, origins, directions):
        t0, t1 = self.interval(origins, directions)
        valid = t0 <= t1
        t = np.where(valid & (t0 > EPSILON), t0, np.where(valid & (t1 > EPSILON), t1, INF))
        points = origins + np.where(np.isfinite(t), t, 0.0)[:, None] * directions
        center = 0.5 * (self.min + self.max)
        half = 0.5 * (self.max - self.min)
        local = (points - center) / half
        axis = np.argmax(np.abs(local), axis=-1)
        normals = np.zeros_like(points)
        normals[np.arange(len(points)), axis] = np.sign(local[np.arange(len(points)), axis])
        return t, normals

    def contains(self, points):
        return np.all((points > self.min) & (points < self.max), axis=-1)

    @property
    def area(self) -> float:
        x, y, z = self.max - self.min
        return float(2.0 * (x * y + y * z + x * z))

    def sample_area(self, u1, u2):
        raise SceneValidationError("box", "boxes cannot be used as area lights")


def reflect(directions: np.ndarray, normals: np.ndarray) -> np.ndarray:
    """Mirror directions about normals."""
    return directions - 2.0 * _dot(directions, normals)[:, None] * normals


def refract(
    directions: np.ndarray, normals: np.ndarray, eta: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """
    Snell refraction through a face-forward normal.

    Args:
        directions: Incident unit directions
        normals: Normals facing against the incident directions
        eta: Ratio n_incident / n_transmitted per ray

    Returns:
        Tuple of (refracted directions, total-internal-reflection mask)
    """
    cos_i = -_dot(directions, normals)
    sin2_t = eta * eta * np.maximum(0.0, 1.0 - cos_i * cos_i)
    tir = sin2_t > 1.0
    cos_t = np.sqrt(np.maximum(0.0, 1.0 - sin2_t))
    refracted = eta[:, None] * directions + (eta * cos_i - cos_t)[:, None] * normals
    return normalize(refracted), tir
