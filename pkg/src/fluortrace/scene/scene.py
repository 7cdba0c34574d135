"""
Scene container and ray queries.

This module provides the Scene type that ties together the camera, lights,
surface objects and media, and answers nearest-hit and visibility queries
for batches of rays by a linear scan in declaration order.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..medium import Medium
from ..render.config import RenderConfig
from ..spectral import WavelengthGrid
from .camera import Camera
from .geometry import EPSILON, INF, Shape, normalize
from .lights import Light
from .materials import Emissive, Material, SmoothDielectric

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SceneObject:
    """
    A shape with a surface material.

    Attributes:
        shape: Geometry
        material: Surface material
        name: Identifier used in errors and logs
    """

    shape: Shape
    material: Material
    name: str = "object"

    @property
    def medium(self) -> Optional[int]:
        """Index of the interior medium, if the boundary encloses one."""
        if isinstance(self.material, SmoothDielectric):
            return self.material.medium
        return None


@dataclass(frozen=True)
class Hit:
    """
    Nearest intersection of a single ray.

    Attributes:
        t: Distance along the ray in m
        point: Hit point
        normal: Unit normal facing against the ray
        material: Surface material
        entering: Whether the ray enters the shape
        object_index: Index of the hit object in declaration order
    """

    t: float
    point: np.ndarray
    normal: np.ndarray
    material: Material
    entering: bool
    object_index: int


@dataclass
class HitBatch:
    """
    Nearest intersections of a batch of rays.

    Attributes:
        t: Distances, inf on miss
        points: Hit points
        normals: Unit normals facing against the rays
        entering: Whether each ray enters the hit shape
        object_index: Hit object index, -1 on miss
    """

    t: np.ndarray
    points: np.ndarray
    normals: np.ndarray
    entering: np.ndarray
    object_index: np.ndarray

    @property
    def hit(self) -> np.ndarray:
        return self.object_index >= 0


@dataclass(eq=False)
class Scene:
    """
    Complete, validated scene.

    Attributes:
        camera: Viewing camera
        lights: Area lights
        objects: Surface objects, lights included, in declaration order
        media: Participating media referenced by dielectric boundaries
        grid: Render wavelength grid every spectrum is tabulated on
        render: Render settings from the scene file
        name: Scene name
    """

    camera: Camera
    lights: List[Light]
    objects: List[SceneObject]
    media: List[Medium] = field(default_factory=list)
    grid: WavelengthGrid = field(default_factory=WavelengthGrid)
    render: RenderConfig = field(default_factory=RenderConfig)
    name: str = "scene"

    def __post_init__(self):
        """Index lights and media for batched queries."""
        self._refresh()

    def _refresh(self) -> None:
        n = self.grid.count
        self.sigma_t = (
            np.stack([m.sigma_t_table for m in self.media]) if self.media else np.zeros((0, n))
        )
        self.opaque = [obj.material.opaque for obj in self.objects]
        self.medium_objects = [
            (index, obj.medium) for index, obj in enumerate(self.objects) if obj.medium is not None
        ]

    def intersect_batch(self, origins: np.ndarray, directions: np.ndarray) -> HitBatch:
        """
        Nearest positive intersections for a batch of rays.

        Ties are broken by declaration order.

        Args:
            origins: Ray origins, shape (N, 3)
            directions: Unit directions, shape (N, 3)

        Returns:
            HitBatch
        """
        count = len(origins)
        best_t = np.full(count, INF)
        best_normal = np.zeros((count, 3))
        best_index = np.full(count, -1, dtype=np.int64)
        for index, obj in enumerate(self.objects):
            t, normals = obj.shape.intersect(origins, directions)
            closer = t < best_t
            if not np.any(closer):
                continue
            best_t = np.where(closer, t, best_t)
            best_normal = np.where(closer[:, None], normals, best_normal)
            best_index = np.where(closer, index, best_index)

        hit = best_index >= 0
        points = origins + np.where(hit, best_t, 0.0)[:, None] * directions
        cos = np.einsum("ij,ij->i", directions, best_normal)
        entering = cos < 0.0
        normals = np.where(entering[:, None], best_normal, -best_normal)
        return HitBatch(best_t, points, normals, entering & hit, best_index)

    def intersect(self, origin: np.ndarray, direction: np.ndarray) -> Optional[Hit]:
        """
        Nearest positive intersection of a single ray.

        Args:
            origin: Ray origin
            direction: Unit ray direction

        Returns:
            Hit, or None on miss
        """
        batch = self.intersect_batch(
            np.asarray(origin, dtype=np.float64)[None, :],
            np.asarray(direction, dtype=np.float64)[None, :],
        )
        if not batch.hit[0]:
            return None
        index = int(batch.object_index[0])
        return Hit(
            t=float(batch.t[0]),
            point=batch.points[0],
            normal=batch.normals[0],
            material=self.objects[index].material,
            entering=bool(batch.entering[0]),
            object_index=index,
        )

    def transmission_batch(
        self, a: np.ndarray, b: np.ndarray, wavelength_index: Optional[np.ndarray] = None
    ) -> np.ndarray:
        """
        Attenuated visibility between point pairs.

        Opaque surfaces strictly between the points block; medium-filled
        dielectric shapes attenuate by their transmittance along the chord.

        Args:
            a: Start points, shape (N, 3)
            b: End points, shape (N, 3)
            wavelength_index: Grid indices, or None for binary visibility

        Returns:
            Values in [0, 1] per pair
        """
        delta = b - a
        distance = np.linalg.norm(delta, axis=-1)
        result = np.ones(len(a))
        degenerate = distance <= 0.0
        directions = normalize(np.where(degenerate[:, None], np.array([0.0, 0.0, 1.0]), delta))
        limit = distance * (1.0 - 1e-7) - EPSILON

        for index, obj in enumerate(self.objects):
            if self.opaque[index]:
                t, _ = obj.shape.intersect(a, directions)
                result = np.where(t < limit, 0.0, result)
            elif wavelength_index is not None and obj.medium is not None:
                chord = obj.shape.chord(a, directions, distance)
                sigma_t = self.sigma_t[obj.medium][wavelength_index]
                result = result * np.exp(-sigma_t * chord)
        return np.where(degenerate, 1.0, result)

    def visible(self, a: np.ndarray, b: np.ndarray) -> bool:
        """Binary visibility; dielectric boundaries are transparent."""
        value = self.transmission_batch(
            np.asarray(a, dtype=np.float64)[None, :], np.asarray(b, dtype=np.float64)[None, :]
        )
        return bool(value[0] > 0.0)

    def attenuated_visibility(self, a: np.ndarray, b: np.ndarray, wavelength: float) -> float:
        """Visibility times the transmittance of every medium segment at a wavelength."""
        value = self.transmission_batch(
            np.asarray(a, dtype=np.float64)[None, :],
            np.asarray(b, dtype=np.float64)[None, :],
            np.array([self.grid.index_of(wavelength)]),
        )
        return float(value[0])

    def medium_at(self, points: np.ndarray) -> np.ndarray:
        """Index of the medium containing each point, -1 in vacuum."""
        result = np.full(len(points), -1, dtype=np.int64)
        for index, medium in self.medium_objects:
            inside = self.objects[index].shape.contains(points) & (result < 0)
            result = np.where(inside, medium, result)
        return result

    def light_index(self, object_index: np.ndarray) -> np.ndarray:
        """Light index of each hit object, -1 for non-emitters."""
        table = np.array(
            [obj.material.light if isinstance(obj.material, Emissive) else -1 for obj in self.objects]
            + [-1],
            dtype=np.int64,
        )
        return table[object_index]

    def with_lights(self, lights: List[Light]) -> "Scene":
        """
        Copy of the scene with its lights replaced.

        Emitter objects are rebuilt in place of the previous ones.
        """
        objects = [obj for obj in self.objects if not isinstance(obj.material, Emissive)]
        objects += [
            SceneObject(light.shape, Emissive(index), light.name) for index, light in enumerate(lights)
        ]
        return Scene(
            camera=self.camera,
            lights=list(lights),
            objects=objects,
            media=self.media,
            grid=self.grid,
            render=self.render,
            name=self.name,
        )

    def with_media(self, media: List[Medium]) -> "Scene":
        """Copy of the scene with its media replaced (same count and order)."""
        return Scene(
            camera=self.camera,
            lights=self.lights,
            objects=self.objects,
            media=list(media),
            grid=self.grid,
            render=self.render,
            name=self.name,
        )

    def on_grid(self, grid: WavelengthGrid) -> "Scene":
        """
        Copy of the scene whose media and lights are tabulated on another grid.

        Monochromatic lights keep their radiance; lights with no emission
        left on the new grid are removed.
        """
        if grid == self.grid:
            return self
        lights = [light.on_grid(grid) for light in self.lights]
        scene = Scene(
            camera=self.camera,
            lights=lights if all(lights) else self.lights,
            objects=self.objects,
            media=[m.on_grid(grid) for m in self.media],
            grid=grid,
            render=self.render,
            name=self.name,
        )
        if all(lights):
            return scene
        for light, moved in zip(self.lights, lights):
            if moved is None:
                logger.warning(
                    f"Light '{light.name}' emits nothing on the grid "
                    f"{grid.lambda_min:g}-{grid.lambda_max:g} nm and was removed"
                )
        return scene.with_lights([light for light in lights if light is not None])

    def __repr__(self) -> str:
        """String representation of the scene."""
        return (
            f"Scene(name='{self.name}', objects={len(self.objects)}, "
            f"lights={len(self.lights)}, media={len(self.media)})"
        )
