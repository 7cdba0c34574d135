"""
Scene description for fluortrace.

This package provides shapes, surface materials, spectral area lights, the
pinhole camera, the Scene container with its ray queries, and the scene file
parser.
"""

from .geometry import Box, Quad, Shape, Sphere
from .materials import Emissive, GlossyPhong, Lambertian, Material, SmoothDielectric
from .camera import Camera
from .lights import Light
from .scene import Hit, HitBatch, Scene, SceneObject
from .parser import load_scene, parse_scene

__all__ = [
    "Box",
    "Camera",
    "Emissive",
    "GlossyPhong",
    "Hit",
    "HitBatch",
    "Lambertian",
    "Light",
    "Material",
    "Quad",
    "Scene",
    "SceneObject",
    "Shape",
    "SmoothDielectric",
    "Sphere",
    "load_scene",
    "parse_scene",
]
