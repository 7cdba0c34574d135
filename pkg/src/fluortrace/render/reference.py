"""
Single-scatter fluorescence reference by numerical quadrature.

This module integrates the radiance reaching a camera ray after exactly one
fluorescent event inside a homogeneous slab lit by one quad light. It is a
deterministic oracle for the path tracer configured with a single
scattering vertex.
"""

import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from ..errors import NonConvergentError, SceneValidationError
from ..medium import Medium
from ..medium.phase import INV_4PI
from ..scene.geometry import Shape, Quad, normalize
from ..scene.lights import Light
from ..spectral import regrid

logger = logging.getLogger(__name__)

DEFAULT_RELATIVE_TOLERANCE = 0.005
MIN_POINTS = 8
MAX_POINTS = 128

CameraRay = Tuple[np.ndarray, np.ndarray]


@dataclass(frozen=True, eq=False)
class Slab:
    """
    Closed shape filled with a homogeneous medium.

    Attributes:
        shape: Closed boundary (e.g. a box)
        medium: Interior medium
    """

    shape: Shape
    medium: Medium


def _gauss_legendre(count: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    nodes, weights = np.polynomial.legendre.leggauss(count)
    half = 0.5 * (b - a)
    return half * nodes + 0.5 * (a + b), half * weights


def _estimate(slab: Slab, light: Light, origin: np.ndarray, direction: np.ndarray,
              t_range: Tuple[float, float], lam_index: int, count: int) -> float:
    m = slab.medium
    grid = m.grid
    spd = regrid(light.spd, grid).values
    active = np.nonzero(spd > 0.0)[0]

    t_nodes, t_weights = _gauss_legendre(count, *t_range)
    u_nodes, u_weights = _gauss_legendre(count, 0.0, 1.0)
    uu, vv = np.meshgrid(u_nodes, u_nodes, indexing="ij")
    area_weights = (u_weights[:, None] * u_weights[None, :]).ravel() * light.area
    targets, normals, _ = light.sample(uu.ravel(), vv.ravel())

    points = origin + t_nodes[:, None] * direction
    offsets = targets[None, :, :] - points[:, None, :]
    distance2 = np.einsum("ijk,ijk->ij", offsets, offsets)
    distance = np.sqrt(distance2)
    to_light = offsets / distance[..., None]
    cos_light = light.emission_cosine(
        np.broadcast_to(normals, offsets.shape).reshape(-1, 3), -to_light.reshape(-1, 3)
    ).reshape(distance.shape)
    chord = slab.shape.chord(
        np.repeat(points, len(targets), axis=0), to_light.reshape(-1, 3), distance.ravel()
    ).reshape(distance.shape)
    geometry = area_weights[None, :] * cos_light / distance2

    # Excitation spectrum weighted by each dye's emission density at the observed wavelength
    emission = m.emission_weights[:, lam_index] / grid.step
    excitation = (m.sigma_a_fluor * m.quantum_yields[:, None] * emission[:, None]).sum(axis=0)

    source = np.zeros(count)
    for j in active:
        if excitation[j] <= 0.0:
            continue
        transmit = np.exp(-m.sigma_t_table[j] * chord)
        source += spd[j] * grid.step * excitation[j] * (geometry * transmit).sum(axis=1)

    camera_transmittance = np.exp(-m.sigma_t_table[lam_index] * (t_nodes - t_range[0]))
    return float(np.sum(t_weights * camera_transmittance * source) * INV_4PI)


def single_scatter_reference(
    slab: Slab,
    light: Light,
    camera_ray: CameraRay,
    wavelength: float,
    rel_tol: float = DEFAULT_RELATIVE_TOLERANCE,
    max_points: int = MAX_POINTS,
) -> float:
    """
    Radiance along a camera ray from a single fluorescent event in a slab.

    Integrates over the camera segment inside the slab, the light area and
    the light's grid wavelengths with Gauss-Legendre rules, doubling the
    node count until the relative change falls below the tolerance.

    Args:
        slab: Homogeneous fluorescent slab
        light: Quad light outside the slab
        camera_ray: (origin, direction) of the camera ray, origin outside the slab
        wavelength: Observed emission wavelength in nm
        rel_tol: Relative change accepted between successive refinements
        max_points: Largest node count per dimension

    Returns:
        Spectral radiance per nm at the observed wavelength

    Raises:
        SceneValidationError: If the light is not a quad
        NonConvergentError: If the estimate is still changing at max_points
    """
    if not isinstance(light.shape, Quad):
        raise SceneValidationError(light.name, "the single-scatter reference supports quad lights only")
    m = slab.medium
    if not m.is_fluorescent or float(m.sigma_a_fluor.max()) <= 0.0:
        return 0.0

    origin = np.asarray(camera_ray[0], dtype=np.float64)
    direction = normalize(np.asarray(camera_ray[1], dtype=np.float64))
    t0, t1 = slab.shape.interval(origin[None, :], direction[None, :])
    t_range = (max(float(t0[0]), 0.0), float(t1[0]))
    if t_range[1] <= t_range[0]:
        return 0.0

    lam_index = m.grid.index_of(wavelength)
    count = MIN_POINTS
    change = float("inf")
    previous = _estimate(slab, light, origin, direction, t_range, lam_index, count)
    while True:
        count *= 2
        if count > max_points:
            raise NonConvergentError(
                f"Single-scatter quadrature did not converge with {max_points} points", change
            )
        current = _estimate(slab, light, origin, direction, t_range, lam_index, count)
        change = abs(current - previous) / abs(current) if current != 0.0 else 0.0
        logger.debug(f"Quadrature with {count} points: {current:.6g} (relative change {change:.2e})")
        if change <= rel_tol:
            return current
        previous = current
