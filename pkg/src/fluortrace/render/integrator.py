"""
Fluorescence path tracing.

This module implements the camera-first spectral path tracer. Each path
carries one emission wavelength from the camera and is valid only if it
contains exactly one inelastic (fluorescent) event. At that event a light
point and an excitation wavelength are sampled and the attenuated light
contribution is converted to the carried wavelength through the
excitation-to-emission function.

Free flights inside a medium are tracked with a coefficient that bounds both
the extinction at the carried wavelength and the fluorescent absorption at
any excitation wavelength; the difference is handled as null collisions.
When no null collisions are needed the event probabilities reduce to the
coefficient ratios of ``classify_event``.

Paths are traced in batches (structure of arrays). Every random number is a
hash of the path's stream key and its own step counter, so a path's result
does not depend on the batch it is traced in.
"""

import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import TYPE_CHECKING, Optional

import numpy as np

from ..medium import Medium
from ..medium.phase import INV_4PI, phase_eval, sample_cos_theta, sample_isotropic, spherical_direction, to_world
from ..scene.camera import Camera
from ..scene.geometry import reflect, refract
from ..scene.materials import Emissive, GlossyPhong, Lambertian, SmoothDielectric
from ..spectral import regrid, resample
from .config import RenderConfig
from .sampler import path_keys, step_dimension, uniform

if TYPE_CHECKING:
    from ..scene.scene import Scene

logger = logging.getLogger(__name__)

KIND_LAMBERTIAN = 0
KIND_PHONG = 1
KIND_DIELECTRIC = 2
KIND_EMISSIVE = 3

# Random-number slots within a path step
SLOT_DISTANCE = 0
SLOT_LIGHT = 1
SLOT_EXCITATION = 2
SLOT_EVENT = 3
SLOT_LIGHT_U = 4
SLOT_LIGHT_V = 5
SLOT_DIRECTION_U = 6
SLOT_DIRECTION_V = 7

# Guards against paths trapped between dielectric boundaries
EXTRA_STEPS = 64


@dataclass
class PathState:
    """
    Batched random-walk state, one entry per path.

    Attributes:
        position: Current vertex, shape (N, 3)
        direction: Unit propagation direction, shape (N, 3)
        wavelength: Carried emission wavelength as a grid index
        transport: Wavelength index currently transported (differs after an
            emission when walks continue at the excitation wavelength)
        throughput: Path throughput so far
        bounces: Scattering vertices so far
        inelastic_events: Fluorescent events so far (0 or 1)
        alive: Whether the path is still being traced
        medium: Index of the enclosing medium, -1 in vacuum
        light_sampled: Whether the previous vertex already sampled the lights
    """

    position: np.ndarray
    direction: np.ndarray
    wavelength: np.ndarray
    transport: np.ndarray
    throughput: np.ndarray
    bounces: np.ndarray
    inelastic_events: np.ndarray
    alive: np.ndarray
    medium: np.ndarray
    light_sampled: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.light_sampled is None:
            self.light_sampled = np.zeros(len(self.throughput), dtype=bool)

    def check_invariants(self) -> None:
        """
        Assert the path-validity invariants.

        Raises:
            AssertionError: If a path has more than one inelastic event or a
                negative or non-finite throughput
        """
        assert np.all(self.inelastic_events <= 1), "path with more than one inelastic event"
        assert np.all(np.isfinite(self.throughput)), "non-finite throughput"
        assert np.all(self.throughput >= 0.0), "negative throughput"


@dataclass
class PathBatchResult:
    """
    Per-path outcome of a traced batch.

    Attributes:
        contribution: Radiance estimate at the carried wavelength
        inelastic_events: Inelastic events on each path
        bounces: Scattering vertices on each path
    """

    contribution: np.ndarray
    inelastic_events: np.ndarray
    bounces: np.ndarray


class TransportTables:
    """
    Scene quantities tabulated on the render grid for batched lookups.

    Built once per (scene, config) pair and shared read-only by workers.
    """

    def __init__(self, scene: "Scene", config: RenderConfig):
        self.scene = scene
        self.config = config
        grid = config.grid
        self.grid = grid
        self.step = grid.step
        n = grid.count

        media = scene.media
        self.media = media
        n_media = max(len(media), 1)
        n_dyes = max([len(m.fluorophores) for m in media] + [1])

        self.sigma_t = np.zeros((n_media, n))
        self.sigma_s = np.zeros((n_media, n))
        self.dye_emission = np.zeros((n_media, n_dyes, n))
        self.emission_density = np.zeros((n_media, n_dyes, n))
        self.phase_g = np.zeros(n_media)
        for i, m in enumerate(media):
            self.sigma_t[i] = m.sigma_t_table
            self.sigma_s[i] = m.sigma_s_bg.values
            self.phase_g[i] = m.phase_g
            k = len(m.fluorophores)
            if k:
                self.dye_emission[i, :k] = m.sigma_a_fluor * m.quantum_yields[:, None]
                self.emission_density[i, :k] = m.emission_weights / self.step
        self.sigma_fl = self.dye_emission.sum(axis=1)

        lights = scene.lights
        self.lights = lights
        n_lights = len(lights)
        self.light_spd = np.array(
            [regrid(light.spd, grid).values for light in lights]
        ).reshape(n_lights, n)
        # Excitation wavelengths are only drawn where some light emits
        emitting = self.light_spd.sum(axis=0) > 0.0
        self.sigma_fl_max = np.where(emitting[None, :], self.sigma_fl, 0.0).max(axis=1)
        self.light_area = np.array([light.area for light in lights])
        self._build_light_selection(n_media, n)

        objects = scene.objects
        self.kind = np.array([self._kind(obj.material) for obj in objects] + [-1], dtype=np.int64)
        self.reflectance = np.zeros((len(objects) + 1, n))
        self.exponent = np.ones(len(objects) + 1)
        self.ior = np.ones(len(objects) + 1)
        self.refracts = np.zeros(len(objects) + 1, dtype=bool)
        self.object_medium = np.full(len(objects) + 1, -1, dtype=np.int64)
        self.object_light = np.full(len(objects) + 1, -1, dtype=np.int64)
        for i, obj in enumerate(objects):
            material = obj.material
            if isinstance(material, (Lambertian, GlossyPhong)):
                self.reflectance[i] = resample(material.reflectance, grid).values
            if isinstance(material, GlossyPhong):
                self.exponent[i] = material.exponent
            if isinstance(material, SmoothDielectric):
                self.ior[i] = material.ior
                self.refracts[i] = material.refract
                self.object_medium[i] = -1 if material.medium is None else material.medium
            if isinstance(material, Emissive):
                self.object_light[i] = material.light

    @staticmethod
    def _kind(material) -> int:
        if isinstance(material, Lambertian):
            return KIND_LAMBERTIAN
        if isinstance(material, GlossyPhong):
            return KIND_PHONG
        if isinstance(material, SmoothDielectric):
            return KIND_DIELECTRIC
        return KIND_EMISSIVE

    def _build_light_selection(self, n_media: int, n: int) -> None:
        n_lights = len(self.lights)
        if n_lights == 0:
            return
        spd = self.light_spd
        power = self.light_area * spd.sum(axis=1)

        # Light choice and excitation wavelength per medium, by excitation power
        self.light_probability = np.zeros((n_media, n_lights))
        excitation_weights = np.zeros((n_lights, n_media, n))
        for m in range(n_media):
            weights = spd * self.sigma_fl[m][None, :]
            excite = self.light_area * weights.sum(axis=1)
            if excite.sum() > 0.0:
                self.light_probability[m] = excite / excite.sum()
            elif power.sum() > 0.0:
                self.light_probability[m] = power / power.sum()
            else:
                self.light_probability[m] = 1.0 / n_lights
            for l in range(n_lights):
                excitation_weights[l, m] = weights[l] if excite[l] > 0.0 else spd[l]
        self.excitation_weights = excitation_weights
        totals = excitation_weights.sum(axis=2, keepdims=True)
        conditional = np.divide(
            excitation_weights, totals, out=np.zeros_like(excitation_weights), where=totals > 0
        )
        # Excitation-wavelength probability marginalized over the light choice
        self.excitation_marginal = np.einsum("ml,lmn->mn", self.light_probability, conditional)
        self._excitation_cdf = _row_cdf(excitation_weights.reshape(n_lights * n_media, n))
        self._medium_light_cdf = _row_cdf(self.light_probability)

        # Light choice for elastic vertices at the transported wavelength
        by_wavelength = (self.light_area[:, None] * spd).T
        self.nee_weight = by_wavelength
        self._nee_cdf = _row_cdf(by_wavelength)

    def pick_light_for_medium(self, medium: np.ndarray, u: np.ndarray):
        index = _sample_rows(self._medium_light_cdf, medium, u, len(self.lights))
        return index, self.light_probability[medium, index]

    def pick_excitation(self, light: np.ndarray, medium: np.ndarray, u: np.ndarray):
        n_media = self.light_probability.shape[0]
        row = light * n_media + medium
        index = _sample_rows(self._excitation_cdf, row, u, self.grid.count)
        weights = self.excitation_weights[light, medium]
        totals = weights.sum(axis=1)
        probability = np.divide(
            weights[np.arange(len(index)), index], totals, out=np.zeros(len(index)), where=totals > 0
        )
        return index, probability

    def pick_light_at_wavelength(self, wavelength: np.ndarray, u: np.ndarray):
        weights = self.nee_weight[wavelength]
        totals = weights.sum(axis=1)
        index = _sample_rows(self._nee_cdf, wavelength, u, len(self.lights))
        probability = np.divide(
            weights[np.arange(len(index)), index], totals, out=np.zeros(len(index)), where=totals > 0
        )
        return index, probability


def _row_cdf(weights: np.ndarray) -> np.ndarray:
    """Per-row normalized CDFs offset by the row index and flattened."""
    totals = weights.sum(axis=1, keepdims=True)
    cdf = np.divide(
        np.cumsum(weights, axis=1), totals, out=np.zeros_like(weights), where=totals > 0
    )
    rows = np.arange(weights.shape[0])[:, None]
    return (cdf + rows).ravel()


def _sample_rows(flat_cdf: np.ndarray, row: np.ndarray, u: np.ndarray, width: int) -> np.ndarray:
    """Sample a column per path from the CDF of its row."""
    position = np.searchsorted(flat_cdf, row + u, side="right")
    return np.clip(position - row * width, 0, width - 1)


class PathTracer:
    """
    Batched fluorescence path tracer for one scene and configuration.
    """

    def __init__(self, scene: "Scene", config: Optional[RenderConfig] = None, camera: Optional[Camera] = None):
        """
        Initialize the tracer.

        Args:
            scene: Validated scene
            config: Render configuration; the scene's settings if None
            camera: Camera override (e.g. a resized film)
        """
        self.config = config or scene.render
        self.scene = scene.on_grid(self.config.grid)
        self.camera = camera or scene.camera
        self.max_steps = 4 * self.config.max_bounces + EXTRA_STEPS

    @cached_property
    def tables(self) -> TransportTables:
        return TransportTables(self.scene, self.config)

    def trace(self, pixel: np.ndarray, sample: np.ndarray, wavelength: np.ndarray) -> PathBatchResult:
        """
        Trace a batch of camera paths.

        Args:
            pixel: Linear pixel indices
            sample: Sample indices within the pixels
            wavelength: Carried emission wavelengths as grid indices

        Returns:
            PathBatchResult with one entry per path
        """
        pixel = np.asarray(pixel, dtype=np.int64)
        sample = np.asarray(sample, dtype=np.int64)
        wavelength = np.asarray(wavelength, dtype=np.int64)
        count = len(pixel)
        contribution = np.zeros(count)

        keys = path_keys(
            self.config.seed, pixel, sample, wavelength, self.config.correlated_wavelengths
        )
        origins, directions = self.camera.generate_rays(
            pixel, uniform(keys, 0), uniform(keys, 1)
        )
        state = PathState(
            position=origins,
            direction=directions,
            wavelength=wavelength.copy(),
            transport=wavelength.copy(),
            throughput=np.ones(count),
            bounces=np.zeros(count, dtype=np.int64),
            inelastic_events=np.zeros(count, dtype=np.int64),
            alive=np.ones(count, dtype=bool),
            medium=self.scene.medium_at(origins),
        )

        if not self.scene.lights:
            return PathBatchResult(contribution, state.inelastic_events, state.bounces)

        for step in range(self.max_steps):
            active = np.nonzero(state.alive)[0]
            if active.size == 0:
                break
            self._step(state, active, keys[active], step, contribution)

        return PathBatchResult(contribution, state.inelastic_events, state.bounces)

    def _step(self, state: PathState, active: np.ndarray, keys: np.ndarray, step: int, contribution: np.ndarray) -> None:
        tables = self.tables
        origins = state.position[active]
        directions = state.direction[active]
        medium = state.medium[active]
        transport = state.transport[active]
        emitted = state.inelastic_events[active] > 0

        hits = self.scene.intersect_batch(origins, directions)

        inside = medium >= 0
        m = np.where(inside, medium, 0)
        sigma_t = np.where(inside, tables.sigma_t[m, transport], 0.0)
        sigma_d = np.where(emitted, sigma_t, np.maximum(sigma_t, tables.sigma_fl_max[m]))
        sigma_d = np.where(inside, sigma_d, 0.0)
        u = uniform(keys, step_dimension(step, SLOT_DISTANCE))
        with np.errstate(divide="ignore"):
            t_flight = np.where(sigma_d > 0.0, -np.log1p(-u) / np.where(sigma_d > 0.0, sigma_d, 1.0), np.inf)
        collide = inside & (t_flight < hits.t)

        c = np.nonzero(collide)[0]
        if c.size:
            points = origins[c] + t_flight[c, None] * directions[c]
            self._collide(state, active[c], keys[c], step, points, directions[c], sigma_d[c], contribution)

        s = np.nonzero(~collide & np.isfinite(hits.t))[0]
        if s.size:
            self._surface(state, active[s], keys[s], step, hits, s, directions[s], contribution)

        escaped = ~collide & ~np.isfinite(hits.t)
        state.alive[active[escaped]] = False

    def _collide(self, state, idx, keys, step, points, directions, sigma_d, contribution):
        exhausted = state.bounces[idx] >= self.config.max_bounces
        state.alive[idx[exhausted]] = False
        keep = ~exhausted
        idx, keys, points, directions, sigma_d = idx[keep], keys[keep], points[keep], directions[keep], sigma_d[keep]
        if idx.size == 0:
            return

        emitted = state.inelastic_events[idx] > 0
        first = np.nonzero(~emitted)[0]
        if first.size:
            self._collide_fluorescent(
                state, idx[first], keys[first], step, points[first], directions[first], sigma_d[first], contribution
            )
        later = np.nonzero(emitted)[0]
        if later.size:
            self._collide_after_emission(
                state, idx[later], keys[later], step, points[later], directions[later], contribution
            )

    def _collide_fluorescent(self, state, idx, keys, step, points, directions, sigma_d, contribution):
        """Collision of a path that has not yet undergone an inelastic event."""
        tables = self.tables
        m = state.medium[idx]
        lam = state.wavelength[idx]

        light, p_light = tables.pick_light_for_medium(m, uniform(keys, step_dimension(step, SLOT_LIGHT)))
        lam_x, p_lam_x = tables.pick_excitation(light, m, uniform(keys, step_dimension(step, SLOT_EXCITATION)))

        sigma_t = tables.sigma_t[m, lam]
        sigma_s = tables.sigma_s[m, lam]
        dye = tables.dye_emission[m, :, lam_x]
        weights = np.column_stack([sigma_d - sigma_t, sigma_s, dye])
        total = weights.sum(axis=1)
        norm = np.maximum(total, sigma_d)
        event_weight = norm / sigma_d

        cumulative = np.cumsum(weights, axis=1) / norm[:, None]
        u_event = uniform(keys, step_dimension(step, SLOT_EVENT))
        column = np.sum(cumulative <= u_event[:, None], axis=1)

        throughput = state.throughput[idx] * event_weight

        null = column == 0
        state.position[idx[null]] = points[null]
        state.throughput[idx[null]] = throughput[null]

        elastic = column == 1
        if np.any(elastic):
            e = np.nonzero(elastic)[0]
            self._scatter(state, idx[e], keys[e], step, points[e], directions[e], throughput[e])

        n_dyes = dye.shape[1]
        fluorescent = (column >= 2) & (column < 2 + n_dyes)
        if np.any(fluorescent):
            f = np.nonzero(fluorescent)[0]
            k = column[f] - 2
            emission = throughput[f] * tables.emission_density[m[f], k, lam[f]] * tables.step
            direct = self._light_sample(
                keys[f], step, points[f], light[f], p_light[f], lam_x[f]
            )
            contribution[idx[f]] += np.divide(
                emission * direct * INV_4PI, p_lam_x[f], out=np.zeros(f.size), where=p_lam_x[f] > 0
            )
            state.inelastic_events[idx[f]] = 1

            if self.config.continue_after_emission:
                marginal = tables.excitation_marginal[m[f], lam_x[f]]
                state.transport[idx[f]] = lam_x[f]
                state.throughput[idx[f]] = np.divide(
                    emission, marginal, out=np.zeros(f.size), where=marginal > 0
                )
                state.position[idx[f]] = points[f]
                state.direction[idx[f]] = sample_isotropic(
                    uniform(keys[f], step_dimension(step, SLOT_DIRECTION_U)),
                    uniform(keys[f], step_dimension(step, SLOT_DIRECTION_V)),
                )
                state.bounces[idx[f]] += 1
                state.light_sampled[idx[f]] = True
            else:
                state.alive[idx[f]] = False

        absorbed = column >= 2 + n_dyes
        state.alive[idx[absorbed]] = False

    def _collide_after_emission(self, state, idx, keys, step, points, directions, contribution):
        """Elastic-only continuation at the excitation wavelength."""
        tables = self.tables
        m = state.medium[idx]
        lam = state.transport[idx]
        sigma_t = tables.sigma_t[m, lam]
        p_elastic = tables.sigma_s[m, lam] / sigma_t
        u_event = uniform(keys, step_dimension(step, SLOT_EVENT))
        elastic = u_event < p_elastic
        # A second inelastic event or an absorption ends the path without contribution
        state.alive[idx[~elastic]] = False
        if not np.any(elastic):
            return

        e = np.nonzero(elastic)[0]
        idx, keys, points, directions, m, lam = idx[e], keys[e], points[e], directions[e], m[e], lam[e]

        light, p_light = tables.pick_light_at_wavelength(lam, uniform(keys, step_dimension(step, SLOT_LIGHT)))
        valid = p_light > 0.0
        if np.any(valid):
            v = np.nonzero(valid)[0]
            direct, to_light = self._light_sample(
                keys[v], step, points[v], light[v], p_light[v], lam[v], return_directions=True
            )
            cos_theta = np.einsum("ij,ij->i", directions[v], to_light)
            phase = phase_eval(tables.phase_g[m[v]], cos_theta)
            contribution[idx[v]] += state.throughput[idx[v]] * phase * direct
        state.light_sampled[idx] = True
        self._scatter(state, idx, keys, step, points, directions, state.throughput[idx], keep_light_flag=True)

    def _scatter(self, state, idx, keys, step, points, directions, throughput, keep_light_flag=False):
        g = self.tables.phase_g[state.medium[idx]]
        cos_theta = sample_cos_theta(g, uniform(keys, step_dimension(step, SLOT_DIRECTION_U)))
        phi = 2.0 * np.pi * uniform(keys, step_dimension(step, SLOT_DIRECTION_V))
        state.direction[idx] = to_world(spherical_direction(cos_theta, phi), directions)
        state.position[idx] = points
        state.throughput[idx] = throughput
        state.bounces[idx] += 1
        if not keep_light_flag:
            state.light_sampled[idx] = False

    def _light_sample(self, keys, step, points, light, p_light, wavelength, return_directions=False):
        """
        Attenuated direct radiance from sampled light points, divided by the
        point pdf (area pdf times light choice probability over the emitter
        cosine) with the bare inverse-square geometric term.
        """
        tables = self.tables
        count = len(points)
        u1 = uniform(keys, step_dimension(step, SLOT_LIGHT_U))
        u2 = uniform(keys, step_dimension(step, SLOT_LIGHT_V))
        targets = np.zeros((count, 3))
        normals = np.zeros((count, 3))
        pdf_area = np.zeros(count)
        for index, source in enumerate(tables.lights):
            chosen = np.nonzero(light == index)[0]
            if chosen.size == 0:
                continue
            p, nrm, pdf = source.sample(u1[chosen], u2[chosen])
            targets[chosen] = p
            normals[chosen] = nrm
            pdf_area[chosen] = pdf

        offset = targets - points
        distance2 = np.einsum("ij,ij->i", offset, offset)
        distance = np.sqrt(distance2)
        safe = np.where(distance > 0.0, distance, 1.0)
        to_light = offset / safe[:, None]

        cos_light = np.zeros(count)
        for index, source in enumerate(tables.lights):
            chosen = np.nonzero(light == index)[0]
            if chosen.size:
                cos_light[chosen] = source.emission_cosine(normals[chosen], -to_light[chosen])

        radiance = tables.light_spd[light, wavelength]
        visibility = self.scene.transmission_batch(points, targets, wavelength)
        denominator = distance2 * pdf_area * p_light
        value = np.divide(
            radiance * visibility * cos_light,
            denominator,
            out=np.zeros(count),
            where=(denominator > 0.0) & (distance > 0.0),
        )
        if return_directions:
            return value, to_light
        return value

    def _surface(self, state, idx, keys, step, hits, s, directions, contribution):
        tables = self.tables
        obj = hits.object_index[s]
        points = hits.points[s]
        normals = hits.normals[s]
        entering = hits.entering[s]
        kind = tables.kind[obj]

        emitter = kind == KIND_EMISSIVE
        if np.any(emitter):
            e = np.nonzero(emitter)[0]
            self._hit_light(state, idx[e], obj[e], directions[e], normals[e], entering[e], contribution)

        dielectric = np.nonzero(kind == KIND_DIELECTRIC)[0]
        if dielectric.size:
            self._cross(state, idx[dielectric], obj[dielectric], points[dielectric], directions[dielectric],
                        normals[dielectric], entering[dielectric])

        reflective = np.nonzero((kind == KIND_LAMBERTIAN) | (kind == KIND_PHONG))[0]
        if reflective.size:
            self._reflect(state, idx[reflective], keys[reflective], step, obj[reflective], points[reflective],
                          directions[reflective], normals[reflective])

    def _hit_light(self, state, idx, obj, directions, normals, entering, contribution):
        tables = self.tables
        light = tables.object_light[obj]
        emitted = state.inelastic_events[idx] > 0
        counts = np.where(emitted, ~state.light_sampled[idx], self.config.elastic_component)
        if np.any(counts):
            c = np.nonzero(counts)[0]
            # Outward normal of the emitter at the hit point
            outward = np.where(entering[c, None], normals[c], -normals[c])
            cos_out = np.zeros(c.size)
            for index, source in enumerate(tables.lights):
                chosen = np.nonzero(light[c] == index)[0]
                if chosen.size:
                    cos_out[chosen] = source.emission_cosine(outward[chosen], -directions[c][chosen])
            radiance = tables.light_spd[light[c], state.transport[idx[c]]]
            contribution[idx[c]] += state.throughput[idx[c]] * radiance * (cos_out > 0.0)
        state.alive[idx] = False

    def _cross(self, state, idx, obj, points, directions, normals, entering):
        tables = self.tables
        inner = tables.object_medium[obj]
        new_medium = np.where(entering, inner, -1)
        new_directions = directions.copy()

        refracting = tables.refracts[obj]
        if np.any(refracting):
            r = np.nonzero(refracting)[0]
            eta = np.where(entering[r], 1.0 / tables.ior[obj[r]], tables.ior[obj[r]])
            bent, tir = refract(directions[r], normals[r], eta)
            mirrored = reflect(directions[r], normals[r])
            new_directions[r] = np.where(tir[:, None], mirrored, bent)
            new_medium[r] = np.where(tir, state.medium[idx[r]], new_medium[r])

        state.position[idx] = points
        state.direction[idx] = new_directions
        state.medium[idx] = new_medium

    def _reflect(self, state, idx, keys, step, obj, points, directions, normals):
        tables = self.tables
        exhausted = state.bounces[idx] >= self.config.max_bounces
        state.alive[idx[exhausted]] = False
        keep = np.nonzero(~exhausted)[0]
        if keep.size == 0:
            return
        idx, keys, obj, points, directions, normals = (
            idx[keep], keys[keep], obj[keep], points[keep], directions[keep], normals[keep]
        )
        u1 = uniform(keys, step_dimension(step, SLOT_DIRECTION_U))
        u2 = uniform(keys, step_dimension(step, SLOT_DIRECTION_V))
        albedo = tables.reflectance[obj, state.transport[idx]]
        phi = 2.0 * np.pi * u2

        diffuse = tables.kind[obj] == KIND_LAMBERTIAN
        # Cosine-weighted hemisphere around the normal
        cos_diffuse = np.sqrt(1.0 - u1)
        diffuse_dirs = to_world(spherical_direction(cos_diffuse, phi), normals)
        weight = albedo.copy()

        exponent = tables.exponent[obj]
        cos_lobe = np.power(u1, 1.0 / (exponent + 1.0))
        mirror = reflect(directions, normals)
        glossy_dirs = to_world(spherical_direction(cos_lobe, phi), mirror)
        cos_glossy = np.einsum("ij,ij->i", glossy_dirs, normals)
        glossy_weight = albedo * (exponent + 2.0) / (exponent + 1.0) * np.maximum(cos_glossy, 0.0)

        new_dirs = np.where(diffuse[:, None], diffuse_dirs, glossy_dirs)
        weight = np.where(diffuse, weight, glossy_weight)
        below = ~diffuse & (cos_glossy <= 0.0)

        state.position[idx] = points
        state.direction[idx] = new_dirs
        state.throughput[idx] *= weight
        state.bounces[idx] += 1
        state.light_sampled[idx] = False
        state.alive[idx[below | (weight <= 0.0)]] = False


def trace_paths(
    scene: "Scene",
    pixel: np.ndarray,
    sample: np.ndarray,
    wavelength: np.ndarray,
    config: Optional[RenderConfig] = None,
    camera: Optional[Camera] = None,
) -> PathBatchResult:
    """
    Trace a batch of camera paths.

    Args:
        scene: Validated scene
        pixel: Linear pixel indices
        sample: Sample indices within the pixels
        wavelength: Carried emission wavelengths as grid indices
        config: Render configuration; the scene's settings if None
        camera: Camera override

    Returns:
        PathBatchResult with per-path contributions and event counts
    """
    return PathTracer(scene, config, camera).trace(pixel, sample, wavelength)


def trace_path(
    scene: "Scene",
    pixel: int,
    wavelength: float,
    sample: int = 0,
    config: Optional[RenderConfig] = None,
) -> float:
    """
    Radiance estimate of a single camera path at one wavelength.

    The random stream is derived from (seed, pixel, sample, wavelength).

    Args:
        scene: Validated scene
        pixel: Linear pixel index
        wavelength: Emission wavelength in nm (snapped to the render grid)
        sample: Sample index within the pixel
        config: Render configuration; the scene's settings if None

    Returns:
        Non-negative, finite contribution
    """
    config = config or scene.render
    index = config.grid.index_of(wavelength)
    result = trace_paths(
        scene, np.array([pixel]), np.array([sample]), np.array([index]), config
    )
    return float(result.contribution[0])


def elastic_weight(m: Medium, wavelength: float, distance: float, cos_theta: float) -> float:
    """
    Explicit throughput factor of an elastic medium vertex under analog sampling.

    Evaluates F * V / (p(omega) * p(t)) with F = sigma_s * phase, V the
    transmittance over the sampled distance, p(omega) the phase-function
    density and p(t) the free-flight density; this equals the albedo.

    Args:
        m: Medium
        wavelength: Wavelength in nm
        distance: Sampled free-flight distance in m
        cos_theta: Cosine of the sampled scattering angle

    Returns:
        Throughput factor
    """
    sigma_t = m.sigma_t(wavelength)
    sigma_s = m.sigma_s(wavelength)
    phase = phase_eval(m.phase_g, cos_theta)
    transmittance = np.exp(-sigma_t * distance)
    pdf_direction = phase
    pdf_distance = sigma_t * np.exp(-sigma_t * distance)
    return float(sigma_s * phase * transmittance / (pdf_direction * pdf_distance))
