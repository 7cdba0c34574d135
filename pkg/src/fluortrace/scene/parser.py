"""
Scene file parsing.

Scene files are YAML documents (JSON is accepted too) with the top-level keys
``camera``, ``lights``, ``shapes``, ``media``, ``fluorophore_db`` and
``render``. Distances are in meters, wavelengths in nm and dye
concentrations in g/L.

Spectra may be written as a constant number or as a mapping with one of the
keys ``monochromatic`` (with ``radiance``), ``table``, ``csv``, ``gaussian``,
``water`` or ``dye_excitation_peak`` (with ``radiance``).
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import yaml

from ..errors import (
    FluorTraceError,
    InvalidGridError,
    RenderConfigError,
    SceneParseError,
    SceneValidationError,
    SpectrumFileError,
    UnknownFluorophoreError,
)
from ..fluorophore import DissolvedFluorophore, FluorophoreDatabase
from ..medium import Medium, water_scattering
from ..render.config import RenderConfig
from ..spectral import SpectralDistribution, read_spectrum_csv
from .camera import Camera
from .geometry import Box, Quad, Shape, Sphere
from .lights import Light
from .materials import Emissive, GlossyPhong, Lambertian, Material, SmoothDielectric
from .scene import Scene, SceneObject

logger = logging.getLogger(__name__)

TOP_LEVEL_KEYS = {"name", "camera", "lights", "shapes", "media", "fluorophore_db", "render"}


class _SceneBuilder:
    """Turns a parsed scene document into a validated Scene."""

    def __init__(self, document: Dict[str, Any], db: Optional[FluorophoreDatabase], base_dir: Path):
        self.document = document
        self.base_dir = base_dir
        self._db = db

        render_block = document.get("render") or {}
        if not isinstance(render_block, dict):
            raise SceneValidationError("render", "must be a mapping")
        self.render = RenderConfig.from_dict(render_block)
        self.grid = self.render.grid

    @property
    def db(self) -> FluorophoreDatabase:
        if self._db is None:
            path = self.document.get("fluorophore_db")
            if path is not None:
                path = self._resolve(path)
            self._db = FluorophoreDatabase(path)
        return self._db

    def _resolve(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        return path if path.is_absolute() else self.base_dir / path

    def build(self) -> Scene:
        unknown = set(self.document) - TOP_LEVEL_KEYS
        if unknown:
            raise SceneValidationError("scene", f"unknown keys: {', '.join(sorted(unknown))}")
        if "camera" not in self.document:
            raise SceneValidationError("scene", "missing camera")

        camera = self._camera(self.document["camera"])
        media = [self._medium(entry, i) for i, entry in enumerate(self._list("media"))]
        media_index = {m.name: i for i, m in enumerate(media)}
        if len(media_index) != len(media):
            raise SceneValidationError("media", "medium names must be unique")

        objects = [self._object(entry, i, media_index) for i, entry in enumerate(self._list("shapes"))]
        lights = [self._light(entry, i) for i, entry in enumerate(self._list("lights"))]
        objects += [SceneObject(light.shape, Emissive(i), light.name) for i, light in enumerate(lights)]

        scene = Scene(
            camera=camera,
            lights=lights,
            objects=objects,
            media=media,
            grid=self.grid,
            render=self.render,
            name=str(self.document.get("name", "scene")),
        )
        logger.info(
            f"Loaded scene '{scene.name}': {len(objects)} objects, {len(lights)} lights, {len(media)} media"
        )
        return scene

    def _list(self, key: str) -> List[Dict[str, Any]]:
        value = self.document.get(key) or []
        if not isinstance(value, list) or not all(isinstance(v, dict) for v in value):
            raise SceneValidationError(key, "must be a list of mappings")
        return value

    def _camera(self, data: Any) -> Camera:
        if not isinstance(data, dict):
            raise SceneValidationError("camera", "must be a mapping")
        try:
            return Camera(
                position=data["position"],
                look_at=data["look_at"],
                up=data.get("up", [0.0, 1.0, 0.0]),
                vertical_fov=float(data.get("fov", 40.0)),
                resolution=tuple(data.get("resolution", [64, 64])),
            )
        except KeyError as e:
            raise SceneValidationError("camera", f"missing key {e}")
        except (TypeError, ValueError) as e:
            raise SceneValidationError("camera", str(e))

    def _shape(self, data: Any, entity: str) -> Shape:
        if not isinstance(data, dict) or len(data) != 1:
            raise SceneValidationError(entity, "shape must be one of sphere, quad or box")
        kind, params = next(iter(data.items()))
        try:
            if kind == "sphere":
                return Sphere(np.asarray(params["center"], dtype=np.float64), float(params["radius"]))
            if kind == "quad":
                return Quad(params["corner"], params["edge_u"], params["edge_v"])
            if kind == "box":
                return Box(params["min"], params["max"])
        except KeyError as e:
            raise SceneValidationError(entity, f"{kind} is missing key {e}")
        except SceneValidationError as e:
            raise SceneValidationError(entity, str(e))
        except (TypeError, ValueError) as e:
            raise SceneValidationError(entity, f"invalid {kind}: {e}")
        raise SceneValidationError(entity, f"unknown shape type '{kind}'")

    def _spectrum(self, data: Any, entity: str) -> SpectralDistribution:
        grid = self.grid
        is_number = isinstance(data, (int, float)) and not isinstance(data, bool)
        if not is_number and not isinstance(data, dict):
            raise SceneValidationError(entity, f"invalid spectrum: {data!r}")

        try:
            if is_number:
                return SpectralDistribution.constant(grid, float(data))
            if "monochromatic" in data:
                return self._impulse(float(data["monochromatic"]), float(data.get("radiance", 1.0)), entity)
            if "dye_excitation_peak" in data:
                dye = self.db.get(str(data["dye_excitation_peak"]))
                return self._impulse(dye.excitation_peak, float(data.get("radiance", 1.0)), entity)
            if "table" in data:
                rows = np.asarray(data["table"], dtype=np.float64)
                if rows.ndim != 2 or rows.shape[1] != 2:
                    raise SceneValidationError(entity, "table must be a list of [wavelength, value] pairs")
                return self._samples(rows[:, 0], rows[:, 1], entity)
            if "csv" in data:
                wavelengths, values = read_spectrum_csv(self._resolve(data["csv"]))
                return self._samples(wavelengths, values * float(data.get("scale", 1.0)), entity)
            if "gaussian" in data:
                params = data["gaussian"]
                center, width = float(params["center"]), float(params["width"])
                peak = float(params.get("peak", 1.0))
                values = peak * np.exp(-0.5 * ((grid.wavelengths - center) / width) ** 2)
                return SpectralDistribution(grid, values)
            if "water" in data:
                return water_scattering(grid, float(data["water"]))
        except KeyError as e:
            raise SceneValidationError(entity, f"spectrum is missing key {e}")
        except (TypeError, ValueError) as e:
            raise SceneValidationError(entity, f"invalid spectrum: {e}")
        except (SceneValidationError, SpectrumFileError, UnknownFluorophoreError):
            raise
        except FluorTraceError as e:
            raise SceneValidationError(entity, str(e))
        raise SceneValidationError(entity, f"unknown spectrum form: {', '.join(data)}")

    def _impulse(self, wavelength: float, radiance: float, entity: str) -> SpectralDistribution:
        if not self.grid.contains(wavelength):
            logger.warning(
                f"{entity}: {wavelength:g} nm lies outside the render grid "
                f"{self.grid.lambda_min:g}-{self.grid.lambda_max:g} nm and was clipped"
            )
            return SpectralDistribution.zeros(self.grid)
        return SpectralDistribution.monochromatic(self.grid, wavelength, radiance / self.grid.step)

    def _samples(self, wavelengths: np.ndarray, values: np.ndarray, entity: str) -> SpectralDistribution:
        outside = (wavelengths < self.grid.lambda_min) | (wavelengths > self.grid.lambda_max)
        if np.any(outside):
            logger.warning(f"{entity}: {int(outside.sum())} spectrum samples outside the render grid were clipped")
        return SpectralDistribution.from_samples(wavelengths, values, self.grid)

    def _medium(self, data: Dict[str, Any], index: int) -> Medium:
        name = str(data.get("name", f"medium{index}"))
        fluorophores = []
        for entry in data.get("fluorophores") or []:
            if not isinstance(entry, dict) or "name" not in entry:
                raise SceneValidationError(name, "fluorophores must be mappings with a name")
            dye = self.db.get(str(entry["name"]))
            try:
                fluorophores.append(DissolvedFluorophore(dye, float(entry.get("concentration", 0.0))))
            except FluorTraceError as e:
                raise SceneValidationError(name, str(e))
        try:
            return Medium(
                sigma_a_bg=self._spectrum(data.get("sigma_a", 0.0), name),
                sigma_s_bg=self._spectrum(data.get("sigma_s", 0.0), name),
                phase_g=float(data.get("phase_g", 0.0)),
                fluorophores=fluorophores,
                name=name,
            )
        except SceneValidationError:
            raise
        except FluorTraceError as e:
            raise SceneValidationError(name, str(e))

    def _material(self, data: Any, entity: str, medium: Optional[int]) -> Material:
        if not isinstance(data, dict) or len(data) != 1:
            raise SceneValidationError(entity, "material must be one of lambertian, phong or dielectric")
        kind, params = next(iter(data.items()))
        params = params or {}
        if medium is not None and kind != "dielectric":
            raise SceneValidationError(entity, "only dielectric shapes can hold an interior medium")
        try:
            if kind == "lambertian":
                return Lambertian(self._spectrum(params.get("reflectance", 0.8), entity))
            if kind == "phong":
                return GlossyPhong(
                    self._spectrum(params.get("reflectance", 0.5), entity), float(params.get("exponent", 50.0))
                )
            if kind == "dielectric":
                return SmoothDielectric(
                    ior=float(params.get("ior", 1.33)), refract=bool(params.get("refract", False)), medium=medium
                )
        except SceneValidationError as e:
            if e.entity == entity:
                raise
            raise SceneValidationError(entity, str(e))
        raise SceneValidationError(entity, f"unknown material type '{kind}'")

    def _object(self, data: Dict[str, Any], index: int, media_index: Dict[str, int]) -> SceneObject:
        name = str(data.get("name", f"shape{index}"))
        shape = self._shape(data.get("shape"), name)
        medium = None
        interior = data.get("interior")
        if interior is not None:
            if interior not in media_index:
                raise SceneValidationError(name, f"unknown interior medium '{interior}'")
            if not shape.closed:
                raise SceneValidationError(name, "an interior medium needs a closed shape")
            medium = media_index[interior]
        material = self._material(data.get("material"), name, medium)
        return SceneObject(shape, material, name)

    def _light(self, data: Dict[str, Any], index: int) -> Light:
        name = str(data.get("name", f"light{index}"))
        shape = self._shape(data.get("shape"), name)
        if "spectrum" not in data:
            raise SceneValidationError(name, "missing spectrum")
        return Light(shape, self._spectrum(data["spectrum"], name), bool(data.get("two_sided", False)), name)


def parse_scene(
    text: str,
    db: Optional[FluorophoreDatabase] = None,
    base_dir: Optional[Union[str, Path]] = None,
) -> Scene:
    """
    Parse and validate a scene description.

    Args:
        text: YAML or JSON scene document
        db: Fluorophore database; the scene's ``fluorophore_db`` or the
            configured database if None
        base_dir: Directory relative paths are resolved against

    Returns:
        Validated Scene

    Raises:
        SceneParseError: If the document is not well-formed
        SceneValidationError: If an entity violates its invariants
        UnknownFluorophoreError: If a dye name cannot be resolved
    """
    try:
        document = yaml.safe_load(text)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark
        line = mark.line + 1 if mark is not None else None
        column = mark.column + 1 if mark is not None else None
        raise SceneParseError(f"Invalid scene document: {e.problem}", line, column)
    except yaml.YAMLError as e:
        raise SceneParseError(f"Invalid scene document: {e}")

    if not isinstance(document, dict):
        raise SceneParseError("Scene document must be a mapping", 1, 1)
    try:
        return _SceneBuilder(document, db, Path(base_dir or ".")).build()
    except (RenderConfigError, InvalidGridError) as e:
        raise SceneValidationError("render", str(e))


def load_scene(path: Union[str, Path], db: Optional[FluorophoreDatabase] = None) -> Scene:
    """
    Load a scene file.

    Args:
        path: Scene file
        db: Fluorophore database override

    Returns:
        Validated Scene

    Raises:
        OSError: If the file cannot be read
    """
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    logger.debug(f"Parsing scene file {path}")
    return parse_scene(text, db=db, base_dir=path.parent)
