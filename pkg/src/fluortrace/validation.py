"""
Spectroscopic validation protocols.

This module compares rendered scene spectra against the pure emission
spectra of the dyes (profile test) and checks that the emitted intensity
follows the excitation spectrum when the illumination wavelength changes
(scaling test).
"""

import itertools
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .config import bundled_scenes_path
from .errors import ValidationFailedError, ZeroSpectrumError
from .film import Film
from .fluorophore import DissolvedFluorophore, Fluorophore, FluorophoreDatabase
from .render import RenderConfig, render
from .scene import Light, Scene, load_scene
from .spectral import SpectralDistribution, integrate, resample

logger = logging.getLogger(__name__)

TEMPLATE_DYE = "alexa488"


@dataclass(frozen=True)
class Tolerances:
    """
    Acceptance thresholds of the validation protocols.

    Attributes:
        rmse: Largest normalized RMSE between peak-normalized spectra
        peak_nm: Largest peak-wavelength difference in nm
        scaling: Largest deviation of a relative intensity from its expectation
    """

    rmse: float = 0.05
    peak_nm: float = 5.0
    scaling: float = 0.1


@dataclass
class ValidationReport:
    """
    Outcome of one or both validation protocols for a dye.

    Attributes:
        dye: Dye name
        normalized_rmse: Profile RMSE against the pure emission spectrum
        peak_error_nm: Peak-wavelength difference against the pure emission spectrum
        scaling_points: (excitation wavelength, measured, expected) triples
        profile_rmse: Largest RMSE between normalized spectra rendered at
            different excitation wavelengths
        tolerances: Thresholds the verdict is based on
    """

    dye: str
    normalized_rmse: Optional[float] = None
    peak_error_nm: Optional[float] = None
    scaling_points: List[Tuple[float, float, float]] = field(default_factory=list)
    profile_rmse: Optional[float] = None
    tolerances: Tolerances = field(default_factory=Tolerances)

    @property
    def profile_passed(self) -> Optional[bool]:
        if self.normalized_rmse is None:
            return None
        return self.normalized_rmse < self.tolerances.rmse and self.peak_error_nm <= self.tolerances.peak_nm

    @property
    def scaling_passed(self) -> Optional[bool]:
        if not self.scaling_points:
            return None
        deviation = max(abs(measured - expected) for _, measured, expected in self.scaling_points)
        invariant = self.profile_rmse is None or self.profile_rmse < self.tolerances.rmse
        return deviation < self.tolerances.scaling and invariant

    @property
    def pass_(self) -> bool:
        """Whether every protocol that ran passed."""
        verdicts = [v for v in (self.profile_passed, self.scaling_passed) if v is not None]
        return bool(verdicts) and all(verdicts)

    def merge(self, other: "ValidationReport") -> "ValidationReport":
        """Combine the results of two protocols run on the same dye."""
        return ValidationReport(
            dye=self.dye,
            normalized_rmse=self.normalized_rmse if self.normalized_rmse is not None else other.normalized_rmse,
            peak_error_nm=self.peak_error_nm if self.peak_error_nm is not None else other.peak_error_nm,
            scaling_points=self.scaling_points or other.scaling_points,
            profile_rmse=self.profile_rmse if self.profile_rmse is not None else other.profile_rmse,
            tolerances=self.tolerances,
        )

    def summary(self) -> str:
        """Human-readable report."""
        lines = [f"Validation report for {self.dye}"]
        if self.normalized_rmse is not None:
            lines.append(
                f"  profile: normalized RMSE {self.normalized_rmse:.4f} (< {self.tolerances.rmse:g}), "
                f"peak error {self.peak_error_nm:g} nm (<= {self.tolerances.peak_nm:g}) "
                f"-> {'PASS' if self.profile_passed else 'FAIL'}"
            )
        if self.scaling_points:
            lines.append(f"  scaling (tolerance {self.tolerances.scaling:g}):")
            for wavelength, measured, expected in self.scaling_points:
                lines.append(f"    {wavelength:6.1f} nm: measured {measured:.4f}, expected {expected:.4f}")
            if self.profile_rmse is not None:
                lines.append(f"  emission profile RMSE across excitations {self.profile_rmse:.4f}")
            lines.append(f"  scaling -> {'PASS' if self.scaling_passed else 'FAIL'}")
        lines.append(f"Result: {'PASS' if self.pass_ else 'FAIL'}")
        return "\n".join(lines)


def _peak_normalized(s: SpectralDistribution) -> np.ndarray:
    peak = float(s.values.max())
    if peak <= 0.0:
        raise ZeroSpectrumError("Cannot compare a spectrum that is zero everywhere")
    return s.values / peak


def compare_profiles(
    rendered: SpectralDistribution, reference: SpectralDistribution
) -> Tuple[float, float]:
    """
    Compare the shapes of two spectra.

    Both are peak-normalized to one; the RMSE is taken over the wavelengths
    where either spectrum is nonzero.

    Args:
        rendered: Rendered spectrum
        reference: Reference spectrum (resampled to the rendered grid)

    Returns:
        Tuple of (normalized RMSE, peak-wavelength difference in nm)

    Raises:
        ZeroSpectrumError: If either spectrum is zero everywhere
    """
    reference = resample(reference, rendered.grid)
    a = _peak_normalized(rendered)
    b = _peak_normalized(reference)
    support = (a > 0.0) | (b > 0.0)
    rmse = float(np.sqrt(np.mean((a[support] - b[support]) ** 2)))
    wavelengths = rendered.grid.wavelengths
    peak_error = float(abs(wavelengths[np.argmax(a)] - wavelengths[np.argmax(b)]))
    return rmse, peak_error


def expected_scaling(dye: Fluorophore, wavelengths: Sequence[float]) -> np.ndarray:
    """
    Excitation spectrum relative to its maximum at the given wavelengths.

    Args:
        dye: Fluorophore
        wavelengths: Excitation wavelengths in nm

    Returns:
        Values in [0, 1]
    """
    excitation = dye.excitation
    peak = float(excitation.values.max())
    return np.asarray(excitation(np.asarray(wavelengths, dtype=np.float64))) / peak


def validation_scene(dye_name: str, db: FluorophoreDatabase) -> Scene:
    """
    Validation bead scene for a dye.

    Uses the bundled ``validation_bead_<number>`` scene when one exists;
    otherwise the Alexa Fluor 488 bead with the dye swapped in and the light
    moved to the dye's excitation maximum.

    Args:
        dye_name: Any name the database resolves
        db: Fluorophore database

    Returns:
        Scene with one fluorescent bead and one light

    Raises:
        UnknownFluorophoreError: If the name cannot be resolved
    """
    name = db.resolve(dye_name)
    digits = "".join(c for c in name if c.isdigit())
    path = bundled_scenes_path() / f"validation_bead_{digits}.yaml"
    if digits and path.exists():
        return load_scene(path, db=db)

    template = load_scene(bundled_scenes_path() / f"validation_bead_{TEMPLATE_DYE[-3:]}.yaml", db=db)
    dye = db.get(name)
    media = [
        m.with_fluorophores([DissolvedFluorophore(dye, d.concentration) for d in m.fluorophores])
        for m in template.media
    ]
    scene = template.with_media(media)
    logger.info(f"Using the {TEMPLATE_DYE} bead scene for {name}")
    return illuminate(scene, dye.excitation_peak)


def illuminate(scene: Scene, wavelength: float) -> Scene:
    """
    Copy of a scene whose lights emit the same total radiance at one wavelength.
    """
    grid = scene.grid
    lights = [
        Light(
            light.shape,
            SpectralDistribution.monochromatic(grid, wavelength, integrate(light.spd) / grid.step),
            light.two_sided,
            light.name,
        )
        for light in scene.lights
    ]
    return scene.with_lights(lights)


def _render_spectrum(scene: Scene, config: RenderConfig, threads: Optional[int], threshold: float) -> SpectralDistribution:
    film: Film = render(scene, config, threads=threads)
    return film.scene_spd(threshold)


def profile_test(
    scene: Scene,
    dye: Fluorophore,
    config: Optional[RenderConfig] = None,
    threads: Optional[int] = None,
    threshold: float = 0.0,
    tolerances: Optional[Tolerances] = None,
) -> ValidationReport:
    """
    Compare the rendered scene spectrum against the dye's emission spectrum.

    Args:
        scene: Validation scene
        dye: Dye whose emission is expected
        config: Render configuration; the scene's settings if None
        threads: Worker threads
        threshold: Illumination threshold of the scene spectrum
        tolerances: Acceptance thresholds

    Returns:
        ValidationReport with the profile metrics
    """
    config = config or scene.render
    tolerances = tolerances or Tolerances()
    spectrum = _render_spectrum(scene, config, threads, threshold)
    rmse, peak_error = compare_profiles(spectrum, dye.emission)
    report = ValidationReport(
        dye=dye.name, normalized_rmse=rmse, peak_error_nm=peak_error, tolerances=tolerances
    )
    logger.info(f"Profile test for {dye.name}: RMSE {rmse:.4f}, peak error {peak_error:g} nm")
    return report


def scaling_test(
    scene_template: Scene,
    dye: Fluorophore,
    excitation_lambdas: Sequence[float],
    config: Optional[RenderConfig] = None,
    threads: Optional[int] = None,
    tolerances: Optional[Tolerances] = None,
) -> ValidationReport:
    """
    Check that emitted intensity follows the excitation spectrum.

    The template is rendered once per excitation wavelength and once at the
    dye's excitation maximum. Relative intensity is the integral of the mean
    film spectrum divided by the one at the maximum.

    Args:
        scene_template: Scene whose lights are re-tuned per wavelength
        dye: Dye in the scene
        excitation_lambdas: Excitation wavelengths in nm
        config: Render configuration; the template's settings if None
        threads: Worker threads
        tolerances: Acceptance thresholds

    Returns:
        ValidationReport with the scaling points and the emission-profile RMSE

    Raises:
        ValidationFailedError: If a wavelength lies outside the render grid or
            nothing is emitted at the excitation maximum
    """
    config = config or scene_template.render
    tolerances = tolerances or Tolerances()
    grid = config.grid
    for wavelength in excitation_lambdas:
        if not grid.contains(wavelength):
            raise ValidationFailedError(
                f"Excitation wavelength {wavelength:g} nm lies outside the render grid"
            )

    peak = dye.excitation_peak
    spectra = {}
    for wavelength in [peak, *[w for w in excitation_lambdas if w != peak]]:
        scene = illuminate(scene_template, wavelength)
        # Every pixel counts so dark renders compare on the same footing
        spectra[wavelength] = _render_spectrum(scene, config, threads, threshold=-np.inf)
        logger.debug(f"Rendered {dye.name} excited at {wavelength:g} nm")

    reference = integrate(spectra[peak])
    if reference <= 0.0:
        raise ValidationFailedError(
            f"No emission rendered for {dye.name} at its excitation maximum {peak:g} nm",
            "Increase samples per pixel",
        )
    expected = expected_scaling(dye, excitation_lambdas)
    points = [
        (float(w), integrate(spectra[w]) / reference, float(e))
        for w, e in zip(excitation_lambdas, expected)
    ]

    # Spectra with little excitation are noise-dominated and excluded
    bright = [w for w, e in zip(excitation_lambdas, expected) if e >= 0.2] + [peak]
    profile_rmse = max(
        (compare_profiles(spectra[a], spectra[b])[0] for a, b in itertools.combinations(set(bright), 2)),
        default=None,
    )
    report = ValidationReport(
        dye=dye.name, scaling_points=points, profile_rmse=profile_rmse, tolerances=tolerances
    )
    logger.info(f"Scaling test for {dye.name}: {'PASS' if report.scaling_passed else 'FAIL'}")
    return report


def write_report(report: ValidationReport, basename: Union[str, Path]) -> List[Path]:
    """
    Write a report as CSV metrics and a text summary.

    Args:
        report: Validation report
        basename: Output path without extension

    Returns:
        Paths written: ``.csv`` and ``.txt``
    """
    base = Path(basename)
    csv_path = base.with_name(base.name + ".csv")
    txt_path = base.with_name(base.name + ".txt")

    rows = []
    if report.normalized_rmse is not None:
        rows.append({"test": "profile", "metric": "normalized_rmse", "wavelength": None,
                     "measured": report.normalized_rmse, "expected": 0.0})
        rows.append({"test": "profile", "metric": "peak_error_nm", "wavelength": None,
                     "measured": report.peak_error_nm, "expected": 0.0})
    for wavelength, measured, expected in report.scaling_points:
        rows.append({"test": "scaling", "metric": "relative_intensity", "wavelength": wavelength,
                     "measured": measured, "expected": expected})
    if report.profile_rmse is not None:
        rows.append({"test": "scaling", "metric": "profile_rmse", "wavelength": None,
                     "measured": report.profile_rmse, "expected": 0.0})

    frame = pd.DataFrame(rows, columns=["test", "metric", "wavelength", "measured", "expected"])
    frame.to_csv(csv_path, index=False, lineterminator="\n")
    txt_path.write_text(report.summary() + "\n", encoding="utf-8")
    logger.info(f"Wrote {csv_path} and {txt_path}")
    return [csv_path, txt_path]
