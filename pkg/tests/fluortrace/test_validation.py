"""
Tests for the spectroscopic validation protocols.

This module tests profile comparison, expected excitation scaling, the
validation scenes, reports and short renders of both protocols.
"""

import numpy as np
import pandas as pd
import pytest

from fluortrace.errors import UnknownFluorophoreError, ValidationFailedError, ZeroSpectrumError
from fluortrace.spectral import SpectralDistribution, WavelengthGrid, integrate
from fluortrace.validation import (
    Tolerances,
    ValidationReport,
    compare_profiles,
    expected_scaling,
    illuminate,
    profile_test,
    scaling_test,
    validation_scene,
    write_report,
)

GRID = WavelengthGrid(400.0, 700.0, 1.0)


def gaussian(center: float, width: float = 20.0, height: float = 1.0) -> SpectralDistribution:
    w = GRID.wavelengths
    return SpectralDistribution(GRID, height * np.exp(-0.5 * ((w - center) / width) ** 2))


class TestCompareProfiles:
    """Test spectral shape comparison."""

    def test_identical_shapes(self):
        """Test that scaled copies match exactly."""
        rmse, peak = compare_profiles(gaussian(520.0, height=3.0), gaussian(520.0))
        assert rmse == pytest.approx(0.0, abs=1e-12)
        assert peak == 0.0

    def test_shifted_peak(self):
        """Test that a shifted spectrum reports the peak difference."""
        rmse, peak = compare_profiles(gaussian(530.0), gaussian(520.0))
        assert peak == 10.0
        assert rmse > 0.05

    def test_reference_resampled(self):
        """Test that a reference on another grid is resampled first."""
        coarse = WavelengthGrid(400.0, 700.0, 5.0)
        w = coarse.wavelengths
        reference = SpectralDistribution(coarse, np.exp(-0.5 * ((w - 520.0) / 20.0) ** 2))
        rmse, peak = compare_profiles(gaussian(520.0), reference)
        assert rmse < 0.01
        assert peak == 0.0

    def test_zero_spectrum(self):
        """Test that a zero spectrum cannot be compared."""
        with pytest.raises(ZeroSpectrumError):
            compare_profiles(SpectralDistribution.zeros(GRID), gaussian(520.0))


class TestExpectedScaling:
    """Test expected relative intensities."""

    def test_alexa488(self, fluorophore_db):
        """Test relative excitation of Alexa Fluor 488."""
        dye = fluorophore_db.get("alexa488")
        values = expected_scaling(dye, [dye.excitation_peak, 450.0, 475.0])
        assert values[0] == pytest.approx(1.0)
        assert values[1] == pytest.approx(0.066116, rel=1e-3)
        assert values[2] == pytest.approx(0.509382, rel=1e-3)


class TestValidationScene:
    """Test the scenes used by the protocols."""

    def test_bundled_bead(self, fluorophore_db):
        """Test that a dye with a bundled bead loads that scene."""
        scene = validation_scene("Alexa Fluor 568", fluorophore_db)
        assert scene.name == "validation_bead_568"
        assert scene.media[0].fluorophores[0].dye.name == "alexa568"

    def test_template_bead(self, fluorophore_db):
        """Test that other dyes get the template bead lit at their excitation maximum."""
        scene = validation_scene("alexa350", fluorophore_db)
        dye = fluorophore_db.get("alexa350")
        assert [d.dye.name for d in scene.media[0].fluorophores] == ["alexa350"]
        assert len(scene.lights) == 1
        assert scene.lights[0].spd.peak_wavelength() == pytest.approx(dye.excitation_peak)

    def test_unknown_dye(self, fluorophore_db):
        """Test that unknown dyes are rejected."""
        with pytest.raises(UnknownFluorophoreError):
            validation_scene("cy5", fluorophore_db)

    def test_illuminate_preserves_radiance(self, fluorophore_db):
        """Test that re-tuned lights keep their integrated radiance."""
        scene = validation_scene("488", fluorophore_db)
        before = integrate(scene.lights[0].spd)
        tuned = illuminate(scene, 470.0)
        assert tuned.lights[0].spd.peak_wavelength() == 470.0
        assert integrate(tuned.lights[0].spd) == pytest.approx(before)
        assert np.count_nonzero(tuned.lights[0].spd.values) == 1


class TestValidationReport:
    """Test report verdicts, merging and output."""

    def test_profile_verdict(self):
        """Test the profile pass criterion."""
        assert ValidationReport("d", normalized_rmse=0.01, peak_error_nm=2.0).pass_
        assert not ValidationReport("d", normalized_rmse=0.06, peak_error_nm=2.0).pass_
        assert not ValidationReport("d", normalized_rmse=0.01, peak_error_nm=6.0).pass_

    def test_scaling_verdict(self):
        """Test the scaling pass criterion."""
        good = ValidationReport("d", scaling_points=[(475.0, 0.55, 0.51), (495.0, 1.0, 1.0)])
        assert good.scaling_passed
        bad = ValidationReport("d", scaling_points=[(475.0, 0.7, 0.51)])
        assert not bad.pass_
        drifting = ValidationReport("d", scaling_points=[(475.0, 0.5, 0.51)], profile_rmse=0.2)
        assert not drifting.pass_

    def test_empty_report_fails(self):
        """Test that a report without results does not pass."""
        assert not ValidationReport("d").pass_

    def test_merge(self):
        """Test combining both protocols."""
        profile = ValidationReport("d", normalized_rmse=0.01, peak_error_nm=1.0)
        scaling = ValidationReport("d", scaling_points=[(475.0, 0.5, 0.51)], profile_rmse=0.01)
        merged = profile.merge(scaling)
        assert merged.normalized_rmse == 0.01
        assert merged.scaling_points == scaling.scaling_points
        assert merged.pass_

    def test_summary(self):
        """Test the human-readable summary."""
        report = ValidationReport(
            "alexa488", normalized_rmse=0.02, peak_error_nm=1.0, tolerances=Tolerances(rmse=0.05)
        )
        summary = report.summary()
        assert summary.startswith("Validation report for alexa488")
        assert "normalized RMSE 0.0200 (< 0.05)" in summary
        assert summary.endswith("Result: PASS")

    def test_write_report(self, tmp_path):
        """Test the CSV metrics and text summary."""
        report = ValidationReport(
            "alexa488",
            normalized_rmse=0.02,
            peak_error_nm=1.0,
            scaling_points=[(475.0, 0.5, 0.51)],
            profile_rmse=0.03,
        )
        csv_path, txt_path = write_report(report, tmp_path / "report")
        frame = pd.read_csv(csv_path)
        assert list(frame.columns) == ["test", "metric", "wavelength", "measured", "expected"]
        assert list(frame["metric"]) == ["normalized_rmse", "peak_error_nm", "relative_intensity", "profile_rmse"]
        assert frame.loc[2, "wavelength"] == 475.0
        assert txt_path.read_text(encoding="utf-8") == report.summary() + "\n"


@pytest.mark.slow
class TestProtocols:
    """Test renders of both protocols at the default tolerances."""

    @pytest.fixture
    def bead(self, bundled_scene, render_grid):
        return bundled_scene("validation_bead_488", grid=render_grid, resolution=(32, 32), spp=32)

    @pytest.mark.parametrize("dye", ["488", "568", "633"])
    def test_profile(self, bundled_scene, render_grid, fluorophore_db, dye):
        """Test that the rendered bead spectrum follows the emission spectrum."""
        scene = bundled_scene(f"validation_bead_{dye}", grid=render_grid, resolution=(32, 32), spp=64)
        report = profile_test(scene, fluorophore_db.get(f"alexa{dye}"), threads=2)
        assert report.profile_passed, report.summary()

    def test_scaling(self, bead, fluorophore_db):
        """Test that emission scales with the excitation spectrum across the band."""
        dye = fluorophore_db.get("alexa488")
        wavelengths = [450.0, 475.0, 490.0]
        report = scaling_test(bead, dye, wavelengths, threads=2)
        assert [w for w, _, _ in report.scaling_points] == wavelengths
        for _, measured, expected in report.scaling_points:
            assert measured == pytest.approx(expected, abs=0.1)
        assert report.profile_rmse < 0.05
        assert report.scaling_passed, report.summary()

    def test_scaling_outside_grid(self, bead, fluorophore_db):
        """Test that excitation wavelengths off the render grid are rejected."""
        with pytest.raises(ValidationFailedError, match="outside the render grid"):
            scaling_test(bead, fluorophore_db.get("alexa488"), [380.0])
