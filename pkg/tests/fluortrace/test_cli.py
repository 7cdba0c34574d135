"""
Tests for the command-line interface.

This module tests the render, validate and spectra commands and their exit
codes at tiny render sizes.
"""

import pandas as pd
import pytest

from fluortrace.cli import EXIT_FAILURE, EXIT_IO, EXIT_OK, build_parser, main
from fluortrace.config import ToolConfig, bundled_scenes_path, get_config, set_config

BEAD = str(bundled_scenes_path() / "validation_bead_488.yaml")
TINY = ["--spp", "1", "--width", "4", "--height", "4"]


@pytest.fixture(autouse=True)
def restore_config():
    """Keep the global configuration the command line replaces."""
    original = get_config()
    yield
    set_config(original)


class TestParser:
    """Test argument parsing."""

    def test_command_required(self):
        """Test that a command must be given."""
        with pytest.raises(SystemExit):
            build_parser().parse_args([])

    def test_render_defaults(self):
        """Test the defaults of the render command."""
        args = build_parser().parse_args(["render", "scene.yaml"])
        assert args.threads == 1
        assert args.spp is None
        assert args.elastic is None
        assert args.log_level == "INFO"

    def test_command_threads(self):
        """Test that render and validate accept --threads after the command."""
        args = build_parser().parse_args(["--threads", "2", "render", "scene.yaml", "--threads", "4"])
        assert args.command_threads == 4
        assert ToolConfig(args).threads == 4

        args = build_parser().parse_args(["--threads", "2", "validate", "488"])
        assert args.command_threads is None
        assert ToolConfig(args).threads == 2

    def test_validate_lambdas(self):
        """Test that scaling wavelengths are parsed as floats."""
        args = build_parser().parse_args(["validate", "488", "--lambdas", "450", "470.5"])
        assert args.lambdas == [450.0, 470.5]


class TestSpectraCommand:
    """Test the spectra command."""

    def test_summary(self, capsys):
        """Test that dye properties are printed."""
        assert main(["spectra", "Alexa Fluor 488"]) == EXIT_OK
        out = capsys.readouterr().out
        assert "excitation peak:" in out
        assert "quantum yield:   0.92" in out

    def test_csv_export(self, tmp_path, capsys):
        """Test exporting spectra on a chosen grid."""
        path = tmp_path / "alexa488.csv"
        assert main(["spectra", "488", "--csv", str(path), "--grid", "400", "700", "10"]) == EXIT_OK
        frame = pd.read_csv(path)
        assert list(frame.columns) == ["wavelength", "excitation", "emission"]
        assert len(frame) == 31
        assert frame["excitation"].max() <= 1.0
        assert f"Wrote {path}" in capsys.readouterr().out

    def test_unknown_dye(self, capsys):
        """Test that an unknown dye exits with a failure code."""
        assert main(["spectra", "cy5"]) == EXIT_FAILURE
        assert "Unknown fluorophore: cy5" in capsys.readouterr().err


@pytest.mark.integration
class TestRenderCommand:
    """Test the render command."""

    def test_render_outputs(self, tmp_path, capsys):
        """Test that rendering writes the three outputs and a checksum."""
        out = tmp_path / "bead"
        assert main(["--quiet", "render", BEAD, *TINY, "--out", str(out)]) == EXIT_OK
        for suffix in (".png", ".spd.csv", ".flspd"):
            assert (tmp_path / f"bead{suffix}").exists()
        assert "FLSPD checksum" in capsys.readouterr().out

    def test_checksum_independent_of_threads(self, tmp_path, capsys):
        """Test that thread count does not change the rendered film."""
        checksums = []
        for threads in ("1", "2"):
            out = tmp_path / f"bead_{threads}"
            assert main(["--quiet", "--threads", threads, "render", BEAD, *TINY, "--out", str(out)]) == EXIT_OK
            lines = capsys.readouterr().out.splitlines()
            checksums.append(next(line for line in lines if line.startswith("FLSPD checksum")))
        assert checksums[0] == checksums[1]

    def test_threads_after_command(self, tmp_path, capsys):
        """Test rendering with the thread count given after the command."""
        out = tmp_path / "bead"
        assert main(["--quiet", "render", BEAD, *TINY, "--threads", "4", "--out", str(out)]) == EXIT_OK
        assert get_config().threads == 4

    def test_missing_scene(self, tmp_path, capsys):
        """Test that an unreadable scene file exits with the I/O code."""
        assert main(["render", str(tmp_path / "absent.yaml")]) == EXIT_IO
        assert "error:" in capsys.readouterr().err

    def test_malformed_scene(self, tmp_path, capsys):
        """Test that a malformed scene exits with the failure code."""
        path = tmp_path / "broken.yaml"
        path.write_text("camera: [unclosed\n", encoding="utf-8")
        assert main(["render", str(path)]) == EXIT_FAILURE
        assert "error:" in capsys.readouterr().err


@pytest.mark.integration
class TestValidateCommand:
    """Test the validate command."""

    def test_profile_report(self, tmp_path, capsys):
        """Test that a profile run writes its report."""
        out = tmp_path / "report"
        code = main(["--quiet", "validate", "488", "--test", "profile", *TINY, "--out", str(out)])
        assert code in (EXIT_OK, EXIT_FAILURE)
        assert (tmp_path / "report.csv").exists()
        assert (tmp_path / "report.txt").exists()
        summary = capsys.readouterr().out
        assert "Validation report for alexa488" in summary
        assert ("Result: PASS" in summary) == (code == EXIT_OK)

    def test_scaling_outside_grid(self, tmp_path, capsys):
        """Test that excitation wavelengths outside the render grid fail."""
        code = main(["validate", "488", "--test", "scaling", "--lambdas", "900", "--out", str(tmp_path / "r")])
        assert code == EXIT_FAILURE
        assert "outside the render grid" in capsys.readouterr().err
