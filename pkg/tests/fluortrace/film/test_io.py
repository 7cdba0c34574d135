"""
Tests for film outputs.

This module tests the PNG, scene-spectrum CSV and FLSPD writers and the
FLSPD reader.
"""

import logging
import struct

import numpy as np
import pandas as pd
import pytest
from PIL import Image

from fluortrace.errors import FilmIOError
from fluortrace.film import Film, read_flspd, write_flspd, write_outputs
from fluortrace.film.io import HEADER, MAGIC
from fluortrace.spectral import WavelengthGrid

GRID = WavelengthGrid(400.0, 700.0, 10.0)


@pytest.fixture
def film():
    f = Film(5, 3, GRID)
    rng = np.random.default_rng(7)
    f.bins = rng.uniform(0.0, 2.0, size=f.bins.shape)
    f.sample_counts[:] = 4
    return f


class TestFlspd:
    """Test the raw spectral dump."""

    def test_layout(self, film, tmp_path):
        """Test header fields and total size."""
        path = write_flspd(film, tmp_path / "film.flspd")
        data = path.read_bytes()
        assert data[:8] == MAGIC == b"FLSPD v1"
        width, height, lo, hi, step = HEADER.unpack_from(data, 8)
        assert (width, height) == (5, 3)
        assert (lo, hi, step) == (400.0, 700.0, 10.0)
        assert len(data) == 8 + 32 + 15 * 4 + 15 * GRID.count * 8
        first_count = struct.unpack_from("<I", data, 8 + HEADER.size)[0]
        assert first_count == 4

    def test_read_back(self, film, tmp_path):
        """Test that a dump reads back to an identical film."""
        path = write_flspd(film, tmp_path / "film.flspd")
        restored = read_flspd(path)
        assert restored == film
        assert restored.checksum() == film.checksum()

    def test_missing_file(self, tmp_path):
        """Test that a missing dump raises."""
        with pytest.raises(FilmIOError, match="Cannot read"):
            read_flspd(tmp_path / "absent.flspd")

    def test_bad_magic(self, tmp_path):
        """Test that other files are rejected."""
        path = tmp_path / "image.flspd"
        path.write_bytes(b"\x89PNG\r\n\x1a\n" + bytes(64))
        with pytest.raises(FilmIOError, match="not an FLSPD v1 file"):
            read_flspd(path)

    def test_truncated_header(self, tmp_path):
        """Test that a dump cut inside the header is rejected."""
        path = tmp_path / "short.flspd"
        path.write_bytes(MAGIC + bytes(10))
        with pytest.raises(FilmIOError, match="truncated header"):
            read_flspd(path)

    def test_truncated_body(self, film, tmp_path):
        """Test that a dump with missing pixel data is rejected."""
        path = write_flspd(film, tmp_path / "film.flspd")
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(FilmIOError, match="expected"):
            read_flspd(path)

    def test_invalid_grid(self, tmp_path):
        """Test that an impossible grid in the header is rejected."""
        path = tmp_path / "grid.flspd"
        path.write_bytes(MAGIC + HEADER.pack(1, 1, 700.0, 400.0, 10.0))
        with pytest.raises(FilmIOError, match="lambda_min"):
            read_flspd(path)

    def test_unwritable(self, film, tmp_path):
        """Test that write failures raise FilmIOError."""
        with pytest.raises(FilmIOError, match="Cannot write"):
            write_flspd(film, tmp_path / "missing" / "film.flspd")


class TestWriteOutputs:
    """Test writing the complete set of render outputs."""

    def test_files(self, film, tmp_path):
        """Test that the image, spectrum and dump are written."""
        paths = write_outputs(film, tmp_path / "render")
        assert [p.name for p in paths] == ["render.png", "render.spd.csv", "render.flspd"]
        assert all(p.exists() for p in paths)

        with Image.open(paths[0]) as image:
            assert image.size == (5, 3)
            assert image.mode == "RGB"

        spectrum = pd.read_csv(paths[1])
        assert list(spectrum.columns) == ["wavelength", "value"]
        assert len(spectrum) == GRID.count
        np.testing.assert_allclose(spectrum["value"], film.scene_spd().values, rtol=1e-8)

        assert read_flspd(paths[2]) == film

    def test_fixed_exposure(self, film, tmp_path):
        """Test that a given exposure is used for the image."""
        paths = write_outputs(film, tmp_path / "render", exposure=1e-6)
        with Image.open(paths[0]) as image:
            assert np.asarray(image).max() < 64

    def test_black_film(self, tmp_path, caplog):
        """Test that a black film writes a zero spectrum with a warning."""
        film = Film(2, 2, GRID)
        with caplog.at_level(logging.WARNING):
            paths = write_outputs(film, tmp_path / "dark")
        assert "No illuminated pixels in dark" in caplog.text
        spectrum = pd.read_csv(paths[1])
        assert (spectrum["value"] == 0.0).all()
        with Image.open(paths[0]) as image:
            assert np.asarray(image).max() == 0
