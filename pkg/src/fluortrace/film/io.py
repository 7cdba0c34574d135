"""
Film outputs.

This module writes a rendered film as an 8-bit sRGB PNG, the scene spectrum
as CSV and the lossless FLSPD spectral dump, and reads FLSPD dumps back.

FLSPD layout (little-endian): the 8-byte magic ``FLSPD v1``; width and
height as uint32; grid minimum, maximum and step as float64; per-pixel
sample counts as uint32 (row-major); per-pixel spectral sums as float64
(row-major, wavelength fastest).
"""

import logging
import struct
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from PIL import Image

from ..errors import FilmIOError, InvalidGridError, NoIlluminatedPixelsError
from ..spectral import SpectralDistribution, WavelengthGrid, write_spectrum_csv
from .film import Film

logger = logging.getLogger(__name__)

MAGIC = b"FLSPD v1"
HEADER = struct.Struct("<IIddd")


def flspd_bytes(film: Film) -> bytes:
    """Serialize a film to the FLSPD byte layout."""
    grid = film.grid
    header = HEADER.pack(film.width, film.height, grid.lambda_min, grid.lambda_max, grid.step)
    counts = film.sample_counts.astype("<u4").tobytes()
    sums = film.bins.astype("<f8").tobytes()
    return MAGIC + header + counts + sums


def write_flspd(film: Film, path: Union[str, Path]) -> Path:
    """
    Write the raw spectral dump of a film.

    Raises:
        FilmIOError: If the file cannot be written
    """
    path = Path(path)
    try:
        path.write_bytes(flspd_bytes(film))
    except OSError as e:
        raise FilmIOError(f"Cannot write {path}: {e}")
    return path


def read_flspd(path: Union[str, Path]) -> Film:
    """
    Read a film back from its raw spectral dump.

    Args:
        path: FLSPD file

    Returns:
        Film identical to the one written

    Raises:
        FilmIOError: If the file is missing, truncated or not an FLSPD dump
    """
    path = Path(path)
    try:
        data = path.read_bytes()
    except OSError as e:
        raise FilmIOError(f"Cannot read {path}: {e}")

    if not data.startswith(MAGIC):
        raise FilmIOError(f"{path} is not an FLSPD v1 file")
    offset = len(MAGIC)
    if len(data) < offset + HEADER.size:
        raise FilmIOError(f"{path}: truncated header")
    width, height, lambda_min, lambda_max, step = HEADER.unpack_from(data, offset)
    offset += HEADER.size

    try:
        grid = WavelengthGrid(lambda_min, lambda_max, step)
    except InvalidGridError as e:
        raise FilmIOError(f"{path}: {e}")
    pixels = width * height
    expected = offset + pixels * 4 + pixels * grid.count * 8
    if len(data) != expected:
        raise FilmIOError(f"{path}: expected {expected} bytes, found {len(data)}")

    film = Film(width, height, grid)
    film.sample_counts = (
        np.frombuffer(data, dtype="<u4", count=pixels, offset=offset).reshape(height, width).astype(np.uint32)
    )
    offset += pixels * 4
    film.bins = (
        np.frombuffer(data, dtype="<f8", count=pixels * grid.count, offset=offset)
        .reshape(height, width, grid.count)
        .astype(np.float64)
    )
    return film


def write_outputs(
    film: Film,
    basename: Union[str, Path],
    exposure: Optional[float] = None,
    threshold: float = 0.0,
) -> List[Path]:
    """
    Write the PNG image, scene-spectrum CSV and FLSPD dump of a film.

    A film without illuminated pixels yields a black image and an all-zero
    spectrum.

    Args:
        film: Rendered film
        basename: Output path without extension
        exposure: Linear PNG exposure; automatic if None
        threshold: Illumination threshold for the scene spectrum

    Returns:
        Paths written: ``.png``, ``.spd.csv`` and ``.flspd``

    Raises:
        FilmIOError: If any output cannot be written
    """
    base = Path(basename)
    png_path = base.with_name(base.name + ".png")
    csv_path = base.with_name(base.name + ".spd.csv")
    raw_path = base.with_name(base.name + ".flspd")

    try:
        spectrum = film.scene_spd(threshold)
    except NoIlluminatedPixelsError:
        logger.warning(f"No illuminated pixels in {base.name}; writing a zero spectrum")
        spectrum = SpectralDistribution.zeros(film.grid)

    try:
        Image.fromarray(film.to_rgb(exposure)).save(png_path)
        write_spectrum_csv(spectrum, csv_path)
    except OSError as e:
        raise FilmIOError(f"Cannot write outputs for {base}: {e}")
    write_flspd(film, raw_path)

    logger.info(f"Wrote {png_path}, {csv_path} and {raw_path}")
    return [png_path, csv_path, raw_path]
