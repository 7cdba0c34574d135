"""
Spectrum CSV ingestion and export.

Spectrum files carry a header line followed by ``wavelength_nm,value`` rows.
Values may be given on a 0-100 or a 0-1 scale; percent tables are rescaled.
"""

import logging
import re
from pathlib import Path
from typing import List, Tuple, Union

import numpy as np
import pandas as pd

from ..errors import MalformedCsvError, MissingFileError
from .distribution import SpectralDistribution
from .grid import WavelengthGrid

logger = logging.getLogger(__name__)

_PARSER_LINE = re.compile(r"line (\d+)")


def read_spectrum_csv(path: Union[str, Path]) -> Tuple[np.ndarray, np.ndarray]:
    """
    Read raw (wavelength, value) samples from a spectrum CSV.

    Args:
        path: CSV file path

    Returns:
        Tuple of wavelength and value arrays, sorted by wavelength

    Raises:
        MissingFileError: If the file does not exist
        MalformedCsvError: If a row is malformed, with its 1-based line number
    """
    path = Path(path)
    if not path.is_file():
        raise MissingFileError(str(path))

    try:
        frame = pd.read_csv(
            path,
            header=0,
            dtype=str,
            skip_blank_lines=True,
            keep_default_na=False,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise MalformedCsvError(str(path), 1, "file is empty")
    except pd.errors.ParserError as e:
        match = _PARSER_LINE.search(str(e))
        line = int(match.group(1)) if match else 0
        raise MalformedCsvError(str(path), line, "unexpected number of fields")

    if frame.shape[1] != 2:
        raise MalformedCsvError(
            str(path), 1, f"expected 2 columns, found {frame.shape[1]}"
        )
    if frame.empty:
        raise MalformedCsvError(str(path), 2, "no data rows")

    # Data rows start on line 2; blank lines are skipped by the parser
    line_numbers = _data_line_numbers(path)
    wavelengths = np.empty(len(frame))
    values = np.empty(len(frame))
    for row, (raw_wavelength, raw_value) in enumerate(frame.itertuples(index=False)):
        line = line_numbers[row] if row < len(line_numbers) else row + 2
        try:
            wavelengths[row] = float(str(raw_wavelength).strip())
            values[row] = float(str(raw_value).strip())
        except ValueError:
            raise MalformedCsvError(
                str(path), line, f"non-numeric field '{raw_wavelength},{raw_value}'"
            )
        if not (np.isfinite(wavelengths[row]) and np.isfinite(values[row])):
            raise MalformedCsvError(str(path), line, "non-finite value")
        if values[row] < 0:
            raise MalformedCsvError(str(path), line, f"negative value {values[row]}")
        if wavelengths[row] <= 0:
            raise MalformedCsvError(
                str(path), line, f"non-positive wavelength {wavelengths[row]}"
            )

    if np.unique(wavelengths).size != wavelengths.size:
        raise MalformedCsvError(str(path), 0, "duplicate wavelengths")

    order = np.argsort(wavelengths)
    return wavelengths[order], values[order]


def _data_line_numbers(path: Path) -> List[int]:
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().splitlines()
    return [number for number, text in enumerate(lines, start=1) if number > 1 and text.strip()]


def load_spectrum_csv(
    path: Union[str, Path], grid: WavelengthGrid
) -> SpectralDistribution:
    """
    Load a spectrum CSV onto a grid, rescaling percent tables to 0-1.

    Args:
        path: CSV file path
        grid: Target grid

    Returns:
        SpectralDistribution on ``grid``
    """
    wavelengths, values = read_spectrum_csv(path)
    if values.max() > 1.0:
        logger.debug(f"Rescaling percent values in {path}")
        values = values / 100.0
    clipped = (wavelengths < grid.lambda_min) | (wavelengths > grid.lambda_max)
    if np.any(clipped & (values > 0)):
        logger.warning(
            f"{path}: samples outside {grid.lambda_min:g}-{grid.lambda_max:g} nm were clipped"
        )
    return SpectralDistribution.from_samples(wavelengths, values, grid)


def write_spectrum_csv(
    s: SpectralDistribution, path: Union[str, Path], column: str = "value"
) -> Path:
    """
    Write a spectrum as ``wavelength,<column>`` rows.

    Args:
        s: Spectrum to write
        path: Destination file
        column: Name of the value column

    Returns:
        Path written
    """
    path = Path(path)
    frame = pd.DataFrame({"wavelength": s.grid.wavelengths, column: s.values})
    frame.to_csv(path, index=False, lineterminator="\n", float_format="%.9g")
    return path
