"""
Fluorophore database ingestion.

This module loads dye datasets from a directory tree laid out as
``<name>/excitation.csv``, ``<name>/emission.csv`` and ``<name>/meta.yaml``,
and provides a registry that resolves loose dye names against it.
"""

import logging
import re
import threading
from pathlib import Path
from typing import Dict, List, Optional, Union

import yaml

from ..config import get_config
from ..errors import (
    InvariantViolationError,
    MissingFileError,
    SpectrumFileError,
    UnknownFluorophoreError,
)
from ..spectral import DEFAULT_GRID, WavelengthGrid, load_spectrum_csv
from .model import Fluorophore

logger = logging.getLogger(__name__)

EXCITATION_FILE = "excitation.csv"
EMISSION_FILE = "emission.csv"
META_FILE = "meta.yaml"
REQUIRED_META_KEYS = ("epsilon_max", "quantum_yield", "molecular_weight")


def _read_meta(path: Path) -> Dict[str, object]:
    if not path.is_file():
        raise MissingFileError(str(path))
    try:
        with open(path, encoding="utf-8") as handle:
            meta = yaml.safe_load(handle)
    except yaml.YAMLError as e:
        raise SpectrumFileError(f"{path}: invalid metadata: {e}")

    if not isinstance(meta, dict):
        raise SpectrumFileError(f"{path}: metadata must be a key-value mapping")

    missing = [key for key in REQUIRED_META_KEYS if key not in meta]
    if missing:
        raise InvariantViolationError(f"{path}: missing metadata keys: {', '.join(missing)}")

    for key in REQUIRED_META_KEYS:
        try:
            meta[key] = float(meta[key])
        except (TypeError, ValueError):
            raise InvariantViolationError(f"{path}: {key} must be a number, got {meta[key]!r}")
    return meta


def load_fluorophore(
    dir_path: Union[str, Path],
    name: str,
    grid: WavelengthGrid = DEFAULT_GRID,
) -> Fluorophore:
    """
    Load one dye dataset from a database directory.

    Args:
        dir_path: Database root directory
        name: Dye directory name
        grid: Grid the spectra are resampled to

    Returns:
        Validated Fluorophore with peak-normalized excitation

    Raises:
        MissingFileError: If a spectrum or metadata file is absent
        MalformedCsvError: If a spectrum file cannot be parsed
        InvariantViolationError: If the dataset violates a dye invariant
    """
    dye_dir = Path(dir_path) / name
    logger.debug(f"Loading fluorophore {name} from {dye_dir}")

    meta = _read_meta(dye_dir / META_FILE)
    excitation = load_spectrum_csv(dye_dir / EXCITATION_FILE, grid)
    emission = load_spectrum_csv(dye_dir / EMISSION_FILE, grid)

    absorptivity = None
    absorptivity_file = meta.get("molar_absorptivity_csv")
    if absorptivity_file:
        absorptivity = load_spectrum_csv(dye_dir / str(absorptivity_file), grid)

    return Fluorophore(
        name=name,
        excitation=excitation,
        emission=emission,
        epsilon_max=meta["epsilon_max"],
        quantum_yield=meta["quantum_yield"],
        molecular_weight=meta["molecular_weight"],
        display_name=meta.get("name"),
        molar_absorptivity=absorptivity,
    )


def normalize_name(name: str) -> str:
    """
    Canonical form of a dye name.

    ``"Alexa Fluor 488"``, ``"alexa-488"`` and ``"AF488"`` all map to ``"alexa488"``.

    Args:
        name: Loose dye name

    Returns:
        Lowercase identifier without separators
    """
    key = re.sub(r"[\s_\-]+", "", name.strip().lower())
    key = re.sub(r"^(alexafluor|af)(?=\d)", "alexa", key)
    return key


class FluorophoreDatabase:
    """
    Registry of dye datasets under one database directory.

    Dyes are loaded on first use and cached; lookups accept loose names and
    bare numbers that identify a single dye.
    """

    def __init__(
        self,
        path: Optional[Union[str, Path]] = None,
        grid: WavelengthGrid = DEFAULT_GRID,
    ):
        """
        Initialize the registry.

        Args:
            path: Database directory. Uses the configured database if None.
            grid: Grid all dyes are resampled to
        """
        self.path = Path(path) if path is not None else get_config().database.path
        self.grid = grid
        self._dyes: Dict[str, Fluorophore] = {}
        self._lock = threading.Lock()

        if not self.path.is_dir():
            raise MissingFileError(str(self.path))

    def names(self) -> List[str]:
        """
        List dye identifiers available in the database.

        Returns:
            Sorted list of dye directory names
        """
        return sorted(
            entry.name
            for entry in self.path.iterdir()
            if entry.is_dir() and (entry / META_FILE).is_file()
        )

    def resolve(self, name: str) -> str:
        """
        Resolve a loose dye name to a database identifier.

        Args:
            name: Dye name, identifier or bare number

        Returns:
            Database identifier

        Raises:
            UnknownFluorophoreError: If no single dye matches
        """
        known = self.names()
        if name in known:
            return name

        key = normalize_name(str(name))
        by_key = {normalize_name(known_name): known_name for known_name in known}
        if key in by_key:
            return by_key[key]

        if key.isdigit():
            matches = [
                known_name
                for known_key, known_name in by_key.items()
                if re.sub(r"^\D+", "", known_key) == key
            ]
            if len(matches) == 1:
                return matches[0]

        raise UnknownFluorophoreError(str(name), known)

    def get(self, name: str) -> Fluorophore:
        """
        Get a dye by loose name, loading it on first use.

        Args:
            name: Dye name

        Returns:
            Fluorophore instance

        Raises:
            UnknownFluorophoreError: If the name does not resolve
        """
        identifier = self.resolve(name)
        with self._lock:
            dye = self._dyes.get(identifier)
            if dye is None:
                dye = load_fluorophore(self.path, identifier, self.grid)
                self._dyes[identifier] = dye
                logger.info(
                    f"Loaded fluorophore {dye.label}: excitation peak "
                    f"{dye.excitation_peak:g} nm, emission peak {dye.emission_peak:g} nm"
                )
        return dye

    def __contains__(self, name: str) -> bool:
        """Check whether a loose name resolves."""
        try:
            self.resolve(name)
        except UnknownFluorophoreError:
            return False
        return True

    def __len__(self) -> int:
        """Return number of datasets in the database."""
        return len(self.names())

    def __iter__(self):
        """Iterate over all dyes, loading them."""
        return iter(self.get(name) for name in self.names())

    def __repr__(self) -> str:
        """String representation of the registry."""
        return f"FluorophoreDatabase(path='{self.path}', dyes={len(self)})"
