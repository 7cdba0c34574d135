"""
Fluorescent dye model and database for fluortrace.

This package provides the Fluorophore model, Beer-Lambert absorption of
dissolved dyes, the excitation-to-emission function, and the dye database
with the seven bundled Alexa Fluor datasets.
"""

from .database import FluorophoreDatabase, load_fluorophore, normalize_name
from .model import (
    DissolvedFluorophore,
    Fluorophore,
    excitation_to_emission,
    fluor_absorption_coefficient,
    sample_emission,
)

__all__ = [
    "DissolvedFluorophore",
    "Fluorophore",
    "FluorophoreDatabase",
    "excitation_to_emission",
    "fluor_absorption_coefficient",
    "load_fluorophore",
    "normalize_name",
    "sample_emission",
]
