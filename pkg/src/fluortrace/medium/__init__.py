"""
Participating media for fluortrace.

This package provides homogeneous media with dissolved fluorophores,
transmittance, free-flight sampling, collision classification and the
Henyey-Greenstein phase function.
"""

from .medium import (
    Medium,
    MediumEvent,
    classify_event,
    classify_events,
    event_probabilities,
    sample_free_flight,
    transmittance,
    water_scattering,
)
from .phase import phase_eval, phase_sample, sample_isotropic

__all__ = [
    "Medium",
    "MediumEvent",
    "classify_event",
    "classify_events",
    "event_probabilities",
    "phase_eval",
    "phase_sample",
    "sample_free_flight",
    "sample_isotropic",
    "transmittance",
    "water_scattering",
]
