"""
Exception classes for fluortrace.

This module contains all the exception classes raised by the spectral,
fluorophore, medium, scene, render, film and validation subsystems.
"""

from typing import Iterable, Optional


class FluorTraceError(Exception):
    """
    Base exception for fluortrace operations.

    Attributes:
        message: The error message
        recovery_suggestion: Optional suggestion for recovery
    """

    def __init__(self, message: str = "", recovery_suggestion: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.recovery_suggestion = recovery_suggestion

    def __str__(self) -> str:
        """Return formatted error message with recovery suggestion if available."""
        if self.recovery_suggestion:
            return f"{self.message}\nRecovery suggestion: {self.recovery_suggestion}"
        return self.message


class ZeroSpectrumError(FluorTraceError):
    """Raised when a spectrum that must carry energy integrates to zero."""

    pass


class SpectrumFileError(FluorTraceError):
    """Base class for spectra and dye database ingestion failures."""

    pass


class MissingFileError(SpectrumFileError):
    """Raised when a required spectrum or metadata file is absent."""

    def __init__(self, path: str):
        super().__init__(
            f"Required file not found: {path}",
            "Each dye directory needs excitation.csv, emission.csv and meta.yaml",
        )
        self.path = path


class MalformedCsvError(SpectrumFileError):
    """Raised when a spectrum CSV cannot be parsed."""

    def __init__(self, path: str, line: int, reason: str):
        super().__init__(f"{path}:{line}: {reason}")
        self.path = path
        self.line = line
        self.reason = reason


class InvariantViolationError(SpectrumFileError):
    """Raised when ingested dye data violates a physical invariant."""

    pass


class UnknownFluorophoreError(FluorTraceError):
    """Raised when a fluorophore name does not resolve against the database."""

    def __init__(self, name: str, known: Iterable[str] = ()):
        known = sorted(known)
        suggestion = f"Known fluorophores: {', '.join(known)}" if known else None
        super().__init__(f"Unknown fluorophore: {name}", suggestion)
        self.name = name


class VacuumMediumError(FluorTraceError):
    """Raised when free-flight sampling is requested where extinction is zero."""

    pass


class SceneError(FluorTraceError):
    """Base class for scene loading failures."""

    pass


class SceneParseError(SceneError):
    """Raised when a scene file is not well-formed structured text."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        location = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{location}")
        self.line = line
        self.column = column


class SceneValidationError(SceneError):
    """Raised when a scene entity violates its invariants."""

    def __init__(self, entity: str, reason: str):
        super().__init__(f"{entity}: {reason}")
        self.entity = entity
        self.reason = reason


class RenderConfigError(FluorTraceError):
    """Raised when render configuration is invalid."""

    pass


class NonConvergentError(FluorTraceError):
    """Raised when a quadrature oracle fails its grid-doubling check."""

    def __init__(self, message: str, relative_change: float):
        super().__init__(
            message,
            "Increase max_points or use a thinner medium",
        )
        self.relative_change = relative_change


class NoIlluminatedPixelsError(FluorTraceError):
    """Raised when no film pixel exceeds the illumination threshold."""

    pass


class FilmIOError(FluorTraceError):
    """Raised when film outputs cannot be written or read back."""

    pass


class ValidationFailedError(FluorTraceError):
    """Raised when a validation protocol cannot be carried out."""

    pass


class InvalidGridError(FluorTraceError):
    """Raised when a wavelength grid violates its invariants."""

    pass
