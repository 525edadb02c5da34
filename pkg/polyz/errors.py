# polyz/errors.py
from typing import Optional


class PolyZError(Exception):
    """Base class for every error raised by polyz."""


class PolyZParseError(PolyZError, ValueError):
    """Malformed word, presentation, matrix or automorphism text."""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


class DimensionMismatchError(PolyZError, ValueError):
    """Vector or matrix size does not match the tower it is used with."""


class NotAnAutomorphismError(PolyZError):
    """Matrix fails relation preservation or the supplied inverse images."""


class ClassificationError(PolyZError):
    """Matrix or element matches no automorphism family of the group."""


class UnsupportedPresentationError(PolyZError):
    """Presentation the engine cannot turn into a tower."""


class KernelMismatchError(PolyZError):
    """Closed-form kernel disagrees with the generic engine."""


class ConfigError(PolyZError, ValueError):
    """Invalid configuration value."""


class UnknownGroupError(PolyZError, ValueError):
    """Group name that is not a preset."""
