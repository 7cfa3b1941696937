"""
Domain errors for curve, energy and polygon computations.
Part of Domain layer.

Every error is a ValueError so callers that only know about bad input keep working.
"""
from typing import Any, List, Optional


class KnotEnergyError(ValueError):
    """Base class for all numerical domain errors."""


class NonRegular(KnotEnergyError):
    """Curve speed vanishes (or nearly vanishes) somewhere on the sample grid."""


class NonEmbedded(KnotEnergyError):
    """Curve comes too close to itself for the chord/arc ratio to be trusted."""


class EpsOutOfRange(KnotEnergyError):
    """Mollification width outside (0, 1/2)."""


class BadExponents(KnotEnergyError):
    """Sobolev exponents outside 0 < s < 1, p >= 1."""


class DimensionMismatch(KnotEnergyError):
    """Two sampled functions live in different target dimensions."""


class ROutOfRange(KnotEnergyError):
    """Ball radius outside (0, 1/2]."""


class CenterHit(KnotEnergyError):
    """Point to invert coincides with the inversion center."""


class CenterTooClose(KnotEnergyError):
    """Inversion center too close to a closed curve for an off-center inversion."""


class DomainTooLarge(KnotEnergyError):
    """Requested open window reaches into the excluded neighborhood of the inversion center."""


class CoincidentVertices(KnotEnergyError):
    """Two polygon vertices coincide."""


class NoForwardIntersection(KnotEnergyError):
    """No forward point at the requested chord distance within one loop."""


class BracketNotFound(KnotEnergyError):
    """Side-length scan found no sign change of the closing gap."""

    def __init__(self, message: str, scan: Optional[List[Any]] = None):
        super().__init__(message)
        self.scan = scan or []


class ConfigError(KnotEnergyError):
    """Invalid experiment or curve configuration."""

    def __init__(self, message: str, line: Optional[int] = None, field: Optional[str] = None):
        location = []
        if line is not None:
            location.append(f"line {line}")
        if field is not None:
            location.append(f"field '{field}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")
        self.line = line
        self.field = field


class NearDegenerateWarning(UserWarning):
    """Chord/arc ratio at or below the embedded threshold."""
