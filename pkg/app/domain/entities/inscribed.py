"""
Inscribed polygon entities.
Part of Domain layer.
"""
from dataclasses import dataclass, field
from typing import List

import numpy as np

from app.domain.entities.polygon import Polygon


@dataclass(frozen=True, eq=False)
class MarchResult:
    """Points reached by chord marching, with the closing gap |p_n - p_1| - s."""

    parameters: np.ndarray
    points: np.ndarray
    side: float
    closing_gap: float


@dataclass(frozen=True, eq=False)
class InscribedResult:
    """
    Equilateral n-gon inscribed in a curve starting at gamma(x0).
    Every chord but the closing one equals side by construction.
    """

    polygon: Polygon
    side: float
    closing_residual: float
    iterations: int
    start: float
    sides: List[float] = field(default_factory=list)

    @property
    def chord_lengths(self) -> np.ndarray:
        return self.polygon.edges

    @property
    def chord_spread(self) -> float:
        """(max chord - min chord) / side."""
        chords = self.chord_lengths
        return float((np.max(chords) - np.min(chords)) / self.side)
