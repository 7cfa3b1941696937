"""
Polygon domain entities.
Part of Domain layer - closed polygons with vertex parameters, and Gamma-sweep rows.
"""
from dataclasses import dataclass
from functools import cached_property

import numpy as np


@dataclass(frozen=True, eq=False)
class Polygon:
    """
    Closed polygon with vertices v_1..v_m at curve parameters a_1 < ... < a_m in [0, 1).
    Indexing is cyclic.
    """

    vertices: np.ndarray
    parameters: np.ndarray

    MIN_VERTICES = 3

    @classmethod
    def create(cls, vertices, parameters=None, min_vertices: int = None) -> "Polygon":
        """
        Factory method to create a polygon.
        Parameters default to a_i = i / m.
        """
        points = np.array(vertices, dtype=float)
        if points.ndim != 2 or points.shape[1] < 2:
            raise ValueError(f"Polygon vertices must be an (m, d) array with d >= 2, got {points.shape}")
        count = points.shape[0]
        floor = cls.MIN_VERTICES if min_vertices is None else min_vertices
        if count < floor:
            raise ValueError(f"Polygon needs at least {floor} vertices, got {count}")
        if not np.all(np.isfinite(points)):
            raise ValueError("Polygon vertices must be finite")

        params = np.arange(count) / count if parameters is None else np.array(parameters, dtype=float)
        if params.shape != (count,):
            raise ValueError("One parameter per vertex is required")
        if params[0] < 0 or params[-1] >= 1 or np.any(np.diff(params) <= 0):
            raise ValueError("Vertex parameters must be strictly increasing in [0, 1)")

        edges = np.linalg.norm(np.roll(points, -1, axis=0) - points, axis=1)
        if np.any(edges <= 0):
            raise ValueError("All polygon edges must have positive length")

        points.setflags(write=False)
        params.setflags(write=False)
        return cls(vertices=points, parameters=params)

    @classmethod
    def digon(cls, first, second, parameters) -> "Polygon":
        """Two-vertex polygon (traversed there and back), used for inscribed 2-gons."""
        return cls.create([first, second], parameters, min_vertices=2)

    @property
    def vertex_count(self) -> int:
        return self.vertices.shape[0]

    @cached_property
    def edges(self) -> np.ndarray:
        """Edge lengths |v_{i+1} - v_i|, cyclic."""
        return np.linalg.norm(np.roll(self.vertices, -1, axis=0) - self.vertices, axis=1)

    @property
    def perimeter(self) -> float:
        return float(np.sum(self.edges))

    @cached_property
    def cumulative(self) -> np.ndarray:
        """Polygonal arc length from v_1 to v_i along the edges."""
        return np.concatenate([[0.0], np.cumsum(self.edges)[:-1]])

    def chord_matrix(self) -> np.ndarray:
        deltas = self.vertices[:, None, :] - self.vertices[None, :, :]
        return np.linalg.norm(deltas, axis=2)

    def arc_matrix(self) -> np.ndarray:
        """Shorter-way polygonal arc length between every pair of vertices."""
        forward = np.mod(self.cumulative[None, :] - self.cumulative[:, None], self.perimeter)
        return np.minimum(forward, self.perimeter - forward)


@dataclass(frozen=True)
class GammaSweepRow:
    """Discrete energy of an inscribed m-gon against the curve's Moebius energy."""

    m: int
    e_m: float
    e_mobius: float
    gap: float
    remainder_estimate: float = 0.0

    @classmethod
    def create(cls, m: int, e_m: float, e_mobius: float, remainder_estimate: float = 0.0) -> "GammaSweepRow":
        return cls(m=m, e_m=e_m, e_mobius=e_mobius, gap=abs(e_m - e_mobius),
                   remainder_estimate=remainder_estimate)
