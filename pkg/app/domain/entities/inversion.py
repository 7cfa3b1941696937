"""
Sphere inversion entity.
Part of Domain layer.
"""
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class SphereInversion:
    """x -> c + r^2 (x - c) / |x - c|^2."""

    center: np.ndarray
    radius: float

    @classmethod
    def create(cls, center, radius: float) -> "SphereInversion":
        point = np.array(center, dtype=float).reshape(-1)
        if point.size < 2 or not np.all(np.isfinite(point)):
            raise ValueError("Inversion center must be a finite point of dimension >= 2")
        if not radius > 0:
            raise ValueError(f"Inversion radius must be positive, got {radius}")
        point.setflags(write=False)
        return cls(center=point, radius=float(radius))

    @property
    def dimension(self) -> int:
        return self.center.size
