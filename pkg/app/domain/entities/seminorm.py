"""
Sobolev-scale entities: periodic functions and seminorm results.
Part of Domain layer.
"""
from dataclasses import dataclass
from enum import Enum
from functools import cached_property

import numpy as np

from app.domain.services import spectral


class NormConvention(str, Enum):
    """Whether a double-integral functional is reported squared or as its root."""

    ROOTED = "rooted"
    SQUARED = "squared"


@dataclass(frozen=True, eq=False)
class PeriodicFunction:
    """Uniform samples of f: R/Z -> R^d, interpolated trigonometrically (typically f = gamma')."""

    samples: np.ndarray

    @classmethod
    def create(cls, samples) -> "PeriodicFunction":
        values = np.array(samples, dtype=float)
        if values.ndim == 1:
            values = values[:, None]
        if values.ndim != 2:
            raise ValueError(f"Periodic function samples must be 1-D or 2-D, got {values.shape}")
        if values.shape[0] < 16 or not spectral.is_power_of_two(values.shape[0]):
            raise ValueError(
                f"Sample count must be a power of two >= 16, got {values.shape[0]}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("Periodic function samples must be finite")
        values.setflags(write=False)
        return cls(samples=values)

    @classmethod
    def derivative_of(cls, curve, order: int = 1) -> "PeriodicFunction":
        """Samples of the order-th derivative of a ClosedCurve at its nodes."""
        return cls.create(curve.node_derivative(order))

    @property
    def sample_count(self) -> int:
        return self.samples.shape[0]

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    @cached_property
    def coefficients(self) -> np.ndarray:
        return spectral.coefficients(self.samples)

    def evaluate(self, t) -> np.ndarray:
        return spectral.evaluate_series(self.coefficients, t)

    def node_values(self, count: int, order: int = 0) -> np.ndarray:
        return spectral.node_values(self.coefficients, self.sample_count, count, order)

    def derivative(self, order: int = 1) -> "PeriodicFunction":
        return PeriodicFunction.create(self.node_values(self.sample_count, order))


@dataclass(frozen=True)
class SeminormResult:
    """A Gagliardo-type double integral with the quadrature it was computed on."""

    value: float
    s: float
    p: float
    grid: int
    diagonal_policy: str = "exclude-band"
    remainder_estimate: float = 0.0
    convention: NormConvention = NormConvention.ROOTED

    def __post_init__(self):
        if self.value < 0:
            raise ValueError("Seminorm value must be non-negative")


@dataclass(frozen=True)
class LocalMeanReport:
    """Local mean a_r of f on the torus ball B_r(x) and the mean deviation from it."""

    center: float
    radius: float
    mean: np.ndarray
    mean_norm: float
    mean_deviation: float

    @property
    def unit_bound_slack(self) -> float:
        """deviation - (1 - |a_r|); non-negative whenever f is a unit vector field."""
        return self.mean_deviation - (1.0 - self.mean_norm)
