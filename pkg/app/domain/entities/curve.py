"""
Curve domain entities.
Part of Domain layer - sampled closed and open curves with their invariants.
"""
from dataclasses import dataclass
from functools import cached_property
from typing import Optional, Union

import numpy as np

from app.core.config import settings
from app.domain.services import spectral


@dataclass(frozen=True)
class ParamPoint:
    """A point of the parameter circle R/Z, stored in canonical form [0, 1)."""

    t: float

    @classmethod
    def of(cls, value: Union[float, "ParamPoint"]) -> "ParamPoint":
        if isinstance(value, ParamPoint):
            return value
        return cls(t=canonical_param(value))


def canonical_param(value: float) -> float:
    """Reduce a parameter to [0, 1)."""
    reduced = float(value) % 1.0
    # -1e-20 % 1.0 rounds to 1.0
    return 0.0 if reduced >= 1.0 else reduced


def param_value(value: Union[float, ParamPoint]) -> float:
    return value.t if isinstance(value, ParamPoint) else float(value)


def _readonly(values: np.ndarray) -> np.ndarray:
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class ClosedCurve:
    """
    Closed curve R/Z -> R^d given by N equally spaced samples.

    The samples are the values of a trigonometric interpolant, which is the
    curve all evaluations and derivatives refer to.
    """

    samples: np.ndarray
    source: str = "samples"
    unit_speed: bool = False

    MIN_SAMPLES = 16

    @classmethod
    def create(
        cls,
        samples,
        source: str = "samples",
        unit_speed: bool = False,
        speed_tolerance: Optional[float] = None,
    ) -> "ClosedCurve":
        """
        Factory method to create a closed curve.
        Validates shape, finiteness and (when flagged) unit speed.
        """
        values = np.array(samples, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"Curve samples must be a 2-D array, got shape {values.shape}")

        count, dimension = values.shape
        if count < cls.MIN_SAMPLES or not spectral.is_power_of_two(count):
            raise ValueError(
                f"Sample count must be a power of two >= {cls.MIN_SAMPLES}, got {count}"
            )
        if not 2 <= dimension <= settings.MAX_DIMENSION:
            raise ValueError(
                f"Dimension must be between 2 and {settings.MAX_DIMENSION}, got {dimension}"
            )
        if not np.all(np.isfinite(values)):
            raise ValueError("Curve samples must be finite")

        curve = cls(samples=_readonly(values), source=source, unit_speed=unit_speed)

        if unit_speed:
            tolerance = settings.UNIT_SPEED_TOLERANCE if speed_tolerance is None else speed_tolerance
            deviation = float(np.max(np.abs(curve.node_speeds() - 1.0)))
            if deviation > tolerance:
                raise ValueError(
                    f"Curve flagged unit-speed but speed deviates by {deviation:.3e} "
                    f"(tolerance {tolerance:.1e})"
                )

        return curve

    @property
    def sample_count(self) -> int:
        return self.samples.shape[0]

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.sample_count) / self.sample_count

    @cached_property
    def coefficients(self) -> np.ndarray:
        return _readonly(spectral.coefficients(self.samples))

    def node_derivative(self, order: int = 1, count: Optional[int] = None) -> np.ndarray:
        """Derivative of the given order at count uniform nodes (default: the sample nodes)."""
        return spectral.node_values(
            self.coefficients, self.sample_count, count or self.sample_count, order
        )

    def node_speeds(self, count: Optional[int] = None) -> np.ndarray:
        return np.linalg.norm(self.node_derivative(1, count), axis=1)

    def with_samples(self, samples, source: str, unit_speed: bool = False) -> "ClosedCurve":
        return ClosedCurve.create(samples, source=source, unit_speed=unit_speed)

    def scaled(self, factor: float) -> "ClosedCurve":
        if factor <= 0:
            raise ValueError("Scale factor must be positive")
        return ClosedCurve.create(self.samples * factor, source=f"{factor:g}*{self.source}")

    def translated(self, offset) -> "ClosedCurve":
        shift = np.asarray(offset, dtype=float)
        if shift.shape != (self.dimension,):
            raise ValueError(f"Offset must have {self.dimension} components")
        return ClosedCurve.create(
            self.samples + shift, source=self.source, unit_speed=self.unit_speed
        )

    def padded(self, dimension: int) -> "ClosedCurve":
        """Embed into a higher dimension by appending zero coordinates."""
        if dimension < self.dimension:
            raise ValueError("Cannot pad to a lower dimension")
        extra = np.zeros((self.sample_count, dimension - self.dimension))
        return ClosedCurve.create(
            np.hstack([self.samples, extra]), source=self.source, unit_speed=self.unit_speed
        )


@dataclass(frozen=True, eq=False)
class OpenCurve:
    """
    Curve on the window [-half_width, half_width] sampled at equally spaced
    parameters, used for images of closed curves under inversions centered on
    the curve. Unit-speed open curves are parametrized by arc length.
    """

    samples: np.ndarray
    half_width: float
    tangents: np.ndarray
    source: str = "open"
    unit_speed: bool = True

    MIN_SAMPLES = 17
    SPACING_TOLERANCE = 1e-3

    @classmethod
    def create(
        cls,
        samples,
        half_width: float,
        tangents=None,
        source: str = "open",
        unit_speed: bool = True,
    ) -> "OpenCurve":
        """
        Factory method to create an open curve.
        Unit-speed curves must have chords between neighbours close to the grid spacing.
        """
        values = np.array(samples, dtype=float)
        if values.ndim != 2:
            raise ValueError(f"Curve samples must be a 2-D array, got shape {values.shape}")
        count, dimension = values.shape
        if count < cls.MIN_SAMPLES:
            raise ValueError(f"Open curve needs at least {cls.MIN_SAMPLES} samples")
        if not 2 <= dimension <= settings.MAX_DIMENSION:
            raise ValueError(
                f"Dimension must be between 2 and {settings.MAX_DIMENSION}, got {dimension}"
            )
        if half_width <= 0:
            raise ValueError("Window half width must be positive")
        if not np.all(np.isfinite(values)):
            raise ValueError("Curve samples must be finite")

        spacing = 2.0 * half_width / (count - 1)

        if tangents is None:
            derivative = np.gradient(values, spacing, axis=0, edge_order=2)
        else:
            derivative = np.array(tangents, dtype=float)
            if derivative.shape != values.shape:
                raise ValueError("Tangents must match the sample shape")
        norms = np.linalg.norm(derivative, axis=1)
        if np.any(norms <= 0):
            raise ValueError("Tangent vanishes somewhere on the open curve")
        unit = derivative / norms[:, None]

        if unit_speed:
            chords = np.linalg.norm(np.diff(values, axis=0), axis=1) / spacing
            deviation = float(np.max(np.abs(chords - 1.0)))
            if deviation > cls.SPACING_TOLERANCE:
                raise ValueError(
                    f"Open curve flagged unit-speed but neighbour chords deviate by "
                    f"{deviation:.3e} from the grid spacing"
                )

        return cls(
            samples=_readonly(values),
            half_width=float(half_width),
            tangents=_readonly(unit),
            source=source,
            unit_speed=unit_speed,
        )

    @classmethod
    def straight_line(
        cls, half_width: float, count: int, dimension: int = 3, offset=None
    ) -> "OpenCurve":
        """Unit-speed straight line along the first axis."""
        params = np.linspace(-half_width, half_width, count)
        values = np.zeros((count, dimension))
        values[:, 0] = params
        if offset is not None:
            values = values + np.asarray(offset, dtype=float)
        tangents = np.zeros((count, dimension))
        tangents[:, 0] = 1.0
        return cls.create(values, half_width, tangents=tangents, source="line")

    @property
    def sample_count(self) -> int:
        return self.samples.shape[0]

    @property
    def dimension(self) -> int:
        return self.samples.shape[1]

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / (self.sample_count - 1)

    @property
    def nodes(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, self.sample_count)

    def curvature_squared(self) -> np.ndarray:
        """|d tau / ds|^2 from second-order differences of the unit tangents."""
        turning = np.gradient(self.tangents, self.spacing, axis=0, edge_order=2)
        return np.sum(turning * turning, axis=1)


@dataclass(frozen=True)
class CurveGeometryReport:
    """Chord-arc summary of a closed curve."""

    length: float
    bilipschitz_constant: float
    max_distortion: float
    grid: int
    near_degenerate: bool = False
