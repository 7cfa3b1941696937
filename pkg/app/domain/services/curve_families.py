"""
Analytic curve families sampled on the uniform grid j / N.
Part of Domain layer.

Every family is a function of t in [0, 1) returning the coordinate arrays,
so the sampler can evaluate it on any grid.
"""
import logging
from typing import Callable, List, Sequence

import numpy as np
from numpy import cos, pi, sin

from app.domain.entities.curve import ClosedCurve

logger = logging.getLogger(__name__)

Parametrization = Callable[[np.ndarray], List[np.ndarray]]

UNIT_CIRCLE_RADIUS = 1.0 / (2.0 * pi)


def circle_family(radius: float = UNIT_CIRCLE_RADIUS) -> Parametrization:
    return lambda t: [radius * cos(2 * pi * t), radius * sin(2 * pi * t)]


def ellipse_family(a: float = 2.0, b: float = 1.0) -> Parametrization:
    return lambda t: [a * cos(2 * pi * t), b * sin(2 * pi * t)]


def torus_knot_family(p: int = 2, q: int = 3, major: float = 2.0, minor: float = 1.0) -> Parametrization:
    def coordinates(t):
        tube = major + minor * cos(2 * pi * q * t)
        return [tube * cos(2 * pi * p * t), tube * sin(2 * pi * p * t), minor * sin(2 * pi * q * t)]

    return coordinates


def lacunary_family(terms: int = 4, decay: float = 0.5) -> Parametrization:
    """
    Unit circle lifted by a lacunary sum in the third coordinate:
    z(t) = sum_j decay^j sin(2 pi 2^j t) / (2 pi 2^j).
    """

    def coordinates(t):
        lift = np.zeros_like(np.asarray(t, dtype=float))
        for j in range(1, terms + 1):
            frequency = 2 ** j
            lift = lift + decay ** j * sin(2 * pi * frequency * t) / (2 * pi * frequency)
        return [UNIT_CIRCLE_RADIUS * cos(2 * pi * t), UNIT_CIRCLE_RADIUS * sin(2 * pi * t), lift]

    return coordinates


def generate_curve(
    family: Parametrization,
    sample_count: int,
    source: str,
    dimension: int = None,
    unit_speed: bool = False,
) -> ClosedCurve:
    """Sample a parametrization at t_j = j / N, padding with zero coordinates up to dimension."""
    t = np.arange(sample_count) / sample_count
    columns = [np.asarray(c, dtype=float) * np.ones_like(t) for c in family(t)]
    target = dimension or len(columns)
    if target < len(columns):
        raise ValueError(f"{source} needs at least {len(columns)} dimensions")
    columns.extend(np.zeros_like(t) for _ in range(target - len(columns)))
    return ClosedCurve.create(np.column_stack(columns), source=source, unit_speed=unit_speed)


def circle(sample_count: int = 512, radius: float = UNIT_CIRCLE_RADIUS, dimension: int = 2) -> ClosedCurve:
    """Round circle; the default radius gives the unit-length, unit-speed circle."""
    if radius <= 0:
        raise ValueError("Circle radius must be positive")
    unit = abs(radius - UNIT_CIRCLE_RADIUS) < 1e-15
    return generate_curve(
        circle_family(radius), sample_count, source=f"circle(r={radius:g})",
        dimension=dimension, unit_speed=unit,
    )


def ellipse(sample_count: int = 512, a: float = 2.0, b: float = 1.0, dimension: int = 2) -> ClosedCurve:
    if a <= 0 or b <= 0:
        raise ValueError("Ellipse semi-axes must be positive")
    return generate_curve(
        ellipse_family(a, b), sample_count, source=f"ellipse(a={a:g},b={b:g})", dimension=dimension
    )


def torus_knot(
    sample_count: int = 512,
    p: int = 2,
    q: int = 3,
    major: float = 2.0,
    minor: float = 1.0,
    dimension: int = 3,
) -> ClosedCurve:
    """(p, q) torus knot on the torus with radii major > minor > 0."""
    if np.gcd(p, q) != 1:
        raise ValueError(f"Torus knot needs coprime p, q; got ({p}, {q})")
    if not major > minor > 0:
        raise ValueError("Torus radii must satisfy major > minor > 0")
    if abs(p) + abs(q) >= sample_count // 2:
        raise ValueError("Sample count too small to resolve the torus knot")
    return generate_curve(
        torus_knot_family(p, q, major, minor), sample_count,
        source=f"torus_knot({p},{q})", dimension=dimension,
    )


def lacunary(sample_count: int = 512, terms: int = 4, decay: float = 0.5, dimension: int = 3) -> ClosedCurve:
    """Lacunary Fourier curve; highest mode 2^terms must stay below the Nyquist mode."""
    if terms < 1:
        raise ValueError("Lacunary curve needs at least one term")
    if not 0 < decay <= 1:
        raise ValueError("Lacunary decay must lie in (0, 1]")
    if 2 ** terms >= sample_count // 2:
        raise ValueError(
            f"Lacunary mode 2^{terms} is not resolved by {sample_count} samples"
        )
    return generate_curve(
        lacunary_family(terms, decay), sample_count,
        source=f"lacunary(K={terms},decay={decay:g})", dimension=dimension,
    )


def from_points(points: Sequence[Sequence[float]], source: str = "samples") -> ClosedCurve:
    return ClosedCurve.create(np.asarray(points, dtype=float), source=source)
