"""
Evaluation, arc length and chord-arc geometry of sampled closed curves.
Part of Domain layer.
"""
import logging
import warnings
from typing import Union

import numpy as np
from scipy.interpolate import PchipInterpolator

from app.core.config import settings
from app.domain.entities.curve import ClosedCurve, CurveGeometryReport, ParamPoint, param_value
from app.domain.exceptions import NearDegenerateWarning, NonRegular
from app.domain.services import spectral

logger = logging.getLogger(__name__)

Param = Union[float, ParamPoint, np.ndarray]

# Newton steps applied after the monotone interpolation guess in ArcLengthMap.inverse
_NEWTON_STEPS = 4


def _params(t: Param):
    if isinstance(t, ParamPoint):
        return param_value(t)
    return t


def evaluate(curve: ClosedCurve, t: Param) -> np.ndarray:
    """Position of the interpolating curve at t (scalar -> (d,), array -> (m, d))."""
    return spectral.evaluate_series(curve.coefficients, _params(t), 0)


def derivative(curve: ClosedCurve, t: Param, order: int = 1) -> np.ndarray:
    """Derivative of the given order of the interpolating curve at t."""
    if order < 1:
        raise ValueError("Derivative order must be at least 1")
    return spectral.evaluate_series(curve.coefficients, _params(t), order)


def length(curve: ClosedCurve) -> float:
    """Length of the curve (trapezoid rule on the periodic grid, spectrally accurate)."""
    return float(np.mean(curve.node_speeds()))


def check_regular(speeds: np.ndarray, source: str = "curve") -> None:
    """Raise NonRegular when the minimum speed is not bounded away from zero."""
    top = float(np.max(speeds))
    bottom = float(np.min(speeds))
    if top <= 0 or bottom <= settings.REGULARITY_RATIO * top:
        raise NonRegular(
            f"{source} is not regular: min speed {bottom:.3e}, max speed {top:.3e}"
        )


class ArcLengthMap:
    """
    Monotone map s: [0, 1] -> [0, L], s(t) = integral of |gamma'| from 0 to t.

    The speed is sampled on an oversampled grid, expanded in a Fourier series
    and integrated term by term, so s(t + 1) = s(t) + L holds exactly.
    """

    def __init__(self, curve: ClosedCurve, oversample: int = 4, require_regular: bool = True):
        self.curve = curve
        self.fine_count = oversample * curve.sample_count
        speeds = curve.node_speeds(self.fine_count)
        if require_regular:
            check_regular(speeds, curve.source)

        speed_coeffs = spectral.coefficients(speeds)
        self.total = float(speed_coeffs[0].real)
        k = np.arange(speed_coeffs.shape[0])
        periodic = np.zeros_like(speed_coeffs)
        periodic[1:] = speed_coeffs[1:] / (2j * np.pi * k[1:])
        self._periodic = periodic
        self._offset = float(np.sum(periodic).real)
        self._speed_coeffs = speed_coeffs
        self._inverse_guess = None

    def __call__(self, t) -> np.ndarray:
        params = np.asarray(t, dtype=float)
        return self.total * params + spectral.evaluate_series(self._periodic, params) - self._offset

    def nodes(self, count: int) -> np.ndarray:
        """s(j / count) for j = 0..count-1."""
        grid = np.arange(count) / count
        periodic = spectral.node_values(self._periodic, self.fine_count, count)
        return self.total * grid + periodic - self._offset

    def speed(self, t) -> np.ndarray:
        return np.linalg.norm(derivative(self.curve, np.asarray(t, dtype=float)), axis=-1)

    def inverse(self, s) -> np.ndarray:
        """Parameter t in [0, 1] with s(t) = s, for s in [0, L]."""
        if self._inverse_guess is None:
            arc = np.append(self.nodes(self.fine_count), self.total)
            grid = np.arange(self.fine_count + 1) / self.fine_count
            self._inverse_guess = PchipInterpolator(arc, grid)

        targets = np.asarray(s, dtype=float)
        t = np.clip(self._inverse_guess(np.clip(targets, 0.0, self.total)), 0.0, 1.0)
        for _ in range(_NEWTON_STEPS):
            t = t - (self(t) - targets) / self.speed(t)
        return t

    def intrinsic_distance(self, x, y) -> np.ndarray:
        """Length of the shorter arc between parameters x and y."""
        gap = np.mod(np.abs(self(y) - self(x)), self.total)
        return np.minimum(gap, self.total - gap)


def arc_length_param(curve: ClosedCurve) -> ArcLengthMap:
    """Arc-length map of a regular curve. Raises NonRegular otherwise."""
    return ArcLengthMap(curve)


def reparametrize_by_arclength(curve: ClosedCurve) -> ClosedCurve:
    """
    Unit-length, arc-length parametrized copy: sigma -> gamma(t(sigma L)) / L.

    The result keeps gamma(0) / L as its base point and is flagged unit-speed
    when its sampled speed is within the configured tolerance of 1.
    """
    arc = arc_length_param(curve)
    count = curve.sample_count
    sigma = np.arange(count) / count
    params = arc.inverse(sigma * arc.total)
    points = evaluate(curve, params) / arc.total

    candidate = ClosedCurve.create(points, source=f"arclength({curve.source})")
    deviation = float(np.max(np.abs(candidate.node_speeds() - 1.0)))
    logger.debug(f"Arc-length reparametrization of {curve.source}: speed deviation {deviation:.3e}")
    if deviation <= settings.UNIT_SPEED_TOLERANCE:
        return ClosedCurve.create(points, source=candidate.source, unit_speed=True)
    return candidate


def chord_arc_report(
    curve: ClosedCurve, grid: int = 256, tolerance: float = None
) -> CurveGeometryReport:
    """
    Chord-arc constant inf |gamma(x) - gamma(y)| / d(x, y) over a uniform grid,
    where d is the intrinsic (shorter-arc) distance.

    Emits NearDegenerateWarning when the constant is at or below the tolerance.
    """
    if grid < 4:
        raise ValueError("Chord-arc grid must have at least 4 points")
    threshold = settings.EMBEDDED_THRESHOLD if tolerance is None else tolerance

    arc = ArcLengthMap(curve, require_regular=False)
    points = spectral.node_values(curve.coefficients, curve.sample_count, grid)
    positions = arc(np.arange(grid) / grid)

    best = np.inf
    for i in range(grid - 1):
        chords = np.linalg.norm(points[i + 1:] - points[i], axis=1)
        gaps = np.abs(positions[i + 1:] - positions[i])
        arcs = np.minimum(gaps, arc.total - gaps)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(arcs > 0, chords / arcs, 0.0)
        best = min(best, float(np.min(ratios)))

    bilipschitz = min(best, 1.0)
    near = bilipschitz <= threshold
    if near:
        message = (
            f"{curve.source} is near-degenerate: chord-arc constant {bilipschitz:.3e} "
            f"<= {threshold:.1e}"
        )
        logger.warning(message)
        warnings.warn(message, NearDegenerateWarning, stacklevel=2)

    return CurveGeometryReport(
        length=arc.total,
        bilipschitz_constant=bilipschitz,
        max_distortion=np.inf if bilipschitz <= 0 else 1.0 / bilipschitz,
        grid=grid,
        near_degenerate=near,
    )
