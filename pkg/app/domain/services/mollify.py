"""
Mollification of closed curves by a smooth compactly supported bump.
Part of Domain layer.

Convolution is applied as a Fourier multiplier; the multiplier of the scaled
kernel is computed by adaptive cosine-weighted quadrature and cached per
(epsilon, mode count).
"""
import logging
import threading
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Tuple

import numpy as np
from scipy import integrate

from app.core.config import settings
from app.domain.entities.curve import ClosedCurve
from app.domain.entities.kernel import MollifierKernel, MollifySweepRow
from app.domain.entities.seminorm import PeriodicFunction
from app.domain.exceptions import EpsOutOfRange
from app.domain.services import spectral
from app.domain.services.sobolev import vmo_modulus

logger = logging.getLogger(__name__)

_MULTIPLIER_CACHE: Dict[Tuple[float, int], np.ndarray] = {}
_MULTIPLIER_LOCK = threading.Lock()


def _raw_bump(x):
    u = np.asarray(x, dtype=float)
    inside = np.abs(u) < 1.0
    safe = np.where(inside, 1.0 - u * u, 1.0)
    return np.where(inside, np.exp(-1.0 / safe), 0.0)


@lru_cache(maxsize=1)
def bump_normalization() -> float:
    """Z = integral of exp(-1 / (1 - u^2)) over (-1, 1)."""
    value, _ = integrate.quad(lambda u: float(_raw_bump(u)), -1.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200)
    return value


@lru_cache(maxsize=1)
def bump_second_moment() -> float:
    """Second moment of the unit-mass profile."""
    z = bump_normalization()
    value, _ = integrate.quad(
        lambda u: u * u * float(_raw_bump(u)) / z, -1.0, 1.0, epsabs=1e-15, epsrel=1e-13, limit=200
    )
    return value


def bump_profile(x):
    """Unit-mass bump exp(-1 / (1 - x^2)) / Z on (-1, 1), zero outside."""
    value = _raw_bump(x) / bump_normalization()
    return float(value) if np.ndim(value) == 0 else value


def kernel(eps: float) -> MollifierKernel:
    return MollifierKernel.create(eps, bump_second_moment())


def _check_eps(eps: float) -> None:
    if not 0.0 < eps < 0.5:
        raise EpsOutOfRange(f"epsilon must lie in (0, 1/2), got {eps}")


def _compute_multipliers(eps: float, mode_count: int) -> np.ndarray:
    values = np.empty(mode_count)
    values[0] = 1.0
    for k in range(1, mode_count):
        # the profile is even, so the transform is twice the cosine integral over (0, 1)
        half, _ = integrate.quad(
            bump_profile, 0.0, 1.0, weight="cos", wvar=2.0 * np.pi * k * eps, limit=200
        )
        values[k] = 2.0 * half
    return values


def kernel_multipliers(eps: float, mode_count: int) -> np.ndarray:
    """
    Fourier multipliers eta_eps^(k), k = 0..mode_count-1.

    Cached per (eps, mode_count). The quadrature runs outside the lock, so sweeps
    over different eps proceed in parallel; the first stored entry wins.
    """
    _check_eps(eps)
    key = (float(eps), int(mode_count))
    with _MULTIPLIER_LOCK:
        cached = _MULTIPLIER_CACHE.get(key)
    if cached is not None:
        return cached

    logger.debug(f"Computing {mode_count} kernel multipliers for eps={eps:g}")
    computed = _compute_multipliers(eps, mode_count)
    computed.setflags(write=False)
    with _MULTIPLIER_LOCK:
        return _MULTIPLIER_CACHE.setdefault(key, computed)


def mollify(curve: ClosedCurve, eps: float) -> ClosedCurve:
    """Periodic convolution gamma * eta_eps with the same sample count."""
    _check_eps(eps)
    multipliers = kernel_multipliers(eps, curve.sample_count // 2 + 1)
    smoothed = spectral.apply_multiplier(curve.samples, multipliers)
    return ClosedCurve.create(smoothed, source=f"mollified[{eps:g}]({curve.source})")


def speed_deviation(curve_eps: ClosedCurve, oversample: int = 4) -> float:
    """sup | |gamma_eps'(t)| - 1 | on a grid oversample times finer than the samples."""
    speeds = curve_eps.node_speeds(oversample * curve_eps.sample_count)
    return float(np.max(np.abs(speeds - 1.0)))


def _sweep_row(curve: ClosedCurve, eps: float) -> MollifySweepRow:
    smoothed = mollify(curve, eps)
    speeds = smoothed.node_speeds(4 * smoothed.sample_count)
    return MollifySweepRow(
        epsilon=eps,
        speed_min=float(np.min(speeds)),
        speed_max=float(np.max(speeds)),
        speed_deviation=float(np.max(np.abs(speeds - 1.0))),
    )


def min_speed_profile(
    curve: ClosedCurve, eps_grid: Iterable[float], map_fn: Callable = map
) -> List[MollifySweepRow]:
    """Speed range of gamma_eps for each eps, in the given order."""
    return list(map_fn(lambda eps: _sweep_row(curve, eps), list(eps_grid)))


def regularity_threshold(curve: ClosedCurve, eps_grid: Iterable[float], cut: float = None) -> float:
    """
    Largest grid eps such that gamma_eps and every gamma_eps' with smaller grid eps'
    have min speed above the cut. Returns 0.0 when no grid value qualifies.
    """
    threshold_speed = settings.REGULAR_SPEED_CUT if cut is None else cut
    grid = sorted({float(e) for e in eps_grid}, reverse=True)
    if not grid:
        return 0.0

    rows = min_speed_profile(curve, grid)
    minima = [row.speed_min for row in rows]
    if any(later < earlier for earlier, later in zip(minima, minima[1:])):
        logger.warning(
            f"Min speed of {curve.source} is not monotone along decreasing eps: {minima}"
        )

    threshold = 0.0
    for row in reversed(rows):
        if row.speed_min > threshold_speed:
            threshold = row.epsilon
        else:
            break
    logger.info(f"Regularity threshold for {curve.source}: eps0 = {threshold:g}")
    return threshold


def mollified_vmo_bound(curve: ClosedCurve, eps: float, r: float, centers: int = 128) -> Tuple[float, float]:
    """
    VMO moduli at radius r of gamma_eps' and gamma'. Averaging against a unit-mass
    kernel cannot raise the mean oscillation, so the first never exceeds the second.
    """
    smoothed = mollify(curve, eps)
    moduli = (
        vmo_modulus(PeriodicFunction.derivative_of(smoothed), r, centers=centers),
        vmo_modulus(PeriodicFunction.derivative_of(curve), r, centers=centers),
    )
    logger.debug(f"VMO at r={r:g} of {curve.source}: mollified {moduli[0]:.6g}, original {moduli[1]:.6g}")
    return moduli
