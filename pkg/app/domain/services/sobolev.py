"""
Fractional Sobolev seminorms, the Douglas functional and VMO moduli on R/Z.
Part of Domain layer.

Double integrals use the tensor trapezoid rule over (x, w) with the torus
distance |w|, w in [-1/2, 1/2]. The cell w = 0 is excluded and its
contribution is bounded from the local Lipschitz constant of f.
"""
import logging
import math
from typing import Optional

import numpy as np

from app.domain.entities.seminorm import (
    LocalMeanReport,
    NormConvention,
    PeriodicFunction,
    SeminormResult,
)
from app.domain.exceptions import BadExponents, DimensionMismatch, ROutOfRange

logger = logging.getLogger(__name__)

MIN_GRID = 64
# Gauss-Legendre nodes per torus ball in local averages
BALL_QUADRATURE_POINTS = 256
VMO_CENTERS = 256


def _check_exponents(s: float, p: float) -> None:
    if not 0.0 < s < 1.0 or p < 1.0:
        raise BadExponents(f"Need 0 < s < 1 and p >= 1, got s={s}, p={p}")


def _check_grid(grid: int) -> None:
    if grid < MIN_GRID or grid % 2:
        raise ValueError(f"Seminorm grid must be even and >= {MIN_GRID}, got {grid}")


def _check_radius(r: float) -> None:
    if not 0.0 < r <= 0.5:
        raise ROutOfRange(f"Ball radius must lie in (0, 1/2], got {r}")


def _gagliardo_sum(values: np.ndarray, s: float, p: float, radius: Optional[float] = None) -> float:
    """
    Sum_j h/|w_j|^(1+sp) * Sum_i h |f(x_i + w_j) - f(x_i)|^p over offsets 0 < |w_j| <= radius.
    values has shape (grid, d).
    """
    grid = values.shape[0]
    h = 1.0 / grid
    total = 0.0
    for j in range(1, grid):
        offset = min(j, grid - j) * h
        if radius is not None and offset > radius + 1e-15:
            continue
        differences = np.roll(values, -j, axis=0) - values
        magnitudes = np.linalg.norm(differences, axis=1)
        total += h * float(np.sum(magnitudes ** p)) * h / offset ** (1.0 + s * p)
    return total


def _band_remainder(f: PeriodicFunction, s: float, p: float, grid: int) -> float:
    """Bound for the excluded band |w| < h/2 in p-th power form, from |f(x+w) - f(x)| ~ |f'(x)||w|."""
    h = 1.0 / grid
    slopes = np.linalg.norm(f.node_values(grid, order=1), axis=1)
    exponent = p * (1.0 - s)
    return float(np.mean(slopes ** p)) * 2.0 * (h / 2.0) ** exponent / exponent


def gagliardo_seminorm(f: PeriodicFunction, s: float, p: float, grid: int = 1024) -> SeminormResult:
    """
    |f|_{W^{s,p}} = (int int |f(x) - f(y)|^p / |x - y|^(1+sp))^(1/p) on the torus.

    The remainder estimate is the change of the root value when the band bound is added.
    """
    _check_exponents(s, p)
    _check_grid(grid)
    values = f.node_values(grid)
    pth = _gagliardo_sum(values, s, p)
    band = _band_remainder(f, s, p, grid)
    value = pth ** (1.0 / p)
    remainder = (pth + band) ** (1.0 / p) - value
    logger.debug(f"Gagliardo seminorm s={s}, p={p}, grid={grid}: {value:.10g} (+{remainder:.2e})")
    return SeminormResult(
        value=value, s=s, p=p, grid=grid, remainder_estimate=remainder,
        convention=NormConvention.ROOTED,
    )


def gagliardo_tail(f: PeriodicFunction, s: float, p: float, radius: float, grid: int = 1024) -> float:
    """Near-diagonal part (int int_{|w| <= radius} |f(z+w) - f(z)|^p / |w|^(1+sp))^(1/p)."""
    _check_exponents(s, p)
    _check_grid(grid)
    if radius <= 0:
        raise ROutOfRange(f"Tail radius must be positive, got {radius}")
    pth = _gagliardo_sum(f.node_values(grid), s, p, radius=min(radius, 0.5))
    return pth ** (1.0 / p)


def douglas_functional(f: PeriodicFunction, grid: int = 1024) -> SeminormResult:
    """Squared W^{1/2,2} seminorm (the Douglas functional without the root)."""
    rooted = gagliardo_seminorm(f, 0.5, 2.0, grid)
    squared = rooted.value ** 2
    remainder = (rooted.value + rooted.remainder_estimate) ** 2 - squared
    return SeminormResult(
        value=squared, s=0.5, p=2.0, grid=grid, remainder_estimate=remainder,
        convention=NormConvention.SQUARED,
    )


def _common_values(f: PeriodicFunction, g: PeriodicFunction, grid: int) -> np.ndarray:
    if f.dimension != g.dimension:
        raise DimensionMismatch(f"Cannot compare functions of dimension {f.dimension} and {g.dimension}")
    return f.node_values(grid) - g.node_values(grid)


def w12_distance(f: PeriodicFunction, g: PeriodicFunction, grid: int = 1024) -> float:
    """Rooted W^{1/2,2} seminorm of f - g."""
    _check_grid(grid)
    difference = _common_values(f, g, grid)
    return math.sqrt(_gagliardo_sum(difference, 0.5, 2.0))


def sobolev_norm(f: PeriodicFunction, order_plus_s: float, p: float = 2.0, grid: int = 1024) -> float:
    """
    ||f||_{W^{k+s,p}} = sum_{m <= k} ||f^(m)||_{L^p} + |f^(k)|_{W^{s,p}} for k in {0, 1}.
    """
    order = int(math.floor(order_plus_s))
    s = order_plus_s - order
    if order not in (0, 1):
        raise BadExponents(f"Only k in {{0, 1}} is supported, got k + s = {order_plus_s}")
    _check_exponents(s, p)
    _check_grid(grid)
    norm = 0.0
    for m in range(order + 1):
        values = f.node_values(grid, order=m)
        norm += float(np.mean(np.linalg.norm(values, axis=1) ** p)) ** (1.0 / p)
    top = f if order == 0 else f.derivative(order)
    norm += _gagliardo_sum(top.node_values(grid), s, p) ** (1.0 / p)
    return norm


def _ball_samples(f: PeriodicFunction, centers: np.ndarray, r: float, points: int):
    nodes, weights = np.polynomial.legendre.leggauss(points)
    params = centers[:, None] + r * nodes[None, :]
    values = f.evaluate(params.reshape(-1)).reshape(centers.size, points, f.dimension)
    return values, weights / 2.0


def local_mean(f: PeriodicFunction, x: float, r: float, points: int = BALL_QUADRATURE_POINTS) -> np.ndarray:
    """a_r = (1/2r) int_{B_r(x)} f on the torus."""
    _check_radius(r)
    values, weights = _ball_samples(f, np.array([float(x)]), r, points)
    return np.tensordot(weights, values[0], axes=(0, 0))


def local_mean_report(f: PeriodicFunction, x: float, r: float,
                      points: int = BALL_QUADRATURE_POINTS) -> LocalMeanReport:
    _check_radius(r)
    values, weights = _ball_samples(f, np.array([float(x)]), r, points)
    mean = np.tensordot(weights, values[0], axes=(0, 0))
    deviation = float(np.dot(weights, np.linalg.norm(values[0] - mean, axis=1)))
    return LocalMeanReport(
        center=float(x), radius=r, mean=mean,
        mean_norm=float(np.linalg.norm(mean)), mean_deviation=deviation,
    )


def vmo_modulus(f: PeriodicFunction, r: float, centers: int = VMO_CENTERS,
                points: int = BALL_QUADRATURE_POINTS) -> float:
    """sup over grid centers x of (1/2r) int_{B_r(x)} |f - a_r(x)|."""
    _check_radius(r)
    grid = np.arange(centers) / centers
    values, weights = _ball_samples(f, grid, r, points)
    means = np.einsum("q,cqd->cd", weights, values)
    deviations = np.einsum("q,cq->c", weights, np.linalg.norm(values - means[:, None, :], axis=2))
    return float(np.max(deviations))
