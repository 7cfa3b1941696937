"""
Inscribed equilateral polygons by chord marching and shooting on the side length.
Part of Domain layer.

Starting at gamma(x0) the march repeatedly jumps to the first forward point at
chord distance s. The side length is then tuned until the last point closes
the polygon: every sign change of the closing gap on a logarithmic scan of s
is refined by Brent's method.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from app.core.config import settings
from app.domain.entities.curve import ClosedCurve, ParamPoint, param_value
from app.domain.entities.inscribed import InscribedResult, MarchResult
from app.domain.entities.polygon import Polygon
from app.domain.entities.seminorm import PeriodicFunction
from app.domain.exceptions import BracketNotFound, CoincidentVertices, NoForwardIntersection
from app.domain.services.curve_core import evaluate, length
from app.domain.services.sobolev import vmo_modulus

logger = logging.getLogger(__name__)

# Dense lookup table resolution, in multiples of the sample count
LOOP_DENSITY = 16
VMO_PROXY_RADII = (1.0 / 8, 1.0 / 16, 1.0 / 32, 1.0 / 64)
_ROOT_RTOL = 4.0 * np.finfo(float).eps


class _DenseLoop:
    """Node values of the interpolant on a fine grid, for bracketing chord crossings."""

    def __init__(self, curve: ClosedCurve):
        self.curve = curve
        self.count = LOOP_DENSITY * curve.sample_count
        self.points = curve.node_derivative(0, self.count)

    def diameter(self, probes: int = 512) -> float:
        stride = max(1, self.count // probes)
        subset = self.points[::stride]
        best = 0.0
        for i in range(len(subset) - 1):
            best = max(best, float(np.max(np.linalg.norm(subset[i + 1:] - subset[i], axis=1))))
        return best


def _next_crossing(loop: _DenseLoop, t_current: float, anchor: np.ndarray, s: float, t_end: float) -> float:
    """Smallest t in (t_current, t_end) with |gamma(t) - anchor| = s."""
    first = int(np.floor(t_current * loop.count)) + 1
    last = int(np.ceil(t_end * loop.count)) - 1
    if last < first:
        raise NoForwardIntersection(f"No room left on the loop for chord {s:.6g}")

    indices = np.arange(first, last + 1)
    gaps = np.linalg.norm(loop.points[indices % loop.count] - anchor, axis=1) - s
    hits = np.flatnonzero(gaps >= 0.0)
    if hits.size == 0:
        raise NoForwardIntersection(f"No forward point at chord distance {s:.6g} within one loop")

    hit = hits[0]
    upper = indices[hit] / loop.count
    lower = t_current if hit == 0 else indices[hit - 1] / loop.count

    def gap(t):
        return float(np.linalg.norm(evaluate(loop.curve, t) - anchor)) - s

    if gap(lower) >= 0.0:
        return lower
    if gap(upper) <= 0.0:
        return upper
    return brentq(gap, lower, upper, xtol=1e-15, rtol=_ROOT_RTOL, maxiter=200)


def march(curve: ClosedCurve, x0, s: float, n: int, loop: Optional[_DenseLoop] = None) -> MarchResult:
    """
    n points gamma(t_1 = x0), gamma(t_2), ... with consecutive chords equal to s,
    each t_{k+1} the first forward parameter at that distance. Returns the
    closing gap |gamma(t_n) - gamma(x0)| - s.
    """
    if s <= 0:
        raise ValueError("Side length must be positive")
    if n < 2:
        raise ValueError(f"Need n >= 2, got {n}")
    loop = loop or _DenseLoop(curve)
    start = param_value(ParamPoint.of(x0))
    params = [start]
    points = [evaluate(curve, start)]
    for _ in range(n - 1):
        t_next = _next_crossing(loop, params[-1], points[-1], s, start + 1.0)
        params.append(t_next)
        points.append(evaluate(curve, t_next))
    points_array = np.array(points)
    closing = float(np.linalg.norm(points_array[-1] - points_array[0])) - s
    return MarchResult(parameters=np.array(params), points=points_array, side=s, closing_gap=closing)


def check_vmo_proxy(curve: ClosedCurve) -> bool:
    """True when the VMO modulus of gamma' decreases along shrinking radii."""
    velocity = PeriodicFunction.derivative_of(curve)
    moduli = [vmo_modulus(velocity, r, centers=64, points=64) for r in VMO_PROXY_RADII]
    decreasing = all(b <= a for a, b in zip(moduli, moduli[1:]))
    if not decreasing:
        logger.warning(f"VMO modulus of {curve.source} is not decreasing: {moduli}")
    return decreasing


def _inscribed_digon(curve: ClosedCurve, loop: _DenseLoop, start: float) -> InscribedResult:
    origin = evaluate(curve, start)
    distances = np.linalg.norm(loop.points - origin, axis=1)
    best = int(np.argmax(distances)) / loop.count
    step = 1.0 / loop.count
    refined = minimize_scalar(
        lambda t: -float(np.linalg.norm(evaluate(curve, t) - origin)),
        bounds=(best - step, best + step),
        method="bounded",
        options={"xatol": 1e-14},
    )
    offset = (refined.x - start) % 1.0
    far = evaluate(curve, start + offset)
    side = float(np.linalg.norm(far - origin))
    polygon = Polygon.digon(origin, far, [0.0, offset])
    return InscribedResult(
        polygon=polygon, side=side, closing_residual=0.0, iterations=int(refined.nfev),
        start=start, sides=[side],
    )


def inscribed_ngon(
    curve: ClosedCurve,
    x0,
    n: int,
    scan_points: int = None,
    tolerance: float = None,
) -> InscribedResult:
    """
    Equilateral n-gon inscribed in the curve with first vertex gamma(x0).

    Scans scan_points side lengths, log-spaced between L/(4n) and the diameter,
    and refines every sign change of the closing gap. The smallest solution is
    returned; every side closing within tolerance * L is listed in InscribedResult.sides.
    """
    if n < 2:
        raise ValueError(f"Need n >= 2, got {n}")
    points_count = scan_points or settings.INSCRIBE_SCAN_POINTS
    tol = settings.INSCRIBE_TOLERANCE if tolerance is None else tolerance
    start = param_value(ParamPoint.of(x0))
    loop = _DenseLoop(curve)

    if n == 2:
        return _inscribed_digon(curve, loop, start)

    check_vmo_proxy(curve)
    total = length(curve)
    sides = np.geomspace(total / (4.0 * n), loop.diameter(), points_count)

    scan: List[Tuple[float, Optional[float]]] = []
    failures = 0
    for s in sides:
        try:
            scan.append((float(s), march(curve, start, s, n, loop).closing_gap))
        except NoForwardIntersection:
            failures += 1
            scan.append((float(s), None))
    if failures:
        logger.warning(f"{failures} of {points_count} side lengths could not be marched on {curve.source}")

    brackets = [
        (a, b) for (a, ga), (b, gb) in zip(scan, scan[1:])
        if ga is not None and gb is not None and ga * gb <= 0.0
    ]
    if not brackets:
        raise BracketNotFound(
            f"No sign change of the closing gap for n={n} on {curve.source}", scan=scan
        )

    solutions = []
    for a, b in brackets:
        root, info = brentq(
            lambda s: march(curve, start, s, n, loop).closing_gap,
            a, b, xtol=1e-14 * total, rtol=_ROOT_RTOL, maxiter=200, full_output=True,
        )
        marched = march(curve, start, root, n, loop)
        # sign changes across a jump of the gap are not closing sides
        if abs(marched.closing_gap) > tol * total:
            logger.debug(f"Discarding side {root:.6g}: residual {abs(marched.closing_gap):.3e}")
            continue
        solutions.append((root, info.iterations, marched))
    logger.debug(f"Inscribed {n}-gon roots on {curve.source}: {[s for s, _, _ in solutions]}")
    if not solutions:
        raise BracketNotFound(
            f"No side length closes the {n}-gon within {tol:.1e} * L on {curve.source}", scan=scan
        )

    side, iterations, final = solutions[0]
    residual = abs(final.closing_gap)

    polygon = Polygon.create(final.points, final.parameters - start)
    return InscribedResult(
        polygon=polygon, side=side, closing_residual=residual, iterations=iterations,
        start=start, sides=[s for s, _, _ in solutions],
    )


def gromov_distortion(p: Polygon) -> float:
    """max over vertex pairs of d_p(i, j) / |v_i - v_j|."""
    chords = p.chord_matrix()
    off_diagonal = ~np.eye(p.vertex_count, dtype=bool)
    if np.any(chords[off_diagonal] <= 0.0):
        raise CoincidentVertices("Polygon has coincident vertices")
    return float(np.max(p.arc_matrix()[off_diagonal] / chords[off_diagonal]))


def _random_equilateral(rng: np.random.Generator, n: int, dimension: int, sweeps: int = 500):
    edges = rng.normal(size=(n, dimension))
    for _ in range(sweeps):
        edges /= np.linalg.norm(edges, axis=1, keepdims=True)
        closure = np.sum(edges, axis=0)
        if np.linalg.norm(closure) < 1e-12:
            return np.vstack([np.zeros(dimension), np.cumsum(edges, axis=0)[:-1]])
        edges -= closure / n
    return None


def estimate_distortion_floor(n: int, trials: int = 200, seed: int = None, dimension: int = 3) -> float:
    """
    Smallest Gromov distortion among random closed equilateral n-gons
    (edges alternately normalized and re-centered until they close).
    """
    if n < Polygon.MIN_VERTICES:
        raise ValueError(f"Need n >= {Polygon.MIN_VERTICES}, got {n}")
    rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
    best = np.inf
    for _ in range(trials):
        vertices = _random_equilateral(rng, n, dimension)
        if vertices is None:
            continue
        try:
            best = min(best, gromov_distortion(Polygon.create(vertices)))
        except ValueError:
            continue
    logger.debug(f"Distortion floor estimate for n={n}: {best:.6f} over {trials} trials")
    return float(best)
