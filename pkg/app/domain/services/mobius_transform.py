"""
Sphere inversions of closed curves.
Part of Domain layer.

Off-center inversions map closed curves to closed curves. Inversions centered
on the curve send it to an unbounded curve, sampled here uniformly in image
arc length on a finite window.
"""
import logging
from typing import List, Tuple

import numpy as np
from scipy.integrate import solve_ivp

from app.core.config import settings
from app.domain.entities.curve import ClosedCurve, OpenCurve, ParamPoint, param_value
from app.domain.entities.inversion import SphereInversion
from app.domain.exceptions import CenterHit, CenterTooClose, DimensionMismatch, DomainTooLarge, NonEmbedded
from app.domain.services.curve_core import chord_arc_report, derivative, evaluate, length

logger = logging.getLogger(__name__)

CENTER_HIT_DISTANCE = 1e-12
# Minimum center distance in units of the sample spacing L / N
CENTER_CLEARANCE = 10.0


def apply(inv: SphereInversion, x) -> np.ndarray:
    """c + r^2 (x - c) / |x - c|^2 for a point (d,) or points (m, d)."""
    points = np.asarray(x, dtype=float)
    offset = points - inv.center
    norms2 = np.sum(offset * offset, axis=-1, keepdims=True)
    if np.any(np.sqrt(norms2) < CENTER_HIT_DISTANCE):
        raise CenterHit("Point coincides with the inversion center")
    return inv.center + inv.radius ** 2 * offset / norms2


def differential(inv: SphereInversion, x, v) -> np.ndarray:
    """DI(x) v = r^2 (v / |x - c|^2 - 2 (x - c) <x - c, v> / |x - c|^4)."""
    offset = np.asarray(x, dtype=float) - inv.center
    vectors = np.asarray(v, dtype=float)
    norms2 = np.sum(offset * offset, axis=-1, keepdims=True)
    along = np.sum(offset * vectors, axis=-1, keepdims=True)
    return inv.radius ** 2 * (vectors / norms2 - 2.0 * offset * along / norms2 ** 2)


def _distance_to_curve(curve: ClosedCurve, point: np.ndarray) -> float:
    dense = curve.node_derivative(0, 4 * curve.sample_count)
    return float(np.min(np.linalg.norm(dense - point, axis=1)))


def invert_closed(curve: ClosedCurve, inv: SphereInversion) -> ClosedCurve:
    """
    Pointwise image of a closed curve under an inversion whose center stays
    at least CENTER_CLEARANCE sample spacings away from the curve.
    """
    if inv.dimension != curve.dimension:
        raise DimensionMismatch(f"Inversion lives in R^{inv.dimension}, curve in R^{curve.dimension}")
    spacing = length(curve) / curve.sample_count
    distance = _distance_to_curve(curve, inv.center)
    if distance < CENTER_CLEARANCE * spacing:
        raise CenterTooClose(
            f"Inversion center is {distance:.3e} from {curve.source}; "
            f"need at least {CENTER_CLEARANCE * spacing:.3e}"
        )

    image = ClosedCurve.create(apply(inv, curve.samples), source=f"inverted({curve.source})")
    report = chord_arc_report(image, grid=min(image.sample_count, 256))
    if report.near_degenerate:
        raise NonEmbedded(f"Image of {curve.source} is not embedded (chord/arc {report.bilipschitz_constant:.3e})")
    return image


def random_off_center_inversions(
    curve: ClosedCurve, count: int = 3, seed: int = None
) -> List[SphereInversion]:
    """
    Inversions with centers outside the curve's bounding ball, at 1.5 to 3 times
    its radius from the centroid, and radius comparable to the center distance.
    """
    rng = np.random.default_rng(settings.DEFAULT_SEED if seed is None else seed)
    centroid = np.mean(curve.samples, axis=0)
    extent = float(np.max(np.linalg.norm(curve.samples - centroid, axis=1)))
    inversions = []
    for _ in range(count):
        direction = rng.normal(size=curve.dimension)
        direction /= np.linalg.norm(direction)
        center = centroid + rng.uniform(1.5, 3.0) * extent * direction
        radius = rng.uniform(0.5, 1.5) * float(np.linalg.norm(center - centroid))
        inversions.append(SphereInversion.create(center, radius))
    return inversions


def suggested_window(curve: ClosedCurve, t0, radius: float) -> Tuple[float, int]:
    """
    Window half width and sample count for a centered inversion: 40 image
    length scales r^2 / diam, sampled at 2049 points.
    """
    center = evaluate(curve, param_value(ParamPoint.of(t0)))
    dense = curve.node_derivative(0, 4 * curve.sample_count)
    diameter = float(np.max(np.linalg.norm(dense - center, axis=1)))
    return 40.0 * radius ** 2 / diameter, 2049


def invert_centered_on_curve(
    curve: ClosedCurve,
    t0,
    r: float,
    r_dom: float,
    sample_count: int = 2049,
) -> OpenCurve:
    """
    Image of a closed curve under the inversion of radius r centered at gamma(t0),
    sampled uniformly in image arc length sigma on [-r_dom, r_dom] with
    sigma = 0 at the image of the antipodal parameter t0 + 1/2.

    The preimage parameter u (offset from the antipode) solves
    du/dsigma = |gamma(t) - c|^2 / (r^2 |gamma'(t)|).
    """
    if r <= 0 or r_dom <= 0:
        raise ValueError("Inversion radius and window must be positive")
    if sample_count % 2 == 0:
        raise ValueError("Open sample count must be odd so the window is centered on sigma = 0")

    base = param_value(ParamPoint.of(t0))
    center = evaluate(curve, base)
    inv = SphereInversion.create(center, r)
    antipode = base + 0.5
    limit = 0.5 - settings.INVERSION_EXCLUDED_CELLS / curve.sample_count

    def rate(_sigma, u):
        t = antipode + u[0]
        offset = evaluate(curve, t) - center
        speed = np.linalg.norm(derivative(curve, t))
        return [float(np.dot(offset, offset)) / (r * r * speed)]

    def excluded(_sigma, u):
        return limit - abs(u[0])

    excluded.terminal = True

    sigma = np.linspace(-r_dom, r_dom, sample_count)
    middle = sample_count // 2
    sigma[middle] = 0.0
    params = np.empty(sample_count)
    for direction, grid in ((1.0, sigma[middle:]), (-1.0, sigma[middle::-1])):
        solution = solve_ivp(
            rate, (0.0, direction * r_dom), [0.0], method="DOP853",
            t_eval=grid, rtol=1e-12, atol=1e-14, events=excluded,
        )
        if solution.status == 1 or solution.y.shape[1] < grid.size:
            raise DomainTooLarge(
                f"Window [-{r_dom:g}, {r_dom:g}] needs preimage parameters within "
                f"{settings.INVERSION_EXCLUDED_CELLS} cells of the inversion center"
            )
        if not solution.success:
            raise DomainTooLarge(f"Image arc-length integration failed: {solution.message}")
        values = antipode + solution.y[0]
        if direction > 0:
            params[middle:] = values
        else:
            params[: middle + 1] = values[::-1]

    preimage = evaluate(curve, params)
    velocity = derivative(curve, params)
    image = apply(inv, preimage)
    tangents = differential(inv, preimage, velocity)
    logger.debug(
        f"Centered inversion of {curve.source} at t0={base:g}: preimage offsets "
        f"[{params[0] - antipode:.4f}, {params[-1] - antipode:.4f}]"
    )
    return OpenCurve.create(
        image, r_dom, tangents=tangents, source=f"inverted_on_curve({curve.source},t0={base:g})"
    )


def circle_fit_residual(points) -> float:
    """
    Max deviation of points from their best-fit circle, relative to its radius:
    out-of-plane distance from the SVD plane combined with the algebraic (Kasa)
    in-plane fit.
    """
    data = np.asarray(points, dtype=float)
    centroid = np.mean(data, axis=0)
    centered = data - centroid
    _, _, basis = np.linalg.svd(centered, full_matrices=False)
    planar = centered @ basis[:2].T
    off_plane = np.linalg.norm(centered - planar @ basis[:2], axis=1)

    design = np.column_stack([planar, np.ones(len(planar))])
    target = -np.sum(planar * planar, axis=1)
    (d, e, f), *_ = np.linalg.lstsq(design, target, rcond=None)
    middle = np.array([-d / 2.0, -e / 2.0])
    radius = float(np.sqrt(middle @ middle - f))
    radial = np.abs(np.linalg.norm(planar - middle, axis=1) - radius)
    return float(max(np.max(off_plane), np.max(radial)) / radius)


def collinearity_residual(points) -> float:
    """Max distance of points from their best-fit line, relative to the point spread along it."""
    data = np.asarray(points, dtype=float)
    centered = data - np.mean(data, axis=0)
    _, _, basis = np.linalg.svd(centered, full_matrices=False)
    along = centered @ basis[0]
    across = np.linalg.norm(centered - np.outer(along, basis[0]), axis=1)
    return float(np.max(across) / (np.max(along) - np.min(along)))
