"""
Moebius energy and its E1/E2 decomposition on closed and open curves.
Part of Domain layer.

Closed curves are integrated over (x, w) in [0, 1) x [-1/2, 1/2] with the
periodic trapezoid rule; open curves over their sample window with the
plain trapezoid rule. The singular diagonal is handled by a QuadratureSpec
policy: filled with the analytic local limit, or excluded with the missing
mass reported as remainder.
"""
import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from app.core.config import settings
from app.domain.entities.curve import ClosedCurve, OpenCurve
from app.domain.entities.energy import DiagonalPolicy, EnergyReport, QuadratureSpec
from app.domain.exceptions import NonEmbedded, NonRegular
from app.domain.services import spectral
from app.domain.services.curve_core import ArcLengthMap, derivative, evaluate

logger = logging.getLogger(__name__)

# Rows of the x grid processed per vectorized block
_ROW_BLOCK = 32
# Gauss-Legendre points per direction in the majorant double average
_MAJORANT_POINTS = 8


@dataclass
class _Integrals:
    mobius: float
    e1: float
    e2: float
    remainder: float
    min_chord_arc: float
    tail: float = 0.0


def _pair_integrands(chord, c2, reference2, tx, ty, weight):
    """Moebius, E1 and E2 integrands for chord vectors of shape (..., d)."""
    along_x = np.einsum("...d,...d->...", chord, tx)
    along_y = np.einsum("...d,...d->...", chord, ty)
    tangents = np.einsum("...d,...d->...", tx, ty)
    mobius = (1.0 / c2 - 1.0 / reference2) * weight
    e1 = (2.0 - 2.0 * tangents) / (2.0 * c2) * weight
    e2 = 2.0 * (tangents - along_x * along_y / c2) / c2 * weight
    return mobius, e1, e2


def _local_limits(velocity: np.ndarray, acceleration: np.ndarray):
    """
    w -> 0 limits of the three integrands, with Q = |g' ^ g''|^2 / |g'|^4:
    Moebius -> Q/12, E1 -> Q/2, E2 -> -Q/2.
    """
    v2 = np.sum(velocity * velocity, axis=1)
    a2 = np.sum(acceleration * acceleration, axis=1)
    va = np.sum(velocity * acceleration, axis=1)
    q = np.maximum(v2 * a2 - va * va, 0.0) / (v2 * v2)
    return q / 12.0, q / 2.0, -q / 2.0


def _closed_integrals(curve: ClosedCurve, spec: QuadratureSpec) -> _Integrals:
    count = max(spec.nx, spec.nw)
    points = spectral.node_values(curve.coefficients, curve.sample_count, count)
    velocity = spectral.node_values(curve.coefficients, curve.sample_count, count, order=1)
    acceleration = spectral.node_values(curve.coefficients, curve.sample_count, count, order=2)
    speed = np.linalg.norm(velocity, axis=1)

    arc = ArcLengthMap(curve)
    positions = arc.nodes(count)
    tangent = velocity / speed[:, None]

    x_index = np.arange(spec.nx) * (count // spec.nx)
    offsets = np.arange(-spec.nw // 2 + 1, spec.nw // 2 + 1)
    kept = offsets[np.abs(offsets) >= spec.band]
    w_step = count // spec.nw
    hx = 1.0 / spec.nx
    hw = 1.0 / spec.nw

    limits = _local_limits(velocity[x_index], acceleration[x_index])
    band_width = (2 * spec.band - 1) * hw
    edge = np.array([spec.band, -spec.band])

    row_mobius, row_e1, row_e2 = [], [], []
    edge_values = []
    min_ratio = np.inf
    for start in range(0, spec.nx, _ROW_BLOCK):
        rows = x_index[start:start + _ROW_BLOCK]
        partner = (rows[:, None] + kept[None, :] * w_step) % count
        chord = points[rows][:, None, :] - points[partner]
        c2 = np.sum(chord * chord, axis=2)
        gap = np.abs(positions[partner] - positions[rows][:, None])
        intrinsic = np.minimum(gap, arc.total - gap)
        min_ratio = min(min_ratio, float(np.min(np.sqrt(c2) / intrinsic)))

        weight = speed[rows][:, None] * speed[partner]
        mobius, e1, e2 = _pair_integrands(
            chord, c2, intrinsic ** 2, tangent[rows][:, None, :], tangent[partner], weight
        )
        row_mobius.append(np.sum(mobius, axis=1))
        row_e1.append(np.sum(e1, axis=1))
        row_e2.append(np.sum(e2, axis=1))

        # integrand values just outside the band, for the remainder estimate
        edge_columns = np.searchsorted(kept, edge)
        edge_values.append(
            np.stack([np.mean(values[:, edge_columns], axis=1) for values in (mobius, e1, e2)])
        )

    if min_ratio < settings.EMBEDDED_THRESHOLD:
        raise NonEmbedded(
            f"{curve.source}: chord/arc ratio {min_ratio:.3e} below {settings.EMBEDDED_THRESHOLD:.1e}"
        )

    sums = [np.concatenate(r) for r in (row_mobius, row_e1, row_e2)]
    near = np.concatenate(edge_values, axis=1)
    totals = []
    remainder = 0.0
    for index, (rows, limit) in enumerate(zip(sums, limits)):
        body = math.fsum(rows * hw * hx)
        if spec.policy == DiagonalPolicy.ANALYTIC_LIMIT:
            body += math.fsum(limit * band_width * hx)
            remainder += math.fsum(np.abs(near[index] - limit) * band_width * hx)
        else:
            remainder += math.fsum(np.abs(limit) * band_width * hx)
        totals.append(body)

    return _Integrals(totals[0], totals[1], totals[2], remainder, min(min_ratio, 1.0))


def _open_integrals(curve: OpenCurve, spec: QuadratureSpec, radius: Optional[float] = None) -> _Integrals:
    nodes = curve.nodes
    keep = np.ones(curve.sample_count, dtype=bool) if radius is None else np.abs(nodes) <= radius + 1e-12
    if np.count_nonzero(keep) < 3:
        raise ValueError(f"Truncation radius {radius} keeps fewer than three samples")
    x = nodes[keep]
    points = curve.samples[keep]
    tangent = curve.tangents[keep]
    curvature2 = curve.curvature_squared()[keep]
    h = curve.spacing
    size = x.size

    weights = np.full(size, h)
    weights[0] = weights[-1] = h / 2.0
    limits = (curvature2 / 12.0, curvature2 / 2.0, -curvature2 / 2.0)

    chords = np.linalg.norm(np.diff(points, axis=0), axis=1)
    if np.min(chords) <= settings.REGULARITY_RATIO * h:
        raise NonRegular(f"{curve.source}: consecutive samples coincide")

    totals = np.zeros(3)
    remainder = 0.0
    gagliardo_rows = np.zeros(size)
    min_ratio = np.inf
    for start in range(0, size, _ROW_BLOCK):
        rows = np.arange(start, min(start + _ROW_BLOCK, size))
        chord = points[rows][:, None, :] - points[None, :, :]
        c2 = np.sum(chord * chord, axis=2)
        distance = np.abs(x[rows][:, None] - x[None, :])
        diagonal = rows[:, None] == np.arange(size)[None, :]
        safe_c2 = np.where(diagonal, 1.0, c2)
        safe_d2 = np.where(diagonal, 1.0, distance ** 2)
        ratio = np.where(diagonal, 1.0, np.sqrt(safe_c2 / safe_d2))
        min_ratio = min(min_ratio, float(np.min(ratio)))

        mobius, e1, e2 = _pair_integrands(
            chord, safe_c2, safe_d2, tangent[rows][:, None, :], tangent[None, :, :], 1.0
        )
        tangent_gap = np.sum((tangent[rows][:, None, :] - tangent[None, :, :]) ** 2, axis=2)
        gagliardo = np.where(diagonal, curvature2[rows][:, None], tangent_gap / safe_d2)
        gagliardo_rows[rows] = gagliardo @ weights

        for index, (values, limit) in enumerate(zip((mobius, e1, e2), limits)):
            if spec.policy == DiagonalPolicy.ANALYTIC_LIMIT:
                filled = np.where(diagonal, limit[rows][:, None], values)
            else:
                filled = np.where(diagonal, 0.0, values)
                remainder += math.fsum(np.abs(limit[rows]) * weights[rows] * weights[rows])
            totals[index] += math.fsum(weights[rows] * (filled @ weights))

    if min_ratio < settings.EMBEDDED_THRESHOLD:
        raise NonEmbedded(f"{curve.source}: chord/arc ratio {min_ratio:.3e} on the window")

    # Gagliardo mass of the unit tangent escaping through the window ends
    half_width = float(np.max(np.abs(x)))
    tail = half_width * (abs(gagliardo_rows[0]) + abs(gagliardo_rows[-1]))
    return _Integrals(totals[0], totals[1], totals[2], remainder, min(min_ratio, 1.0), tail)


def _default_spec(spec: Optional[QuadratureSpec]) -> QuadratureSpec:
    if spec is not None:
        return spec
    return QuadratureSpec.create(settings.DEFAULT_GRID, settings.DEFAULT_GRID)


def energy_report(curve: ClosedCurve, spec: QuadratureSpec = None) -> EnergyReport:
    """E_mob, E1, E2 and the decomposition residual E_mob - E1 - E2 - 4 of a closed curve."""
    quadrature = _default_spec(spec)
    result = _closed_integrals(curve, quadrature)
    report = EnergyReport.create(
        result.mobius, result.e1, result.e2, quadrature,
        remainder_estimate=result.remainder, min_chord_arc=result.min_chord_arc,
    )
    logger.debug(
        f"Energies of {curve.source} on {quadrature.nx}x{quadrature.nw}: "
        f"E_mob={report.e_mobius:.10g}, E1={report.e1:.10g}, E2={report.e2:.10g}, "
        f"residual={report.residual:.2e}"
    )
    return report


def mobius_energy(curve: ClosedCurve, spec: QuadratureSpec = None) -> float:
    return energy_report(curve, spec).e_mobius


def e1(curve: ClosedCurve, spec: QuadratureSpec = None) -> float:
    return energy_report(curve, spec).e1


def e2(curve: ClosedCurve, spec: QuadratureSpec = None) -> float:
    return energy_report(curve, spec).e2


def energy_report_open(curve: OpenCurve, spec: QuadratureSpec = None) -> EnergyReport:
    """Energies of an open arc-length curve on its whole window; E_mob = E1 + E2 up to truncation."""
    quadrature = _default_spec(spec)
    result = _open_integrals(curve, quadrature)
    return EnergyReport.create(
        result.mobius, result.e1, result.e2, quadrature,
        remainder_estimate=result.remainder, tail_estimate=result.tail,
        min_chord_arc=result.min_chord_arc, closed=False,
    )


def mobius_energy_open(curve: OpenCurve, spec: QuadratureSpec = None) -> float:
    return energy_report_open(curve, spec).e_mobius


def e1_open(curve: OpenCurve, spec: QuadratureSpec = None) -> float:
    return energy_report_open(curve, spec).e1


def e2_open(curve: OpenCurve, spec: QuadratureSpec = None) -> float:
    return energy_report_open(curve, spec).e2


def truncated_energy_open(curve: OpenCurve, radius: float, spec: QuadratureSpec = None) -> float:
    """Moebius energy restricted to the parameter window [-radius, radius]."""
    if radius <= 0:
        raise ValueError("Truncation radius must be positive")
    return _open_integrals(curve, _default_spec(spec), radius=radius).mobius


def integrand_I(curve: ClosedCurve, x: float, w: float, arc: ArcLengthMap = None) -> float:
    """
    (1/|g(x+w) - g(x)|^2 - 1/d(x, x+w)^2) |g'(x)| |g'(x+w)|.
    Pass a prebuilt arc-length map when probing many points of the same curve.
    """
    if w == 0:
        raise ValueError("Integrand is singular at w = 0")
    params = np.array([x, x + w])
    points = evaluate(curve, params)
    speeds = np.linalg.norm(derivative(curve, params), axis=1)
    arc = arc or ArcLengthMap(curve)
    intrinsic = float(arc.intrinsic_distance(x, x + w))
    chord2 = float(np.sum((points[1] - points[0]) ** 2))
    return (1.0 / chord2 - 1.0 / intrinsic ** 2) * float(speeds[0] * speeds[1])


def integrand_majorant(curve: ClosedCurve, x: float, w: float) -> float:
    """
    Double average int_0^1 int_0^1 |g'(x + s1 w) - g'(x + s2 w)|^2 ds1 ds2 / |w|^2,
    by an 8 x 8 Gauss-Legendre product rule.
    """
    if w == 0 or abs(w) > 0.25:
        raise ValueError(f"Majorant needs 0 < |w| <= 1/4, got {w}")
    nodes, weights = np.polynomial.legendre.leggauss(_MAJORANT_POINTS)
    nodes = (nodes + 1.0) / 2.0
    weights = weights / 2.0
    velocity = derivative(curve, x + nodes * w)
    gaps = np.sum((velocity[:, None, :] - velocity[None, :, :]) ** 2, axis=2)
    return float(weights @ gaps @ weights) / (w * w)


def tangent_defect(a, b) -> float:
    """|a||b| - <a, b>."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(np.linalg.norm(a) * np.linalg.norm(b) - np.dot(a, b))


def defect_bound(a, b) -> float:
    """2 (|b| / |a|) |a - b|^2, an upper bound for tangent_defect(a, b)."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    return float(2.0 * np.linalg.norm(b) / np.linalg.norm(a) * np.sum((a - b) ** 2))
