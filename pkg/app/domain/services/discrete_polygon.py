"""
Discrete Moebius energy of polygons and inscribed recovery sequences.
Part of Domain layer.
"""
import logging
from typing import Callable, Iterable, List

import numpy as np

from app.domain.entities.curve import ClosedCurve
from app.domain.entities.energy import QuadratureSpec
from app.domain.entities.polygon import GammaSweepRow, Polygon
from app.domain.exceptions import CoincidentVertices
from app.domain.services.curve_core import arc_length_param, evaluate
from app.domain.services.energies import energy_report
from app.domain.services.mollify import mollify

logger = logging.getLogger(__name__)

COINCIDENCE_RATIO = 1e-14


def polygon_arc_distance(p: Polygon, i: int, j: int) -> float:
    """Shorter-way polygonal arc length between vertices i and j (cyclic indices)."""
    count = p.vertex_count
    first, second = i % count, j % count
    forward = (p.cumulative[second] - p.cumulative[first]) % p.perimeter
    return float(min(forward, p.perimeter - forward))


def _checked_chords(p: Polygon) -> np.ndarray:
    chords = p.chord_matrix()
    off_diagonal = ~np.eye(p.vertex_count, dtype=bool)
    if np.any(chords[off_diagonal] <= COINCIDENCE_RATIO * p.perimeter):
        raise CoincidentVertices("Polygon has coincident vertices")
    return chords


def discrete_energy(p: Polygon) -> float:
    """
    E_m(p) = sum over ordered pairs i != j of
    (1/|v_i - v_j|^2 - 1/d_p(i, j)^2) d_p(i, i+1) d_p(j, j+1).
    """
    chords = _checked_chords(p)
    arcs = p.arc_matrix()
    edge_arcs = np.minimum(p.edges, p.perimeter - p.edges)
    off_diagonal = ~np.eye(p.vertex_count, dtype=bool)

    safe_chords = np.where(off_diagonal, chords, 1.0)
    safe_arcs = np.where(off_diagonal, arcs, 1.0)
    terms = (1.0 / safe_chords ** 2 - 1.0 / safe_arcs ** 2) * np.outer(edge_arcs, edge_arcs)
    return float(np.sum(np.where(off_diagonal, terms, 0.0)))


def inscribe_uniform(curve: ClosedCurve, m: int) -> Polygon:
    """Vertices at equal arc-length fractions a_i = i / m of the curve."""
    if m < Polygon.MIN_VERTICES:
        raise ValueError(f"Need at least {Polygon.MIN_VERTICES} vertices, got {m}")
    arc = arc_length_param(curve)
    fractions = np.arange(m) / m
    params = arc.inverse(fractions * arc.total)
    return Polygon.create(evaluate(curve, params), fractions)


def gamma_sweep(
    curve: ClosedCurve,
    m_list: Iterable[int],
    mollify_first: bool = False,
    spec: QuadratureSpec = None,
    map_fn: Callable = map,
) -> List[GammaSweepRow]:
    """
    E_m of inscribed m-gons against E_mob(curve). With mollify_first the m-gon
    is inscribed in the mollified curve with eps = 1/m.
    """
    report = energy_report(curve, spec)

    def cell(m: int) -> GammaSweepRow:
        target = mollify(curve, 1.0 / m) if mollify_first else curve
        polygon = inscribe_uniform(target, m)
        row = GammaSweepRow.create(
            m, discrete_energy(polygon), report.e_mobius, report.remainder_estimate
        )
        logger.debug(f"Gamma sweep {curve.source} m={m}: E_m={row.e_m:.8f}, gap={row.gap:.3e}")
        return row

    return list(map_fn(cell, list(m_list)))
