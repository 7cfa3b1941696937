"""
Unit tests for polygons and their discrete Moebius energy.
"""
import math

import numpy as np
import pytest

from app.domain.entities.polygon import GammaSweepRow, Polygon
from app.domain.exceptions import CoincidentVertices
from app.domain.services import curve_families
from app.domain.services.discrete_polygon import (
    discrete_energy,
    gamma_sweep,
    inscribe_uniform,
    polygon_arc_distance,
)

SQUARE = [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]


def test_polygon_validation():
    with pytest.raises(ValueError, match="at least 3"):
        Polygon.create([(0.0, 0.0), (1.0, 0.0)])
    with pytest.raises(ValueError, match="strictly increasing"):
        Polygon.create(SQUARE, [0.0, 0.5, 0.25, 0.75])
    with pytest.raises(ValueError, match="positive length"):
        Polygon.create([(0.0, 0.0), (0.0, 0.0), (1.0, 1.0)])
    assert Polygon.digon((0.0, 0.0), (2.0, 0.0), [0.0, 0.5]).vertex_count == 2


def test_polygon_arc_distance_takes_the_shorter_way():
    square = Polygon.create(SQUARE)

    assert square.perimeter == pytest.approx(4.0)
    assert polygon_arc_distance(square, 0, 1) == pytest.approx(1.0)
    assert polygon_arc_distance(square, 0, 3) == pytest.approx(1.0)
    assert polygon_arc_distance(square, 0, 2) == pytest.approx(2.0)
    assert polygon_arc_distance(square, 1, 5) == 0.0


def test_triangle_has_zero_energy():
    triangle = Polygon.create([(0.0, 0.0), (3.0, 0.0), (0.5, 2.0)])
    assert discrete_energy(triangle) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("side", [1.0, 1.75])
def test_square_has_unit_energy(side):
    """Each diagonal pair contributes 1/4; the value does not depend on scale."""
    square = Polygon.create(np.array(SQUARE) * side)
    assert discrete_energy(square) == pytest.approx(1.0, abs=1e-12)


def test_energy_is_invariant_under_rigid_motions():
    pentagon = np.array([(0.0, 0.0), (2.0, 0.1), (2.5, 1.3), (1.1, 2.2), (-0.4, 1.0)])
    angle = 0.7
    rotation = np.array([[np.cos(angle), -np.sin(angle)], [np.sin(angle), np.cos(angle)]])
    moved = pentagon @ rotation.T + np.array([-3.0, 5.5])

    reference = discrete_energy(Polygon.create(pentagon))
    assert reference > 0
    assert discrete_energy(Polygon.create(moved)) == pytest.approx(reference, rel=1e-12)
    assert discrete_energy(Polygon.create(pentagon[::-1])) == pytest.approx(reference, rel=1e-12)


def test_coincident_vertices_are_rejected():
    bow = Polygon.create([(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (0.0, 1.0)])
    with pytest.raises(CoincidentVertices):
        discrete_energy(bow)


def test_inscribe_uniform_on_circle_is_regular():
    polygon = inscribe_uniform(curve_families.circle(256), 12)
    expected_side = 2 * (1 / (2 * math.pi)) * math.sin(math.pi / 12)

    assert polygon.vertex_count == 12
    assert np.allclose(polygon.edges, expected_side, rtol=1e-9)
    assert np.allclose(polygon.parameters, np.arange(12) / 12)
    with pytest.raises(ValueError, match="at least"):
        inscribe_uniform(curve_families.circle(64), 2)


def test_gamma_sweep_on_circle_converges():
    rows = gamma_sweep(curve_families.circle(512), [64, 128, 256, 512])
    gaps = [row.gap for row in rows]

    assert [row.m for row in rows] == [64, 128, 256, 512]
    assert all(later < earlier for earlier, later in zip(gaps, gaps[1:]))
    assert gaps[2] <= 0.06
    assert gaps[3] <= 0.05
    assert rows[0].e_mobius == pytest.approx(4.0, abs=1e-3)


def test_mollified_sweep_matches_on_circle():
    """Mollifying a circle only shrinks it, so the inscribed energies agree."""
    circle = curve_families.circle(256)
    plain = gamma_sweep(circle, [32])
    smoothed = gamma_sweep(circle, [32], mollify_first=True)
    assert smoothed[0].e_m == pytest.approx(plain[0].e_m, abs=1e-8)


def test_gamma_sweep_row_gap():
    row = GammaSweepRow.create(16, 3.9, 4.0)
    assert row.gap == pytest.approx(0.1)
    assert row.remainder_estimate == 0.0
