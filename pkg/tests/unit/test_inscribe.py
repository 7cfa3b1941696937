"""
Unit tests for inscribed equilateral polygons and polygon distortion.
"""
import math

import numpy as np
import pytest

from app.domain.entities.polygon import Polygon
from app.domain.exceptions import BracketNotFound, NoForwardIntersection
from app.domain.services import curve_families
from app.domain.services.inscribe import (
    check_vmo_proxy,
    estimate_distortion_floor,
    gromov_distortion,
    inscribed_ngon,
    march,
)

RHO = 1 / (2 * math.pi)


@pytest.fixture(scope="module")
def circle():
    return curve_families.circle(256)


@pytest.fixture(scope="module")
def ellipse():
    return curve_families.ellipse(256, 2.0, 1.0)


def test_march_keeps_chords_equal(circle):
    result = march(circle, 0.1, 0.1, 5)
    chords = np.linalg.norm(np.diff(result.points, axis=0), axis=1)

    assert result.points.shape == (5, 2)
    assert np.allclose(chords, 0.1, atol=1e-12)
    assert np.all(np.diff(result.parameters) > 0)
    assert result.closing_gap == pytest.approx(
        2 * RHO * math.sin(4 * math.asin(0.1 / (2 * RHO))) - 0.1, abs=1e-9
    )


def test_march_errors(circle):
    with pytest.raises(ValueError, match="positive"):
        march(circle, 0.0, 0.0, 3)
    with pytest.raises(ValueError, match="n >= 2"):
        march(circle, 0.0, 0.1, 1)
    with pytest.raises(NoForwardIntersection):
        march(circle, 0.0, 1.0, 3)


def test_square_in_circle(circle):
    result = inscribed_ngon(circle, 0.3, 4)

    assert result.side == pytest.approx(2 * RHO * math.sin(math.pi / 4), abs=1e-9)
    assert result.polygon.vertex_count == 4
    assert result.chord_spread <= 1e-8
    assert result.start == pytest.approx(0.3)


def test_triangle_in_ellipse(ellipse):
    """From (2, 0) the other vertices sit at (2/7, +-sqrt(48)/7)."""
    result = inscribed_ngon(ellipse, 0.0, 3)
    length = float(np.sum(np.linalg.norm(ellipse.node_derivative(1, 4096), axis=1)) / 4096)

    assert result.side == pytest.approx(2 * math.sqrt(48) / 7, abs=1e-8)
    assert result.chord_spread <= 1e-8
    assert result.closing_residual <= 1e-9 * length


def test_digon_spans_the_major_axis(ellipse):
    result = inscribed_ngon(ellipse, 0.0, 2)

    assert result.side == pytest.approx(4.0, abs=1e-9)
    assert result.polygon.vertex_count == 2
    assert result.polygon.parameters[1] == pytest.approx(0.5, abs=1e-6)


def test_coarse_scan_raises_with_the_scan(circle):
    with pytest.raises(BracketNotFound) as excinfo:
        inscribed_ngon(circle, 0.0, 4, scan_points=2)
    assert len(excinfo.value.scan) == 2


def test_knotted_curve_never_returns_an_open_triangle():
    """On a knot the closing gap jumps; only sides that really close the triangle count."""
    knot = curve_families.torus_knot(256)
    length = float(np.sum(np.linalg.norm(knot.node_derivative(1, 4096), axis=1)) / 4096)

    try:
        result = inscribed_ngon(knot, 0.0, 3)
    except BracketNotFound as error:
        assert error.scan
        return
    assert result.closing_residual <= 1e-9 * length
    assert result.chord_spread <= 1e-8
    for side in result.sides:
        gap = march(knot, result.start, side, 3).closing_gap
        assert abs(gap) <= 1e-9 * length


def test_vmo_proxy_on_smooth_curve(circle):
    assert check_vmo_proxy(circle)


def test_gromov_distortion_of_square():
    square = Polygon.create([(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)])
    assert gromov_distortion(square) == pytest.approx(math.sqrt(2), abs=1e-12)


def test_distortion_floor_estimate():
    """Equilateral quadrilaterals have a diagonal of length at most sqrt(2) times the side."""
    first = estimate_distortion_floor(4, trials=50, seed=1)
    second = estimate_distortion_floor(4, trials=50, seed=1)

    assert first >= math.sqrt(2) - 1e-9
    assert math.isfinite(first)
    assert first == second
    with pytest.raises(ValueError, match="n >= 3"):
        estimate_distortion_floor(2)
