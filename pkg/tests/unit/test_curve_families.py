"""
Unit tests for analytic curve families.
"""
import numpy as np
import pytest

from app.domain.services import curve_families
from app.domain.services.curve_core import length


def test_default_circle_is_unit_speed_and_unit_length():
    curve = curve_families.circle()

    assert curve.sample_count == 512
    assert curve.unit_speed
    assert length(curve) == pytest.approx(1.0, abs=1e-12)


def test_circle_with_other_radius_is_not_flagged():
    curve = curve_families.circle(64, radius=2.0)
    assert not curve.unit_speed
    assert length(curve) == pytest.approx(4 * np.pi, rel=1e-12)


def test_circle_padded_to_three_dimensions():
    curve = curve_families.circle(64, dimension=3)
    assert curve.dimension == 3
    assert np.all(curve.samples[:, 2] == 0.0)


def test_ellipse_samples():
    curve = curve_families.ellipse(64, a=2.0, b=1.0)
    assert curve.samples[0] == pytest.approx([2.0, 0.0])
    assert curve.samples[16] == pytest.approx([0.0, 1.0], abs=1e-12)


def test_torus_knot_lies_on_torus():
    curve = curve_families.torus_knot(256)
    x, y, z = curve.samples.T
    tube = np.sqrt(x ** 2 + y ** 2) - 2.0
    np.testing.assert_allclose(tube ** 2 + z ** 2, 1.0, atol=1e-12)


def test_torus_knot_validation():
    with pytest.raises(ValueError, match="coprime"):
        curve_families.torus_knot(256, p=2, q=4)
    with pytest.raises(ValueError, match="major > minor"):
        curve_families.torus_knot(256, major=1.0, minor=1.0)
    with pytest.raises(ValueError, match="too small"):
        curve_families.torus_knot(16, p=3, q=5)


def test_lacunary_validation():
    curve = curve_families.lacunary(64, terms=3)
    assert curve.dimension == 3
    with pytest.raises(ValueError, match="not resolved"):
        curve_families.lacunary(32, terms=4)
    with pytest.raises(ValueError, match="decay"):
        curve_families.lacunary(64, terms=2, decay=1.5)


def test_generate_curve_refuses_fewer_dimensions():
    with pytest.raises(ValueError, match="at least 3 dimensions"):
        curve_families.generate_curve(curve_families.torus_knot_family(), 64, "knot", dimension=2)


def test_from_points():
    points = curve_families.circle(32).samples
    curve = curve_families.from_points(points, source="copy")
    assert curve.source == "copy"
    np.testing.assert_array_equal(curve.samples, points)
