"""
Unit tests for sphere inversions of closed curves.
"""
import math

import numpy as np
import pytest

from app.domain.entities.energy import QuadratureSpec
from app.domain.entities.inversion import SphereInversion
from app.domain.exceptions import CenterHit, CenterTooClose, DimensionMismatch, DomainTooLarge
from app.domain.services import curve_families
from app.domain.services.energies import (
    e1,
    e1_open,
    e2,
    e2_open,
    energy_report,
    energy_report_open,
    mobius_energy,
    mobius_energy_open,
    truncated_energy_open,
)
from app.domain.services.mobius_transform import (
    apply,
    circle_fit_residual,
    collinearity_residual,
    differential,
    invert_centered_on_curve,
    invert_closed,
    random_off_center_inversions,
    suggested_window,
)

SPEC = QuadratureSpec.create(512, 512)


@pytest.fixture(scope="module")
def ellipse():
    return curve_families.ellipse(512, 2.0, 1.0)


@pytest.fixture(scope="module")
def ellipse_image(ellipse):
    return invert_centered_on_curve(ellipse, 0.25, 2.0, 30.0, 3001)


def test_inversion_entity_validation():
    with pytest.raises(ValueError, match="positive"):
        SphereInversion.create([0.0, 0.0], 0.0)
    with pytest.raises(ValueError, match="dimension"):
        SphereInversion.create([1.0], 1.0)
    assert SphereInversion.create((1.0, 2.0, 3.0), 2.0).dimension == 3


def test_apply_is_an_involution():
    inv = SphereInversion.create([0.5, -1.0, 2.0], 1.7)
    points = np.random.default_rng(0).normal(size=(20, 3)) * 3.0

    assert np.allclose(apply(inv, apply(inv, points)), points, atol=1e-10)
    with pytest.raises(CenterHit):
        apply(inv, inv.center)


def test_differential_matches_finite_difference():
    inv = SphereInversion.create([0.0, 0.0], 1.0)
    x = np.array([0.7, 0.4])
    v = np.array([0.3, -1.1])
    h = 1e-6
    numeric = (apply(inv, x + h * v) - apply(inv, x - h * v)) / (2 * h)
    assert np.allclose(differential(inv, x, v), numeric, atol=1e-7)


def test_off_center_circle_stays_a_circle():
    circle = curve_families.circle(256)
    inv = SphereInversion.create([1.0, 0.3], 0.8)
    image = invert_closed(circle, inv)
    assert circle_fit_residual(image.samples) <= 1e-9


@pytest.mark.parametrize(
    "build",
    [
        lambda: curve_families.circle(512),
        lambda: curve_families.ellipse(512, 2.0, 1.0),
        lambda: curve_families.torus_knot(512),
    ],
    ids=["circle", "ellipse", "torus-knot"],
)
def test_off_center_inversions_preserve_energy(build):
    """E_mob and E1 + E2 survive three random inversions centred off the curve."""
    curve = build()
    reference = energy_report(curve, SPEC)
    for inv in random_off_center_inversions(curve, count=3, seed=3):
        image = energy_report(invert_closed(curve, inv), SPEC)
        assert image.e_mobius == pytest.approx(reference.e_mobius, abs=2e-2)
        assert image.e1 + image.e2 == pytest.approx(reference.e1 + reference.e2, abs=2e-2)


def test_random_inversions_are_reproducible(ellipse):
    first = random_off_center_inversions(ellipse, count=2, seed=11)
    second = random_off_center_inversions(ellipse, count=2, seed=11)
    for a, b in zip(first, second):
        assert np.array_equal(a.center, b.center)
        assert a.radius == b.radius


def test_invert_closed_rejects_bad_centers():
    circle = curve_families.circle(256)
    with pytest.raises(CenterTooClose):
        invert_closed(circle, SphereInversion.create(circle.samples[10], 1.0))
    with pytest.raises(DimensionMismatch):
        invert_closed(circle, SphereInversion.create([3.0, 0.0, 0.0], 1.0))


def test_circle_through_center_becomes_a_line():
    image = invert_centered_on_curve(curve_families.circle(512), 0.0, 1.0, 125.0, 2049)

    assert image.sample_count == 2049
    assert collinearity_residual(image.samples) <= 1e-9
    # Image line sits at distance r^2 / (2 rho) = pi from the center
    distances = np.linalg.norm(image.samples - curve_families.circle(512).samples[0], axis=1)
    assert float(np.min(distances)) == pytest.approx(math.pi, rel=1e-6)
    assert energy_report_open(image).e_mobius == pytest.approx(0.0, abs=1e-6)


def test_centered_window_validation():
    circle = curve_families.circle(512)
    with pytest.raises(ValueError, match="odd"):
        invert_centered_on_curve(circle, 0.0, 1.0, 10.0, 2048)
    with pytest.raises(ValueError, match="positive"):
        invert_centered_on_curve(circle, 0.0, -1.0, 10.0, 2049)
    with pytest.raises(DomainTooLarge):
        invert_centered_on_curve(circle, 0.0, 1.0, 1e4, 2049)


def test_centered_image_is_unit_speed(ellipse_image):
    steps = np.linalg.norm(np.diff(ellipse_image.samples, axis=0), axis=1)
    assert np.allclose(steps, ellipse_image.spacing, rtol=1e-3)
    assert np.allclose(np.linalg.norm(ellipse_image.tangents, axis=1), 1.0)


def test_centered_inversion_shifts_e1_by_the_circle_value(ellipse, ellipse_image):
    """E1 of the closed curve is E1 of its unbounded image plus the circle's 2 pi^2."""
    closed = e1(ellipse, SPEC)
    assert e1_open(ellipse_image) + 2 * math.pi ** 2 == pytest.approx(closed, rel=2e-2)


def test_truncated_energy_grows_with_the_window(ellipse_image):
    values = [truncated_energy_open(ellipse_image, radius) for radius in (5.0, 10.0, 20.0)]
    assert values[0] <= values[1] <= values[2]
    with pytest.raises(ValueError, match="positive"):
        truncated_energy_open(ellipse_image, 0.0)


def test_suggested_window(ellipse):
    half_width, count = suggested_window(ellipse, 0.25, 2.0)
    assert count % 2 == 1
    # Farthest point of the ellipse from (0, 1) is at distance sqrt(16 / 3)
    assert half_width == pytest.approx(40.0 * 4.0 / math.sqrt(16.0 / 3.0), rel=1e-4)


def test_centered_inversion_energy_drops_by_four(ellipse, ellipse_image):
    """The windowed image energy is nonnegative and at most E_mob(closed) - 4."""
    closed = mobius_energy(ellipse, SPEC)
    image = mobius_energy_open(ellipse_image)

    assert 0.0 <= image <= closed - 4.0 + 2e-2
    assert e2_open(ellipse_image) - 2 * math.pi ** 2 == pytest.approx(e2(ellipse, SPEC), rel=2e-2)
