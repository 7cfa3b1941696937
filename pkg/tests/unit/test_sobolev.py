"""
Unit tests for fractional Sobolev seminorms and VMO moduli.
"""
import numpy as np
import pytest
from scipy.special import sici

from app.domain.entities.seminorm import NormConvention, PeriodicFunction
from app.domain.exceptions import BadExponents, DimensionMismatch, ROutOfRange
from app.domain.services import curve_families
from app.domain.services.sobolev import (
    douglas_functional,
    gagliardo_seminorm,
    gagliardo_tail,
    local_mean,
    local_mean_report,
    sobolev_norm,
    vmo_modulus,
    w12_distance,
)

RADII = [1 / 64, 1 / 32, 1 / 16, 1 / 8, 1 / 4]


@pytest.fixture(scope="module")
def circle_velocity():
    return PeriodicFunction.derivative_of(curve_families.circle(256))


def _circle_gagliardo_squared():
    return 8 * (np.pi * sici(np.pi)[0] - 2)


def test_periodic_function_from_scalar_samples():
    f = PeriodicFunction.create(np.sin(2 * np.pi * np.arange(32) / 32))
    assert f.dimension == 1
    assert f.evaluate(0.25) == pytest.approx([1.0])
    with pytest.raises(ValueError, match="power of two"):
        PeriodicFunction.create(np.zeros(24))


def test_circle_gagliardo_matches_closed_form(circle_velocity):
    result = gagliardo_seminorm(circle_velocity, 0.5, 2.0, grid=1024)

    assert result.convention == NormConvention.ROOTED
    assert result.value ** 2 == pytest.approx(_circle_gagliardo_squared(), rel=1e-2)
    assert result.remainder_estimate > 0


def test_douglas_functional_is_squared(circle_velocity):
    rooted = gagliardo_seminorm(circle_velocity, 0.5, 2.0, grid=256)
    squared = douglas_functional(circle_velocity, grid=256)

    assert squared.convention == NormConvention.SQUARED
    assert squared.value == pytest.approx(rooted.value ** 2, rel=1e-12)


def test_seminorm_of_constant_vanishes():
    constant = PeriodicFunction.create(np.ones((64, 2)))
    assert gagliardo_seminorm(constant, 0.3, 1.5, grid=64).value == pytest.approx(0.0, abs=1e-12)


@pytest.mark.parametrize("s, p", [(0.0, 2.0), (1.0, 2.0), (0.5, 0.5)])
def test_bad_exponents(circle_velocity, s, p):
    with pytest.raises(BadExponents):
        gagliardo_seminorm(circle_velocity, s, p, grid=64)


def test_grid_must_be_even(circle_velocity):
    with pytest.raises(ValueError, match="even"):
        gagliardo_seminorm(circle_velocity, 0.5, 2.0, grid=65)


def test_w12_distance(circle_velocity):
    assert w12_distance(circle_velocity, circle_velocity, grid=128) == 0.0
    doubled = PeriodicFunction.create(2 * circle_velocity.samples)
    expected = gagliardo_seminorm(circle_velocity, 0.5, 2.0, grid=128).value
    assert w12_distance(doubled, circle_velocity, grid=128) == pytest.approx(expected, rel=1e-12)


def test_w12_distance_dimension_mismatch(circle_velocity):
    other = PeriodicFunction.derivative_of(curve_families.circle(256, dimension=3))
    with pytest.raises(DimensionMismatch):
        w12_distance(circle_velocity, other, grid=64)


def test_sobolev_norm_contains_lower_orders():
    """||c||_{W^{3/2,2}} = ||c||_2 + ||c'||_2 + |c'|_{W^{1/2,2}} for the unit circle."""
    curve = curve_families.circle(256)
    position = PeriodicFunction.create(curve.samples)
    seminorm = gagliardo_seminorm(PeriodicFunction.derivative_of(curve), 0.5, 2.0, grid=256).value

    norm = sobolev_norm(position, 1.5, 2.0, grid=256)

    assert norm == pytest.approx(1 / (2 * np.pi) + 1.0 + seminorm, rel=1e-9)
    with pytest.raises(BadExponents):
        sobolev_norm(position, 2.5)
    with pytest.raises(BadExponents):
        sobolev_norm(position, 1.0)


def test_local_mean_of_circle_velocity(circle_velocity):
    """a_r(0) = (0, sin(2 pi r) / (2 pi r)) for gamma' = (-sin, cos)."""
    r = 0.1
    mean = local_mean(circle_velocity, 0.0, r)
    np.testing.assert_allclose(mean, [0.0, np.sin(2 * np.pi * r) / (2 * np.pi * r)], atol=1e-12)


def test_local_mean_report_unit_bound(circle_velocity):
    for r in RADII:
        report = local_mean_report(circle_velocity, 0.3, r)
        assert report.mean_norm <= 1.0
        assert report.unit_bound_slack >= -1e-12


@pytest.mark.parametrize("r", [0.0, -0.1, 0.6])
def test_radius_out_of_range(circle_velocity, r):
    with pytest.raises(ROutOfRange):
        vmo_modulus(circle_velocity, r)


def test_vmo_of_circle_is_lipschitz_and_monotone(circle_velocity):
    moduli = [vmo_modulus(circle_velocity, r, centers=32) for r in RADII]

    for r, value in zip(RADII, moduli):
        assert value <= 2 * np.pi * r
    assert all(a <= b for a, b in zip(moduli, moduli[1:]))


def test_vmo_embedding_chain():
    """The mean oscillation at radius r is bounded by the seminorm tail at 2r."""
    velocity = PeriodicFunction.derivative_of(curve_families.torus_knot(256))
    for r in RADII[:4]:
        assert vmo_modulus(velocity, r, centers=64) <= gagliardo_tail(velocity, 0.5, 2.0, 2 * r, grid=256)


def test_tail_grows_with_radius(circle_velocity):
    tails = [gagliardo_tail(circle_velocity, 0.5, 2.0, r, grid=128) for r in (0.05, 0.1, 0.5)]
    assert tails[0] < tails[1] < tails[2]
    full = gagliardo_seminorm(circle_velocity, 0.5, 2.0, grid=128).value
    assert tails[2] == pytest.approx(full, rel=1e-12)
