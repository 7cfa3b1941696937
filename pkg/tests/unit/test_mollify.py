"""
Unit tests for mollification by the smooth bump.
"""
import numpy as np
import pytest
from scipy import integrate

from app.domain.entities.kernel import MollifySweepRow
from app.domain.exceptions import EpsOutOfRange
from app.domain.services import curve_families
from app.domain.services import mollify as mollify_module
from app.domain.services.curve_core import reparametrize_by_arclength
from app.domain.services.mollify import (
    bump_profile,
    bump_second_moment,
    kernel,
    kernel_multipliers,
    min_speed_profile,
    mollified_vmo_bound,
    mollify,
    regularity_threshold,
    speed_deviation,
)

EPS_LIST = [0.2, 0.1, 0.05, 0.025]


@pytest.fixture(scope="module")
def arclength_ellipse():
    return reparametrize_by_arclength(curve_families.ellipse(256, 2.0, 1.0))


def test_bump_has_unit_mass_and_compact_support():
    mass, _ = integrate.quad(bump_profile, -1.0, 1.0)
    assert mass == pytest.approx(1.0, abs=1e-10)
    assert bump_profile(1.0) == 0.0
    assert bump_profile(-1.5) == 0.0
    assert 0.1 < bump_second_moment() < 0.2


def test_kernel_entity():
    k = kernel(0.1)
    assert k.epsilon == 0.1
    assert k.second_moment == pytest.approx(bump_second_moment())
    with pytest.raises(EpsOutOfRange, match="epsilon"):
        kernel(0.5)


def test_kernel_multipliers_against_direct_quadrature():
    eps = 0.1
    multipliers = kernel_multipliers(eps, 16)

    for k in (1, 3, 7):
        direct, _ = integrate.quad(lambda x: bump_profile(x) * np.cos(2 * np.pi * k * eps * x), -1.0, 1.0)
        assert multipliers[k] == pytest.approx(direct, abs=1e-10)


def test_kernel_multipliers_bounds():
    """eta(0) = 1, |eta(k)| <= 1, and eta(k) > 0 while 2 pi k eps <= pi / 2."""
    eps = 0.05
    multipliers = kernel_multipliers(eps, 129)

    assert multipliers[0] == 1.0
    assert np.all(np.abs(multipliers) <= 1.0 + 1e-12)
    positive = np.arange(129) <= 1 / (4 * eps)
    assert np.all(multipliers[positive] > 0)


def test_kernel_multipliers_are_cached():
    assert kernel_multipliers(0.15, 33) is kernel_multipliers(0.15, 33)


def test_kernel_multipliers_compute_outside_the_lock(monkeypatch):
    """Sweeps over different eps must not wait on each other's quadrature."""
    seen = []

    def compute(eps, mode_count):
        seen.append(mollify_module._MULTIPLIER_LOCK.locked())
        return np.ones(mode_count)

    monkeypatch.setattr(mollify_module, "_MULTIPLIER_CACHE", {})
    monkeypatch.setattr(mollify_module, "_compute_multipliers", compute)
    values = kernel_multipliers(0.3217, 9)

    assert seen == [False]
    assert np.array_equal(values, np.ones(9))
    assert kernel_multipliers(0.3217, 9) is values
    assert seen == [False]


@pytest.mark.parametrize("eps", [0.0, -0.1, 0.5, 0.7])
def test_eps_out_of_range(eps):
    with pytest.raises(EpsOutOfRange):
        mollify(curve_families.circle(64), eps)


def test_mollified_circle_is_a_shrunk_circle():
    """Convolution scales the single Fourier mode of a circle by eta(1)."""
    curve = curve_families.circle(128)
    smoothed = mollify(curve, 0.1)
    factor = kernel_multipliers(0.1, 65)[1]

    np.testing.assert_allclose(smoothed.samples, factor * curve.samples, atol=1e-13)
    assert speed_deviation(smoothed) == pytest.approx(1.0 - factor, abs=1e-12)


def test_mollify_commutes_with_rigid_motions():
    knot = curve_families.torus_knot(256)
    rotation, _ = np.linalg.qr(np.random.default_rng(5).normal(size=(3, 3)))
    offset = np.array([0.3, -1.2, 2.0])
    moved = knot.with_samples(knot.samples @ rotation.T + offset, source="moved knot")

    expected = mollify(knot, 0.05).samples @ rotation.T + offset
    np.testing.assert_allclose(mollify(moved, 0.05).samples, expected, atol=1e-12)


def test_circle_speed_deviation_is_second_order():
    curve = curve_families.circle(256)
    deviations = [speed_deviation(mollify(curve, eps)) for eps in EPS_LIST]

    assert all(b < a for a, b in zip(deviations, deviations[1:]))
    order = np.polyfit(np.log(EPS_LIST), np.log(deviations), 1)[0]
    assert 1.8 <= order <= 2.2
    assert speed_deviation(mollify(curve, 0.0125)) <= 1e-3


def test_arclength_ellipse_speed_deviation_decreases(arclength_ellipse):
    rows = min_speed_profile(arclength_ellipse, EPS_LIST)

    assert [row.epsilon for row in rows] == EPS_LIST
    deviations = [row.speed_deviation for row in rows]
    assert all(b < a for a, b in zip(deviations, deviations[1:]))
    assert all(isinstance(row, MollifySweepRow) for row in rows)
    assert all(row.speed_min <= 1.0 + 1e-12 for row in rows)


def test_min_speed_profile_accepts_a_mapper():
    curve = curve_families.circle(64)
    calls = []

    def recording_map(function, items):
        calls.append(list(items))
        return [function(item) for item in items]

    rows = min_speed_profile(curve, [0.2, 0.1], map_fn=recording_map)

    assert calls == [[0.2, 0.1]]
    assert len(rows) == 2


def test_regularity_threshold_of_circle():
    assert regularity_threshold(curve_families.circle(64), [0.05, 0.2, 0.1]) == pytest.approx(0.2)
    assert regularity_threshold(curve_families.circle(64), []) == 0.0


def test_regularity_threshold_with_strict_cut():
    """With a cut above every mollified speed no grid value qualifies."""
    assert regularity_threshold(curve_families.circle(64), [0.2, 0.1], cut=1.0) == 0.0


def test_mollification_does_not_raise_vmo(arclength_ellipse):
    for eps in (0.1, 0.025):
        mollified, original = mollified_vmo_bound(arclength_ellipse, eps, 1 / 16, centers=64)
        assert mollified <= original * 1.02
