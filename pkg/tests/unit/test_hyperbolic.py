"""Tests for the Poincare-disk distances and witness points."""

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest

from tree_subcone.core_tree import DiscreteFunction
from tree_subcone.errors import (
    InputFormatError,
    OutOfDomainError,
    OutsideDiskError,
    OverflowRegimeError,
)
from tree_subcone.hyperbolic import (
    LOG8,
    SignedLog,
    PolarPoint,
    asymptotic_error,
    convergence_report,
    disk_distance,
    hyperbolic_terms,
    log_beta2,
    log_sinh,
    one_minus_r,
    parse_polar_literal,
    polar_distance,
    polar_distance_logdomain,
    polar_to_disk,
    rho_to_r,
    signed_log_sum,
    witness_distance,
    witness_distance_oracle,
    witness_point,
)
from tree_subcone.sampling import branching_discrete_pair, random_polar_point
from tree_subcone.types import EpsilonSchedule


def test_rho_to_r_examples():
    assert rho_to_r(0.0) == 0.0
    assert rho_to_r(math.log(3)) == pytest.approx(0.5, abs=1e-15)
    assert rho_to_r(40.0) < 1.0
    assert one_minus_r(700.0) > 0.0


def test_rho_to_r_rejects_negative():
    with pytest.raises(OutOfDomainError):
        rho_to_r(-1.0)


def test_disk_distance_examples():
    r = 0.6
    expected = math.log((1 + r) / (1 - r))
    assert disk_distance(0.3 + 0.2j, 0.3 + 0.2j) == 0.0
    assert disk_distance(0j, complex(0, r)) == pytest.approx(expected, rel=1e-14)
    assert disk_distance(complex(r, 0), complex(-r, 0)) == pytest.approx(2 * expected, rel=1e-14)


def test_disk_distance_rejects_boundary_points():
    with pytest.raises(OutsideDiskError):
        disk_distance(0j, 1 + 0j)


def test_polar_distance_examples():
    p = PolarPoint(rho=2.0, phi=0.7)
    assert polar_distance(p, p) == 0.0
    assert polar_distance(PolarPoint(3.0, 0.4), PolarPoint(1.5, 0.4)) == pytest.approx(
        1.5, abs=1e-12
    )


def test_polar_distance_matches_disk_distance(rng):
    for _ in range(200):
        p1, p2 = random_polar_point(rng, 3.0), random_polar_point(rng, 3.0)
        oracle = disk_distance(polar_to_disk(p1), polar_to_disk(p2))
        assert abs(polar_distance(p1, p2) - oracle) <= 1e-12 * max(1.0, oracle)


def test_polar_distance_refuses_overflow_regime():
    with pytest.raises(OverflowRegimeError):
        polar_distance(PolarPoint(300.0, 0.0), PolarPoint(300.0, 1.0))


def _reference_disk_distance(x1: complex, x2: complex) -> float:
    with mpmath.workdps(50):
        a = mpmath.mpc(x1.real, x1.imag)
        b = mpmath.mpc(x2.real, x2.imag)
        gap1 = 1 - a.real**2 - a.imag**2
        gap2 = 1 - b.real**2 - b.imag**2
        return float(2 * mpmath.asinh(abs(a - b) / mpmath.sqrt(gap1 * gap2)))


def test_disk_distance_matches_high_precision_near_the_boundary(rng):
    for _ in range(300):
        p1, p2 = random_polar_point(rng, 15.0), random_polar_point(rng, 15.0)
        x1, x2 = polar_to_disk(p1), polar_to_disk(p2)
        reference = _reference_disk_distance(x1, x2)
        assert abs(disk_distance(x1, x2) - reference) <= 1e-12 * max(1.0, reference)


def test_disk_distance_of_far_out_points():
    p1, p2 = PolarPoint(20.0, 0.0), PolarPoint(20.0, 3.0)
    d = disk_distance(polar_to_disk(p1), polar_to_disk(p2))
    assert d == pytest.approx(polar_distance(p1, p2), rel=1e-6)
    assert d == pytest.approx(39.99498, rel=1e-6)


def test_disk_distance_rejects_points_rounded_onto_the_boundary():
    with pytest.raises(OutsideDiskError):
        disk_distance(0j, polar_to_disk(PolarPoint(40.0, 0.0)))
    with pytest.raises(OutsideDiskError):
        disk_distance(complex(0.8, 0.7), 0j)


def test_hyperbolic_terms_match_the_closed_form(rng):
    for _ in range(200):
        p1, p2 = random_polar_point(rng, 5.0), random_polar_point(rng, 5.0)
        terms = hyperbolic_terms(p1, p2)
        t = math.exp((p1.rho - p2.rho) / 2)
        s = math.exp((p1.rho + p2.rho) / 2)
        beta2 = 1 - math.cos(p1.phi - p2.phi)
        denom = (2 - beta2) * (t + 1 / t) ** 2 + beta2 * (s + 1 / s) ** 2
        assert terms.log_t2 == p1.rho - p2.rho
        assert terms.log_s2 == p1.rho + p2.rho
        assert terms.beta2 == pytest.approx(beta2, rel=1e-12, abs=1e-15)
        assert terms.log_denom >= LOG8
        assert math.exp(terms.log_denom) == pytest.approx(denom, rel=1e-12)
        assert terms.a**2 == pytest.approx(1 - 8 / denom, abs=1e-12)


def test_hyperbolic_terms_at_extreme_radii(rng):
    for _ in range(100):
        log_phi = SignedLog(1, float(rng.uniform(-5000.0, 0.0)))
        p1 = PolarPoint(rho=float(rng.uniform(1e5, 1e6)), phi=0.0, log_phi=log_phi)
        p2 = PolarPoint(rho=float(rng.uniform(1e5, 1e6)), phi=0.0)
        terms = hyperbolic_terms(p1, p2)
        assert math.isfinite(terms.log_denom)
        assert terms.log_denom >= LOG8
        assert 0.0 <= terms.a <= 1.0
        assert terms.a**2 == pytest.approx(1 - math.exp(LOG8 - terms.log_denom), abs=1e-12)


def test_logdomain_resolves_tiny_distances():
    for step in (1e-9, 1e-12):
        near = PolarPoint(1.0 + step, 0.0)
        d = polar_distance_logdomain(PolarPoint(1.0, 0.0), near)
        assert d == pytest.approx(near.rho - 1.0, rel=1e-9)
    d = polar_distance_logdomain(PolarPoint(0.0, 0.0), PolarPoint(3.0, 1.0))
    assert d == pytest.approx(3.0, rel=1e-12)


def test_logdomain_on_the_same_ray():
    assert polar_distance_logdomain(PolarPoint(1e4, 0.0), PolarPoint(1e4, 0.0)) == 0.0
    for rho1, rho2 in ((0.5, 7.25), (120.0, 3.0), (5000.0, 9000.0)):
        d = polar_distance_logdomain(PolarPoint(rho1, 0.0), PolarPoint(rho2, 0.0))
        assert abs(d - abs(rho1 - rho2)) <= 1e-9


def test_logdomain_matches_direct_path(rng):
    for _ in range(200):
        p1, p2 = random_polar_point(rng, 200.0), random_polar_point(rng, 200.0)
        direct = polar_distance(p1, p2)
        assert abs(polar_distance_logdomain(p1, p2) - direct) <= 1e-9 * max(1.0, direct)


def test_logdomain_stays_finite_at_huge_radii():
    tiny = SignedLog(1, -5000.0)
    p1 = PolarPoint(rho=1e6, phi=0.0, log_phi=tiny)
    p2 = PolarPoint(rho=1e6, phi=0.0)
    d = polar_distance_logdomain(p1, p2)
    # d is close to 2 rho + 2 log(phi)
    assert math.isfinite(d)
    assert d == pytest.approx(2e6 - 10000.0, rel=1e-6)


def test_signed_log_sum_cancels_exactly():
    a = SignedLog.from_float(3.0)
    assert signed_log_sum([a, -a]).is_zero
    total = signed_log_sum([a, SignedLog.from_float(-1.0)])
    assert total.to_float() == pytest.approx(2.0)


def test_log_beta2_small_and_large_angles():
    assert log_beta2(SignedLog(1, -1000.0)) == pytest.approx(-2000.0 - math.log(2))
    assert math.exp(log_beta2(SignedLog.from_float(1.0))) == pytest.approx(1 - math.cos(1.0))
    assert log_beta2(SignedLog(0, -math.inf)) == -math.inf


def test_log_sinh():
    assert log_sinh(0.0) == -math.inf
    assert log_sinh(1.0) == pytest.approx(math.log(math.sinh(1.0)))
    assert log_sinh(500.0) == pytest.approx(500.0 - math.log(2))


def test_parse_polar_literal():
    plain = parse_polar_literal("2.5,0.25")
    assert (plain.rho, plain.phi) == (2.5, 0.25)
    logged = parse_polar_literal("10,logphi:-,-800")
    assert logged.log_phi == SignedLog(-1, -800.0)
    assert logged.phi == 0.0
    with pytest.raises(InputFormatError):
        parse_polar_literal("abc")
    with pytest.raises(InputFormatError):
        parse_polar_literal("1,logphi:?,3")


def test_witness_point_examples():
    zero = witness_point(DiscreteFunction.zero(2), 0.5)
    assert (zero.rho, zero.phi) == (4.0, 0.0)
    point = witness_point(DiscreteFunction(2, ((1, 1),)), 0.5)
    assert point.rho == 4.0
    assert point.phi == pytest.approx(math.exp(-2.0), rel=1e-15)


def test_witness_point_rejects_non_positive_eps():
    with pytest.raises(OutOfDomainError):
        witness_point(DiscreteFunction.zero(1), 0.0)


def test_witness_distance_of_equal_functions():
    g = DiscreteFunction(Fraction(3, 2), ((Fraction(1, 2), 2),))
    assert witness_distance(g, g, 1e-3) == 0.0


def test_witness_distance_of_zero_functions():
    g1, g2 = DiscreteFunction.zero(1), DiscreteFunction.zero(3)
    for eps in (0.5, 1e-2, 1e-4):
        assert abs(eps * witness_distance(g1, g2, eps) - 2.0) <= 1e-9


def test_witness_distance_against_high_precision_oracle(branching_discrete):
    g1, g2 = branching_discrete
    for eps in (0.25, 0.1, 0.05):
        oracle = witness_distance_oracle(g1, g2, eps)
        assert witness_distance(g1, g2, eps) == pytest.approx(oracle, rel=1e-9)


def test_asymptotic_error_decreases(branching_discrete):
    g1, g2 = branching_discrete
    report = convergence_report(g1, g2, EpsilonSchedule.dyadic(4, 20))
    assert report.is_monotone_after(4)
    assert report.final_error <= 1e-3
    assert asymptotic_error(g1, g2, 2.0**-20) == pytest.approx(report.final_error)
    order = report.empirical_order(4)
    assert order is not None
    assert 0.8 <= order <= 1.2


def test_asymptotic_error_on_random_branching_pairs():
    rng = np.random.default_rng(7)
    for _ in range(5):
        report = convergence_report(*branching_discrete_pair(rng), EpsilonSchedule.dyadic(4, 20))
        assert report.is_monotone_after(4)
        assert report.final_error <= 1e-3
