"""Tests for the seeded random generators."""

import math
from fractions import Fraction

from tree_subcone.core_tree import segregation_moment_discrete
from tree_subcone.sampling import (
    TIME_STEP,
    branching_discrete_pair,
    random_continuation,
    random_discrete_pair,
    random_pl_family,
    random_polar_point,
)


def test_continuations_use_quarter_steps(rng):
    for _ in range(50):
        f = random_continuation(rng)
        assert f.rho > 0
        assert all((t * 4).denominator == 1 for t in f.times)


def test_distinct_families(rng):
    for _ in range(20):
        family = random_pl_family(rng, 6, distinct=True)
        assert len(family) == 6
        assert len(set(family)) == 6


def test_families_share_prefixes(rng):
    shared = 0
    for _ in range(20):
        first, second = random_pl_family(rng, 2)
        if first.breakpoints[:2] == second.breakpoints[:2]:
            shared += 1
    assert shared > 0


def test_discrete_pairs_agree_before_the_cut(rng):
    for _ in range(50):
        g1, g2 = random_discrete_pair(rng)
        s = segregation_moment_discrete(g1, g2).s
        assert g1.restrict(s) == g2.restrict(s)
        assert all(t.denominator <= 8 for t, _ in g2.support)


def test_branching_pairs_split_at_a_support_time(rng):
    for _ in range(50):
        g1, g2 = branching_discrete_pair(rng)
        result = segregation_moment_discrete(g1, g2)
        assert result.relation == "branch"
        assert result.s + TIME_STEP <= min(g1.rho, g2.rho)
        assert g2.value_at(result.s) == 0
        assert Fraction(1, 3) <= abs(g1.value_at(result.s)) <= Fraction(5, 3)


def test_random_polar_points_stay_in_range(rng):
    for _ in range(100):
        p = random_polar_point(rng, 5.0)
        assert 0 <= p.rho <= 5.0
        assert -math.pi <= p.phi <= math.pi
