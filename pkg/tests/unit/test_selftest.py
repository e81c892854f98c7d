"""Tests for the invariant suite."""

from fractions import Fraction

import pytest

from tree_subcone.selftest import PROPERTIES, run_selftest
from tree_subcone.types import SlopeSchedule


@pytest.fixture(scope="module")
def seed_zero_outcomes():
    return run_selftest(seed=0)


def test_all_properties_pass(seed_zero_outcomes):
    assert [outcome.name for outcome in seed_zero_outcomes] == [name for name, _ in PROPERTIES]
    failed = [outcome for outcome in seed_zero_outcomes if not outcome.passed]
    assert failed == []
    assert all(outcome.cases > 0 for outcome in seed_zero_outcomes)


def test_case_counts(seed_zero_outcomes):
    cases = {outcome.name: outcome.cases for outcome in seed_zero_outcomes}
    assert cases == {
        "metric-axioms": 1000,
        "geodesic-isometry": 500,
        "four-point": 1000,
        "brush-isometry": 101,
        "discrete-inclusion": 500,
        "homogeneity": 1000,
        "hyperbolic-oracles": 10000,
        "witness-convergence": 50,
        "witness-order": 50,
        "staged-envelope": 20,
        "completion-envelope": 6,
        "cauchy-chain": 210,
        "round-trip": 500,
    }


def test_same_seed_same_report(seed_zero_outcomes):
    assert run_selftest(seed=0) == seed_zero_outcomes


def test_constant_slopes_break_the_brushing_property():
    slopes = SlopeSchedule.model_construct(slopes=[Fraction(1)] * 64)
    outcomes = {outcome.name: outcome for outcome in run_selftest(seed=0, slopes=slopes)}
    assert not outcomes["brush-isometry"].passed
    assert outcomes["brush-isometry"].detail
    assert outcomes["metric-axioms"].passed
