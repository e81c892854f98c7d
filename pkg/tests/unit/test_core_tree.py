"""Tests for the exact functional trees S and D."""

from fractions import Fraction

import pytest

from tree_subcone.core_tree import (
    DiscreteFunction,
    PLFunction,
    as_rational,
    distance,
    distance_discrete,
    evaluate,
    four_point_defect,
    geodesic_point,
    geodesic_point_discrete,
    pairing_defects,
    segregation_moment,
    segregation_moment_discrete,
)
from tree_subcone.errors import InvariantError, OutOfDomainError
from tree_subcone.sampling import random_pl_family


def test_as_rational_refuses_floats():
    assert as_rational("3/4") == Fraction(3, 4)
    with pytest.raises(TypeError):
        as_rational(0.5)  # type: ignore[arg-type]
    with pytest.raises(TypeError):
        as_rational(True)


def test_pl_function_requires_origin():
    with pytest.raises(InvariantError) as exc:
        PLFunction(((1, 0), (2, 1)))
    assert exc.value.position == 0


def test_pl_function_rejects_non_increasing_times():
    with pytest.raises(InvariantError) as exc:
        PLFunction(((0, 0), (1, 1), (1, 2)))
    assert exc.value.position == 2


def test_collinear_breakpoints_are_merged():
    f = PLFunction(((0, 0), (1, 1), (2, 2)))
    assert f == PLFunction.linear(1, 2)
    assert f.breakpoints == ((0, 0), (2, 2))


def test_segregation_of_distinct_slopes_is_zero(slope_one, slope_two):
    result = segregation_moment(slope_one, slope_two)
    assert result.s == 0
    assert result.relation == "branch"


def test_segregation_of_identical_functions(tent):
    result = segregation_moment(tent, tent)
    assert result.s == tent.rho
    assert result.relation == "identical"


def test_segregation_at_a_kink(tent):
    result = segregation_moment(PLFunction(((0, 0), (1, 1), (2, 2))), tent)
    assert result.s == 1
    assert result.relation == "branch"


def test_segregation_of_an_extension():
    short, long = PLFunction.linear(1, 1), PLFunction.linear(1, 3)
    assert segregation_moment(short, long).relation == "second-extends-first"
    assert segregation_moment(long, short).relation == "first-extends-second"


def test_distance_examples(slope_one, slope_two):
    assert distance(slope_one, slope_two) == 5
    assert distance(PLFunction.linear(1, 1), PLFunction.linear(1, 3)) == 2
    assert distance(slope_one, slope_one) == 0


def test_distance_to_zero_is_domain_length(tent):
    assert distance(tent, PLFunction.zero()) == 2


def test_discrete_distance_examples():
    g1 = DiscreteFunction(2, ((1, 1),))
    g2 = DiscreteFunction(2, ((1, 1), (Fraction(3, 2), 1)))
    assert segregation_moment_discrete(g1, g2).s == Fraction(3, 2)
    assert distance_discrete(g1, g2) == 1
    assert distance_discrete(g1, g1) == 0
    assert distance_discrete(DiscreteFunction.zero(1), DiscreteFunction.zero(3)) == 2


def test_discrete_function_validation():
    with pytest.raises(InvariantError):
        DiscreteFunction(1, ((1, 1),))
    with pytest.raises(InvariantError):
        DiscreteFunction(2, ((1, 0),))
    with pytest.raises(InvariantError):
        DiscreteFunction(-1)


def test_evaluate_examples(tent):
    assert evaluate(tent, 0) == 0
    assert evaluate(PLFunction.linear(2, 3), Fraction(1, 2)) == 1
    assert evaluate(tent, Fraction(3, 2)) == Fraction(1, 2)


def test_evaluate_outside_domain(tent):
    with pytest.raises(OutOfDomainError):
        evaluate(tent, 3)


def test_geodesic_endpoints(slope_one, slope_two):
    d = distance(slope_one, slope_two)
    assert geodesic_point(slope_one, slope_two, 0) == slope_one
    assert geodesic_point(slope_one, slope_two, d) == slope_two


def test_geodesic_through_the_branch_point(slope_one):
    f2 = PLFunction(((0, 0), (1, 1), (2, 0)))
    point = geodesic_point(slope_one, f2, 1)
    assert point == PLFunction.linear(1, 1)
    assert distance(point, slope_one) == 1
    assert distance(point, f2) == 1


def test_geodesic_rejects_x_beyond_distance(slope_one, slope_two):
    with pytest.raises(OutOfDomainError):
        geodesic_point(slope_one, slope_two, 6)


def test_geodesic_in_discrete_tree():
    g1 = DiscreteFunction(2, ((1, 1),))
    g2 = DiscreteFunction(3, ((1, 2),))
    point = geodesic_point_discrete(g1, g2, Fraction(5, 2))
    assert point == DiscreteFunction(Fraction(5, 2), ((1, 2),))
    assert distance_discrete(point, g1) == Fraction(5, 2)
    assert distance_discrete(point, g2) == Fraction(1, 2)


def test_four_point_degenerate_pairs(slope_one, slope_two):
    assert four_point_defect(slope_one, slope_one, slope_one, slope_one) == 0
    defect = four_point_defect(slope_one, slope_one, slope_two, slope_two)
    assert defect == -2 * distance(slope_one, slope_two)


def test_pairing_defects_never_positive(rng):
    for _ in range(50):
        assert max(pairing_defects(*random_pl_family(rng, 4))) <= 0


def test_four_point_defect_with_discrete_metric():
    quad = [DiscreteFunction(2, ((1, k),)) for k in (1, 2, 3)] + [DiscreteFunction.zero(1)]
    assert max(pairing_defects(*quad, metric=distance_discrete)) <= 0


def test_restrict_tail_and_concat_are_inverse(tent):
    head, tail = tent.restrict(1), tent.tail(1)
    assert head.concat(tail) == tent
    assert tail == PLFunction.linear(-1, 1)


def test_zero_prefix_length():
    f = PLFunction.zero(2).concat(PLFunction.linear(3, 1))
    assert f.zero_prefix_length() == 2
    assert PLFunction.zero(3).zero_prefix_length() == 3
