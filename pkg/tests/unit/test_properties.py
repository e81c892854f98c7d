"""Property-based checks of the metric, the embeddings and the isometry."""

from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from tests.strategies import continuations, discrete_functions, pl_families
from tree_subcone.core_tree import (
    distance,
    distance_discrete,
    geodesic_point,
    pairing_defects,
    segregation_moment,
)
from tree_subcone.embedding import embed_discrete
from tree_subcone.homogeneity import homogenize, homogenize_inverse, homogenize_pairwise_check
from tree_subcone.serialization import (
    discrete_function_to_doc,
    parse_discrete_function,
    parse_pl_function,
    pl_function_to_doc,
)

PROPERTY_SETTINGS = settings(
    max_examples=200, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)


@PROPERTY_SETTINGS
@given(family=pl_families(3))
def test_metric_axioms(family):
    f, g, h = family
    assert distance(f, g) == distance(g, f) >= 0
    assert (distance(f, g) == 0) == (f == g)
    assert distance(f, h) <= distance(f, g) + distance(g, h)


@PROPERTY_SETTINGS
@given(family=pl_families(4))
def test_four_point_condition(family):
    assert max(pairing_defects(*family)) <= 0


@PROPERTY_SETTINGS
@given(family=pl_families(2), fraction=st.integers(min_value=0, max_value=16))
def test_geodesic_points(family, fraction):
    f1, f2 = family
    d = distance(f1, f2)
    x = d * fraction / 16
    point = geodesic_point(f1, f2, x)
    assert distance(f1, point) == x
    assert distance(point, f2) == d - x
    assert geodesic_point(f1, f2, 0) == f1
    assert geodesic_point(f1, f2, d) == f2


@PROPERTY_SETTINGS
@given(f=continuations(), g=continuations())
def test_segregation_is_symmetric(f, g):
    assert segregation_moment(f, g).s == segregation_moment(g, f).s


@PROPERTY_SETTINGS
@given(family=pl_families(3))
def test_homogeneity_is_an_isometry(family):
    f0, f, g = family
    assert homogenize(f0, f0).rho == 0
    assert homogenize_pairwise_check(f0, f, g) == 0
    assert homogenize_inverse(f0, homogenize(f0, f)) == f


@PROPERTY_SETTINGS
@given(g1=discrete_functions(), g2=discrete_functions())
def test_discrete_inclusion_is_an_isometry(g1, g2):
    assert distance(embed_discrete(g1), embed_discrete(g2)) == distance_discrete(g1, g2)


@settings(max_examples=100, deadline=None)
@given(f=continuations(), g=discrete_functions())
def test_documents_round_trip(f, g):
    assert parse_pl_function(pl_function_to_doc(f)) == f
    assert parse_discrete_function(discrete_function_to_doc(g)) == g
