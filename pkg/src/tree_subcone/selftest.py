"""Invariant suite run by `tree-subcone selftest`.

Every property draws its cases from one seeded generator, so two runs with the same
seed check exactly the same cases and print the same report.
"""

from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from rich.progress import track

from .core_tree import distance, distance_discrete, geodesic_point, pairing_defects
from .embedding import brush, embed_discrete, random_tree_metric, star_metric, verify_embedding
from .errors import SubconeError
from .homogeneity import homogenize, homogenize_inverse, homogenize_pairwise_check
from .hyperbolic import (
    convergence_report,
    disk_distance,
    polar_distance,
    polar_distance_logdomain,
    polar_to_disk,
)
from .sampling import (
    branching_discrete_pair,
    random_discrete_pair,
    random_pl_family,
    random_polar_point,
)
from .serialization import (
    discrete_function_to_doc,
    parse_discrete_function,
    parse_pl_function,
    pl_function_to_doc,
)
from .types import EpsilonSchedule, SelftestOutcome, SlopeSchedule
from .utils.logger import console
from .verification import (
    CauchySpec,
    cauchy_distances,
    demo_chains,
    run_all_stages,
    run_completion,
)


WITNESS_SCHEDULE = EpsilonSchedule.dyadic(4, 20)
STAGE_SCHEDULE = EpsilonSchedule.dyadic(1, 64)


class PropertyFailure(AssertionError):
    """A property found a counterexample."""


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise PropertyFailure(message)


@dataclass(frozen=True)
class SelftestContext:
    rng: np.random.Generator
    slopes: SlopeSchedule


def _metric_axioms(ctx: SelftestContext) -> int:
    for case in range(1000):
        f, g, h = random_pl_family(ctx.rng, 3)
        _require(distance(f, g) == distance(g, f) >= 0, f"symmetry, case {case}")
        _require((distance(f, g) == 0) == (f == g), f"identity of indiscernibles, case {case}")
        _require(distance(f, h) <= distance(f, g) + distance(g, h), f"triangle, case {case}")
    return 1000


def _geodesics(ctx: SelftestContext) -> int:
    for case in range(500):
        f1, f2 = random_pl_family(ctx.rng, 2)
        d = distance(f1, f2)
        x, y = (Fraction(int(ctx.rng.integers(0, 65)), 64) * d for _ in range(2))
        gap = distance(geodesic_point(f1, f2, x), geodesic_point(f1, f2, y))
        _require(gap == abs(x - y), f"geodesic isometry, case {case}")
    return 500


def _four_point(ctx: SelftestContext) -> int:
    for case in range(1000):
        quadruple = random_pl_family(ctx.rng, 4)
        _require(max(pairing_defects(*quadruple)) <= 0, f"four-point defect, case {case}")
    return 1000


def _brushing(ctx: SelftestContext) -> int:
    metrics = [star_metric(4)] + [
        random_tree_metric(ctx.rng, int(ctx.rng.integers(2, 65))) for _ in range(100)
    ]
    for case, metric in enumerate(metrics):
        try:
            error = verify_embedding(metric, brush(metric, ctx.slopes))
        except SubconeError as e:
            raise PropertyFailure(f"case {case}: {e}") from e
        _require(error == 0, f"embedding error {error}, case {case}")
    return len(metrics)


def _discrete_embedding(ctx: SelftestContext) -> int:
    for case in range(500):
        g1, g2 = random_discrete_pair(ctx.rng)
        _require(
            distance(embed_discrete(g1), embed_discrete(g2)) == distance_discrete(g1, g2),
            f"discrete inclusion, case {case}",
        )
    return 500


def _homogeneity(ctx: SelftestContext) -> int:
    for case in range(1000):
        f0, f, g = random_pl_family(ctx.rng, 3)
        _require(homogenize(f0, f0).rho == 0, f"base not sent to zero, case {case}")
        _require(homogenize_pairwise_check(f0, f, g) == 0, f"distance changed, case {case}")
        _require(homogenize_inverse(f0, homogenize(f0, f)) == f, f"inverse, case {case}")
    return 1000


def _hyperbolic_oracles(ctx: SelftestContext) -> int:
    for case in range(10000):
        p1, p2 = random_polar_point(ctx.rng, 5.0), random_polar_point(ctx.rng, 5.0)
        direct = polar_distance(p1, p2)
        disk = disk_distance(polar_to_disk(p1), polar_to_disk(p2))
        _require(abs(direct - disk) <= 1e-12 * max(1.0, disk), f"disk oracle, case {case}")
        q1, q2 = random_polar_point(ctx.rng, 200.0), random_polar_point(ctx.rng, 200.0)
        direct = polar_distance(q1, q2)
        logdomain = polar_distance_logdomain(q1, q2)
        _require(abs(direct - logdomain) <= 1e-9 * max(1.0, direct), f"log path, case {case}")
    return 10000


def _witness_convergence(ctx: SelftestContext) -> int:
    for case in range(50):
        report = convergence_report(*branching_discrete_pair(ctx.rng), WITNESS_SCHEDULE)
        _require(report.is_monotone_after(4), f"non-monotone errors, case {case}")
        _require(report.final_error <= 1e-3, f"final error {report.final_error}, case {case}")
    return 50


def _witness_order(ctx: SelftestContext) -> int:
    for case in range(50):
        report = convergence_report(*branching_discrete_pair(ctx.rng), WITNESS_SCHEDULE)
        order = report.empirical_order(4)
        _require(order is not None and order >= 0.8, f"empirical order {order}, case {case}")
    return 50


def _staged_envelope(ctx: SelftestContext) -> int:
    for case in range(20):
        family = random_pl_family(ctx.rng, int(ctx.rng.integers(2, 6)), distinct=True)
        for record in run_all_stages(family, 8, STAGE_SCHEDULE):
            _require(record.succeeded, f"stage {record.stage} over its bound, case {case}")
    return 20


def _completion_envelope(ctx: SelftestContext) -> int:
    records = run_completion(demo_chains(), 6, STAGE_SCHEDULE)
    for record in records:
        _require(record.succeeded, f"completion stage {record.stage} over its bound")
    eps = [record.eps for record in records if record.eps is not None]
    _require(
        all(later < earlier / 2 for earlier, later in zip(eps, eps[1:])),
        f"completion eps not halving: {eps}",
    )
    return len(records)


def _cauchy_chain(ctx: SelftestContext) -> int:
    spec = CauchySpec()
    count = 0
    for k in range(21):
        for m in range(k + 1, 21):
            expected = Fraction(1, 2**k) - Fraction(1, 2**m)
            _require(cauchy_distances(spec, k, m) == expected, f"chain distance ({k}, {m})")
            count += 1
    return count


def _round_trip(ctx: SelftestContext) -> int:
    for case in range(500):
        f = random_pl_family(ctx.rng, 1)[0]
        g, _ = random_discrete_pair(ctx.rng)
        _require(parse_pl_function(pl_function_to_doc(f)) == f, f"PL round trip, case {case}")
        _require(
            parse_discrete_function(discrete_function_to_doc(g)) == g,
            f"discrete round trip, case {case}",
        )
    return 500


PROPERTIES: list[tuple[str, Callable[[SelftestContext], int]]] = [
    ("metric-axioms", _metric_axioms),
    ("geodesic-isometry", _geodesics),
    ("four-point", _four_point),
    ("brush-isometry", _brushing),
    ("discrete-inclusion", _discrete_embedding),
    ("homogeneity", _homogeneity),
    ("hyperbolic-oracles", _hyperbolic_oracles),
    ("witness-convergence", _witness_convergence),
    ("witness-order", _witness_order),
    ("staged-envelope", _staged_envelope),
    ("completion-envelope", _completion_envelope),
    ("cauchy-chain", _cauchy_chain),
    ("round-trip", _round_trip),
]


def run_selftest(seed: int = 0, slopes: SlopeSchedule | None = None) -> list[SelftestOutcome]:
    """Run every property with one seeded generator.

    Args:
        seed: Seed of the numpy generator shared by all properties.
        slopes: Slope schedule used by the brushing property; defaults to k_n = n.

    Returns:
        One outcome per property, in a fixed order.
    """
    ctx = SelftestContext(
        np.random.default_rng(seed), slopes if slopes is not None else SlopeSchedule()
    )
    outcomes = []
    for name, check in track(
        PROPERTIES, description="Checking", console=console, disable=not console.is_terminal
    ):
        try:
            cases = check(ctx)
        except (PropertyFailure, SubconeError) as e:
            outcomes.append(SelftestOutcome(name=name, passed=False, detail=str(e)))
        else:
            outcomes.append(SelftestOutcome(name=name, passed=True, cases=cases))
    return outcomes
