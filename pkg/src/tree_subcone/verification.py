"""Staged discretization of finite families of S, and Cauchy chains in S.

At stage N every pair of functions gets a sample time just after its moment of
segregation (closer than 1/2^(N+1)). Sampling every function at all those times
gives discrete functions, whose witness points are measured along the eps schedule
until every pair is within 1/2^N of its discrete distance. The error against the
distance in S is then below 1/2^(N-1).
"""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .core_tree import (
    DiscreteFunction,
    PLFunction,
    as_rational,
    distance,
    distance_discrete,
    segregation_moment,
    segregation_moment_discrete,
)
from .embedding import TreeMetric, brush
from .errors import InvariantError, OutOfDomainError, ScheduleExhaustedError
from .hyperbolic import witness_distance
from .types import EpsilonSchedule, PairRecord, SlopeSchedule, StageRecord

Pair = tuple[int, int]


@dataclass(frozen=True)
class PlannedPair:
    pair: Pair
    segregation: Fraction
    time: Fraction


@dataclass(frozen=True)
class SamplePlan:
    """Sample times of one stage, one per unordered pair."""

    stage: int
    pairs: tuple[PlannedPair, ...] = ()

    @property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(sorted({planned.time for planned in self.pairs}))

    def time_for(self, pair: Pair) -> Fraction:
        for planned in self.pairs:
            if planned.pair == pair:
                return planned.time
        raise KeyError(pair)


def _window_top(f1: PLFunction, f2: PLFunction, s: Fraction, width: Fraction) -> Fraction:
    top = s + width
    if s < min(f1.rho, f2.rho):
        # both functions are linear, with different slopes, up to the next breakpoint
        top = min(top, min(t for t in (*f1.times, *f2.times) if t > s))
    return top


def make_sample_plan(fs: Sequence[PLFunction], stage: int) -> SamplePlan:
    """Pick pairwise distinct sample times t with s < t < s + 1/2^(stage+1).

    Each time is taken from the window above the pair's segregation moment at the
    fraction (P + 1 + j) / (2(P + 1)) for the j-th of P pairs, nudged down when
    another pair already uses it. Within the window the two functions differ,
    unless one extends the other.

    Raises:
        InvariantError: Two of the functions are equal.
    """
    if stage < 1:
        raise OutOfDomainError(f"stage must be at least 1, got {stage}")
    width = Fraction(1, 2 ** (stage + 1))
    pairs = list(combinations(range(len(fs)), 2))
    count = len(pairs)
    used: set[Fraction] = set()
    planned = []
    for j, (k1, k2) in enumerate(pairs):
        result = segregation_moment(fs[k1], fs[k2])
        if result.relation == "identical":
            raise InvariantError(f"functions {k1} and {k2} are equal", position=k1)
        s = result.s
        span = _window_top(fs[k1], fs[k2], s, width) - s
        nudge = 0
        while True:
            fraction = Fraction(count + 1 + j, 2 * (count + 1)) - Fraction(
                nudge, (nudge + 1) * 4 * (count + 1)
            )
            time = s + span * fraction
            if time not in used:
                break
            nudge += 1
        used.add(time)
        planned.append(PlannedPair((k1, k2), s, time))
    return SamplePlan(stage, tuple(planned))


def discretize(f: PLFunction, plan: SamplePlan) -> DiscreteFunction:
    """f sampled at the plan times inside [0, rho), zero values dropped."""
    support = []
    for time in plan.times:
        if time >= f.rho:
            break
        value = f.evaluate(time)
        if value != 0:
            support.append((time, value))
    return DiscreteFunction(f.rho, tuple(support))


def run_stage(
    fs: Sequence[PLFunction],
    stage: int,
    schedule: EpsilonSchedule,
    start_index: int = 0,
    targets: Mapping[Pair, Fraction] | None = None,
    bound: Fraction | None = None,
    eps_below: float | None = None,
    label: int | None = None,
) -> StageRecord:
    """Walk the schedule from start_index until every pair is 1/2^stage-close in D.

    Args:
        fs: Pairwise distinct functions.
        stage: Stage N; sample-time windows have width 1/2^(N+1).
        schedule: Decreasing eps values.
        start_index: First schedule index that may be chosen.
        targets: Distances to report errors against; defaults to the distances in S.
        bound: Envelope recorded with the stage; defaults to 1/2^(N-1).
        eps_below: Only eps strictly below this value may be chosen.
        label: Stage number recorded in the result; defaults to `stage`.

    Returns:
        The record of the first admissible eps.

    Raises:
        ScheduleExhaustedError: No eps in the schedule meets the threshold.
    """
    plan = make_sample_plan(fs, stage)
    bound = bound if bound is not None else Fraction(1, 2 ** (stage - 1))
    label = label if label is not None else stage
    if not plan.pairs:
        return StageRecord(stage=label, eps_index=start_index - 1, bound=bound)
    discrete = [discretize(f, plan) for f in fs]
    threshold = Fraction(1, 2**stage)
    d_discrete = {
        planned.pair: distance_discrete(discrete[planned.pair[0]], discrete[planned.pair[1]])
        for planned in plan.pairs
    }
    split = {
        planned.pair: segregation_moment_discrete(
            discrete[planned.pair[0]], discrete[planned.pair[1]]
        ).s
        for planned in plan.pairs
    }
    for index in range(start_index, len(schedule.values)):
        eps = schedule.values[index]
        if eps_below is not None and eps >= eps_below:
            continue
        scaled = {
            planned.pair: eps
            * witness_distance(discrete[planned.pair[0]], discrete[planned.pair[1]], eps)
            for planned in plan.pairs
        }
        if all(abs(scaled[pair] - d_discrete[pair]) <= threshold for pair in scaled):
            return StageRecord(
                stage=label,
                eps_index=index,
                eps=eps,
                bound=bound,
                pairs=[
                    _pair_record(fs, planned, scaled[planned.pair], d_discrete, split, targets)
                    for planned in plan.pairs
                ],
            )
    smallest = schedule.values[-1]
    raise ScheduleExhaustedError(
        f"stage {label}: no eps brings every pair within {threshold} of its discrete distance",
        smallest_eps=smallest,
    )


def _pair_record(
    fs: Sequence[PLFunction],
    planned: PlannedPair,
    eps_d_x: float,
    d_discrete: Mapping[Pair, Fraction],
    split: Mapping[Pair, Fraction],
    targets: Mapping[Pair, Fraction] | None,
) -> PairRecord:
    """Measurements of one pair.

    The discretizations of a pair first differ at a plan time t* with
    s <= t* <= t, or agree up to the shorter domain when one function extends
    the other. Their distance is then d_S - 2(t* - s), recorded as the slack.
    """
    k1, k2 = planned.pair
    target = targets[planned.pair] if targets is not None else distance(fs[k1], fs[k2])
    return PairRecord(
        pair=planned.pair,
        sample_time=planned.time,
        segregation=planned.segregation,
        discrete_segregation=split[planned.pair],
        d_s=target,
        d_d=d_discrete[planned.pair],
        eps_d_x=eps_d_x,
        err_vs_d=abs(eps_d_x - float(d_discrete[planned.pair])),
        err_vs_s=abs(eps_d_x - float(target)),
        slack=float(2 * (split[planned.pair] - planned.segregation)),
    )


def run_all_stages(
    fs: Sequence[PLFunction], max_stage: int, schedule: EpsilonSchedule
) -> list[StageRecord]:
    """Stages 1..max_stage; each starts strictly after the eps chosen by the previous one."""
    records = []
    start = 0
    for stage in range(1, max_stage + 1):
        record = run_stage(fs, stage, schedule, start_index=start)
        records.append(record)
        start = record.eps_index + 1
    return records


def tree_subcone_witness(
    metric: TreeMetric,
    max_stage: int,
    schedule: EpsilonSchedule,
    slopes: SlopeSchedule | None = None,
) -> list[StageRecord]:
    """Brush a finite tree metric into S and run the stages on the image."""
    return run_all_stages(brush(metric, slopes), max_stage, schedule)


@dataclass(frozen=True)
class CauchySpec:
    """Extension chain: member k is the stem followed by a k-segment zigzag.

    Knots sit at rho_stem + L(1 - 2^-j) with values v0 + A(-1)^(j+1), so every
    member extends the previous one and the domains increase to rho_stem + L.
    """

    amplitude: Fraction = Fraction(1)
    limit_length: Fraction = Fraction(1)
    stem: PLFunction = field(default_factory=PLFunction.zero)

    def __post_init__(self) -> None:
        object.__setattr__(self, "amplitude", as_rational(self.amplitude))
        object.__setattr__(self, "limit_length", as_rational(self.limit_length))
        if self.amplitude == 0:
            raise InvariantError("zigzag amplitude must be non-zero")
        if self.limit_length <= 0:
            raise InvariantError(f"limit length must be positive, got {self.limit_length}")

    @property
    def limit_rho(self) -> Fraction:
        return self.stem.rho + self.limit_length

    def rho(self, k: int) -> Fraction:
        return self.stem.rho + self.limit_length * (1 - Fraction(1, 2**k))

    def member(self, k: int) -> PLFunction:
        if k < 0:
            raise OutOfDomainError(f"chain index must be non-negative, got {k}")
        base = self.stem.breakpoints[-1][1]
        knots = [
            (self.rho(j), base + self.amplitude * (1 if j % 2 else -1)) for j in range(1, k + 1)
        ]
        return PLFunction((*self.stem.breakpoints, *knots))

    def distance_to_limit(self, k: int) -> Fraction:
        return self.limit_rho - self.rho(k)


def cauchy_distances(spec: CauchySpec, k: int, m: int) -> Fraction:
    """Exact d(f_k, f_m) inside one chain."""
    return distance(spec.member(k), spec.member(m))


def limit_distance(spec1: CauchySpec, spec2: CauchySpec, search: int = 64) -> Fraction:
    """Distance between the limits of two chains in the completion of S.

    Members only grow, so once two members branch before either domain ends the
    branch point is final. Chains that never branch within `search` members are
    treated as sharing their common prefix.
    """
    if spec1 == spec2:
        return Fraction(0)
    for k in range(search + 1):
        f1, f2 = spec1.member(k), spec2.member(k)
        s = segregation_moment(f1, f2).s
        if s < min(f1.rho, f2.rho):
            return spec1.limit_rho + spec2.limit_rho - 2 * s
    return abs(spec1.limit_rho - spec2.limit_rho)


def limit_defect(spec: CauchySpec, candidate: PLFunction, k_max: int) -> Fraction:
    """max over k <= k_max of |d(candidate, f_k) - (rho_inf - rho_k)|.

    The limit would score zero; a piecewise-linear candidate with fewer than k_max
    breakpoints after the stem cannot.
    """
    return max(
        abs(distance(candidate, spec.member(k)) - spec.distance_to_limit(k))
        for k in range(k_max + 1)
    )


def representative_index(spec: CauchySpec, r: int) -> int:
    """Smallest n with d(f_n, limit) = L 2^-n below 1/2^(r+1)."""
    n = 0
    while spec.distance_to_limit(n) >= Fraction(1, 2 ** (r + 1)):
        n += 1
    return n


def completion_witness(
    seqs: Sequence[CauchySpec],
    r: int,
    schedule: EpsilonSchedule,
    start_index: int = 0,
    previous_eps: float | None = None,
) -> StageRecord:
    """Witness points for the limits of the chains, within 1/2^(r-1) of the limit distances.

    Every chain is represented by a member 1/2^(r+1)-close to its limit; the
    representatives go through stage r + 1. When previous_eps is given the chosen
    eps is below previous_eps / 2.
    """
    if r < 1:
        raise OutOfDomainError(f"stage must be at least 1, got {r}")
    unique: list[CauchySpec] = []
    owner: list[int] = []
    for spec in seqs:
        if spec not in unique:
            unique.append(spec)
        owner.append(unique.index(spec))
    indices = [representative_index(spec, r) for spec in unique]
    while True:
        reps = [spec.member(n) for spec, n in zip(unique, indices)]
        if len(set(reps)) == len(reps):
            break
        indices = [n + 1 for n in indices]
    targets = {
        (i, j): limit_distance(unique[i], unique[j]) for i, j in combinations(range(len(unique)), 2)
    }
    record = run_stage(
        reps,
        r + 1,
        schedule,
        start_index=start_index,
        targets=targets,
        bound=Fraction(1, 2 ** (r - 1)),
        eps_below=previous_eps / 2 if previous_eps is not None else None,
        label=r,
    )
    by_unique = {pair.pair: pair for pair in record.pairs}
    pairs = []
    for i, j in combinations(range(len(seqs)), 2):
        a, b = owner[i], owner[j]
        if a == b:
            rho = reps[a].rho
            pairs.append(
                PairRecord(
                    pair=(i, j),
                    sample_time=rho,
                    segregation=rho,
                    discrete_segregation=rho,
                    d_s=Fraction(0),
                    d_d=Fraction(0),
                    eps_d_x=0.0,
                    err_vs_d=0.0,
                    err_vs_s=0.0,
                    slack=0.0,
                )
            )
        else:
            pairs.append(by_unique[(min(a, b), max(a, b))].model_copy(update={"pair": (i, j)}))
    return record.model_copy(update={"pairs": pairs})


def run_completion(
    seqs: Sequence[CauchySpec], max_r: int, schedule: EpsilonSchedule
) -> list[StageRecord]:
    """completion_witness for r = 1..max_r with eps_(r+1) < eps_r / 2."""
    records = []
    start, previous = 0, None
    for r in range(1, max_r + 1):
        record = completion_witness(seqs, r, schedule, start_index=start, previous_eps=previous)
        records.append(record)
        if record.eps is not None:
            start, previous = record.eps_index + 1, record.eps
    return records


def demo_chains(amplitude: Fraction = Fraction(1)) -> list[CauchySpec]:
    """Two chains branching at 0, one branching off the first later, and a repeat."""
    first = CauchySpec(amplitude=amplitude)
    return [
        first,
        CauchySpec(amplitude=-amplitude),
        CauchySpec(amplitude=amplitude, limit_length=Fraction(1, 2), stem=first.member(2)),
        first,
    ]
