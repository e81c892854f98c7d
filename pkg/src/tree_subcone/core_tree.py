"""Exact model of the functional trees S and D.

S is represented by continuous piecewise-linear functions with rational breakpoints,
D by finitely supported functions on a half-open domain. Both carry the segregation
metric d(f1, f2) = (rho1 - s) + (rho2 - s), where s is the moment of segregation.
"""

from __future__ import annotations

from bisect import bisect_right
from collections.abc import Callable, Iterable
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Literal, TypeVar

from .errors import InvariantError, OutOfDomainError

Rational = Fraction
Breakpoint = tuple[Fraction, Fraction]
Relation = Literal["identical", "first-extends-second", "second-extends-first", "branch"]

_T = TypeVar("_T")


def as_rational(value: int | str | Fraction) -> Fraction:
    """Coerce an int, a "p/q" string or a Fraction; floats are refused."""
    if isinstance(value, bool) or isinstance(value, float):
        raise TypeError(f"exact rational expected, got {value!r}")
    return value if isinstance(value, Fraction) else Fraction(value)


def _merge_collinear(points: Iterable[Breakpoint]) -> tuple[Breakpoint, ...]:
    kept: list[Breakpoint] = []
    for point in points:
        if len(kept) >= 2:
            (t0, v0), (t1, v1) = kept[-2], kept[-1]
            if (v1 - v0) * (point[0] - t1) == (point[1] - v1) * (t1 - t0):
                kept.pop()
        kept.append(point)
    return tuple(kept)


@dataclass(frozen=True)
class PLFunction:
    """Continuous piecewise-linear function on [0, rho] with f(0) = 0.

    Adjacent collinear segments are merged on construction, so two instances are
    equal exactly when they describe the same function.
    """

    breakpoints: tuple[Breakpoint, ...]

    def __post_init__(self) -> None:
        points = tuple((as_rational(t), as_rational(v)) for t, v in self.breakpoints)
        if not points:
            raise InvariantError("at least the breakpoint (0, 0) is required", position=0)
        if points[0] != (0, 0):
            t0, v0 = points[0]
            raise InvariantError(f"first breakpoint must be (0, 0), got ({t0}, {v0})", position=0)
        for index in range(1, len(points)):
            if points[index][0] <= points[index - 1][0]:
                raise InvariantError(
                    f"breakpoint times must increase strictly ({points[index - 1][0]} then "
                    f"{points[index][0]})",
                    position=index,
                )
        object.__setattr__(self, "breakpoints", _merge_collinear(points))

    @classmethod
    def zero(cls, length: int | str | Fraction = 0) -> PLFunction:
        length = as_rational(length)
        if length < 0:
            raise OutOfDomainError(f"domain length must be non-negative, got {length}")
        if length == 0:
            return cls(((Fraction(0), Fraction(0)),))
        return cls(((Fraction(0), Fraction(0)), (length, Fraction(0))))

    @classmethod
    def linear(cls, slope: int | str | Fraction, length: int | str | Fraction) -> PLFunction:
        slope, length = as_rational(slope), as_rational(length)
        if length < 0:
            raise OutOfDomainError(f"domain length must be non-negative, got {length}")
        if length == 0:
            return cls.zero()
        return cls(((Fraction(0), Fraction(0)), (length, slope * length)))

    @property
    def rho(self) -> Fraction:
        return self.breakpoints[-1][0]

    @cached_property
    def times(self) -> tuple[Fraction, ...]:
        return tuple(t for t, _ in self.breakpoints)

    @cached_property
    def slopes(self) -> tuple[Fraction, ...]:
        """Slope of every segment, in order."""
        points = self.breakpoints
        return tuple(
            (points[i + 1][1] - points[i][1]) / (points[i + 1][0] - points[i][0])
            for i in range(len(points) - 1)
        )

    def _segment(self, t: Fraction) -> int:
        return min(bisect_right(self.times, t) - 1, len(self.breakpoints) - 2)

    def evaluate(self, t: int | str | Fraction) -> Fraction:
        t = as_rational(t)
        if not 0 <= t <= self.rho:
            raise OutOfDomainError(f"t = {t} outside the domain [0, {self.rho}]")
        if len(self.breakpoints) == 1:
            return Fraction(0)
        index = self._segment(t)
        t0, v0 = self.breakpoints[index]
        return v0 + self.slopes[index] * (t - t0)

    def right_slope(self, t: int | str | Fraction) -> Fraction:
        """Slope of the segment starting at or covering t, for 0 <= t < rho."""
        t = as_rational(t)
        if not 0 <= t < self.rho:
            raise OutOfDomainError(f"no segment to the right of t = {t} on [0, {self.rho}]")
        return self.slopes[self._segment(t)]

    def restrict(self, length: int | str | Fraction) -> PLFunction:
        """The prefix of this function on [0, length]."""
        length = as_rational(length)
        if not 0 <= length <= self.rho:
            raise OutOfDomainError(f"cannot restrict [0, {self.rho}] to [0, {length}]")
        if length == self.rho:
            return self
        if length == 0:
            return PLFunction.zero()
        kept = [point for point in self.breakpoints if point[0] < length]
        return PLFunction((*kept, (length, self.evaluate(length))))

    def tail(self, a: int | str | Fraction) -> PLFunction:
        """The continuation after a, as u -> f(a + u) - f(a) on [0, rho - a]."""
        a = as_rational(a)
        base = self.evaluate(a)
        later = [(t - a, v - base) for t, v in self.breakpoints if t > a]
        return PLFunction(((Fraction(0), Fraction(0)), *later))

    def concat(self, continuation: PLFunction) -> PLFunction:
        """This function followed by `continuation`, glued continuously at rho."""
        rho, end = self.breakpoints[-1]
        later = [(rho + t, end + v) for t, v in continuation.breakpoints[1:]]
        return PLFunction((*self.breakpoints, *later))

    def add_linear(self, slope: int | str | Fraction) -> PLFunction:
        slope = as_rational(slope)
        return PLFunction(tuple((t, v + slope * t) for t, v in self.breakpoints))

    def continue_linear(
        self, slope: int | str | Fraction, until: int | str | Fraction
    ) -> PLFunction:
        until = as_rational(until)
        if until < self.rho:
            raise OutOfDomainError(f"cannot continue [0, {self.rho}] back to {until}")
        return self.concat(PLFunction.linear(slope, until - self.rho))

    def zero_prefix_length(self) -> Fraction:
        """Length of the longest initial interval on which the function vanishes."""
        for index, slope in enumerate(self.slopes):
            if slope != 0:
                return self.times[index]
        return self.rho


@dataclass(frozen=True)
class DiscreteFunction:
    """Element of D: zero on [0, rho) except at finitely many support points."""

    rho: Fraction
    support: tuple[Breakpoint, ...] = ()

    def __post_init__(self) -> None:
        rho = as_rational(self.rho)
        if rho < 0:
            raise InvariantError(f"domain length must be non-negative, got {rho}")
        support = tuple((as_rational(t), as_rational(a)) for t, a in self.support)
        for index, (t, a) in enumerate(support):
            if not 0 < t < rho:
                raise InvariantError(f"support time {t} outside (0, {rho})", position=index)
            if a == 0:
                raise InvariantError(f"support value at t = {t} must be non-zero", position=index)
            if index and t <= support[index - 1][0]:
                raise InvariantError("support times must increase strictly", position=index)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "support", support)

    @classmethod
    def zero(cls, rho: int | str | Fraction = 0) -> DiscreteFunction:
        return cls(as_rational(rho))

    @cached_property
    def values(self) -> dict[Fraction, Fraction]:
        return dict(self.support)

    def value_at(self, t: int | str | Fraction) -> Fraction:
        t = as_rational(t)
        if not 0 <= t < self.rho:
            raise OutOfDomainError(f"t = {t} outside the domain [0, {self.rho})")
        return self.values.get(t, Fraction(0))

    def restrict(self, length: int | str | Fraction) -> DiscreteFunction:
        """The prefix of this function on [0, length)."""
        length = as_rational(length)
        if not 0 <= length <= self.rho:
            raise OutOfDomainError(f"cannot restrict [0, {self.rho}) to [0, {length})")
        return DiscreteFunction(length, tuple(p for p in self.support if p[0] < length))


@dataclass(frozen=True)
class SegregationResult:
    s: Fraction
    relation: Relation


def _relation(s: Fraction, rho1: Fraction, rho2: Fraction) -> Relation:
    if s == rho1 == rho2:
        return "identical"
    if s == rho2:
        return "first-extends-second"
    if s == rho1:
        return "second-extends-first"
    return "branch"


def segregation_moment(f1: PLFunction, f2: PLFunction) -> SegregationResult:
    """Supremum of the times up to which f1 and f2 agree identically.

    Both functions are linear between merged breakpoints and agree at t = 0, so the
    first merged segment on which their slopes differ starts at the moment of
    segregation.
    """
    limit = min(f1.rho, f2.rho)
    times1, times2 = f1.times, f2.times
    i = j = 0
    t = Fraction(0)
    s = limit
    while t < limit:
        while times1[i + 1] <= t:
            i += 1
        while times2[j + 1] <= t:
            j += 1
        if f1.slopes[i] != f2.slopes[j]:
            s = t
            break
        t = min(times1[i + 1], times2[j + 1])
    return SegregationResult(s=s, relation=_relation(s, f1.rho, f2.rho))


def segregation_moment_discrete(g1: DiscreteFunction, g2: DiscreteFunction) -> SegregationResult:
    """First time the two supports disagree, capped at the shorter domain."""
    limit = min(g1.rho, g2.rho)
    v1, v2 = g1.values, g2.values
    disagreements = [t for t in v1.keys() | v2.keys() if v1.get(t, 0) != v2.get(t, 0)]
    s = min(min(disagreements, default=limit), limit)
    return SegregationResult(s=s, relation=_relation(s, g1.rho, g2.rho))


def distance(f1: PLFunction, f2: PLFunction) -> Fraction:
    s = segregation_moment(f1, f2).s
    return (f1.rho - s) + (f2.rho - s)


def distance_discrete(g1: DiscreteFunction, g2: DiscreteFunction) -> Fraction:
    s = segregation_moment_discrete(g1, g2).s
    return (g1.rho - s) + (g2.rho - s)


def evaluate(f: PLFunction, t: int | str | Fraction) -> Fraction:
    return f.evaluate(t)


def geodesic_point(f1: PLFunction, f2: PLFunction, x: int | str | Fraction) -> PLFunction:
    """Point at distance x from f1 on the unique geodesic from f1 to f2."""
    x = as_rational(x)
    s = segregation_moment(f1, f2).s
    total = (f1.rho - s) + (f2.rho - s)
    if not 0 <= x <= total:
        raise OutOfDomainError(f"x = {x} outside [0, {total}]")
    if x <= f1.rho - s:
        return f1.restrict(f1.rho - x)
    return f2.restrict(x + 2 * s - f1.rho)


def geodesic_point_discrete(
    g1: DiscreteFunction, g2: DiscreteFunction, x: int | str | Fraction
) -> DiscreteFunction:
    x = as_rational(x)
    s = segregation_moment_discrete(g1, g2).s
    total = (g1.rho - s) + (g2.rho - s)
    if not 0 <= x <= total:
        raise OutOfDomainError(f"x = {x} outside [0, {total}]")
    if x <= g1.rho - s:
        return g1.restrict(g1.rho - x)
    return g2.restrict(x + 2 * s - g1.rho)


def four_point_defect(
    f1: _T, f2: _T, f3: _T, f4: _T, metric: Callable[[_T, _T], Fraction] | None = None
) -> Fraction:
    """d12 + d34 - max(d13 + d24, d14 + d23); never positive in a real tree."""
    d = metric or distance  # type: ignore[assignment]
    return d(f1, f2) + d(f3, f4) - max(d(f1, f3) + d(f2, f4), d(f1, f4) + d(f2, f3))


def pairing_defects(
    f1: _T, f2: _T, f3: _T, f4: _T, metric: Callable[[_T, _T], Fraction] | None = None
) -> tuple[Fraction, Fraction, Fraction]:
    """The four-point defect for each of the three pairings of a quadruple."""
    return (
        four_point_defect(f1, f2, f3, f4, metric),
        four_point_defect(f1, f3, f2, f4, metric),
        four_point_defect(f1, f4, f2, f3, metric),
    )
