"""Seeded random generators of functions, families and hyperbolic points.

Families are grown by cutting an existing member and continuing it, so samples
contain shared prefixes, extensions and branch points rather than functions that
all branch at 0.
"""

import math
from fractions import Fraction

import numpy as np

from .core_tree import DiscreteFunction, PLFunction
from .hyperbolic import PolarPoint

SLOPES = tuple(Fraction(k, 2) for k in range(-4, 5))
SUPPORT_VALUES = tuple(Fraction(k, 3) for k in (-5, -4, -3, -2, -1, 1, 2, 3, 4, 5))
TIME_STEP = Fraction(1, 8)


def _pick(rng: np.random.Generator, values: tuple[Fraction, ...]) -> Fraction:
    return values[int(rng.integers(len(values)))]


def random_continuation(rng: np.random.Generator, max_segments: int = 4) -> PLFunction:
    """One to max_segments segments of lengths k/4, slopes multiples of 1/2 in [-2, 2]."""
    points = [(Fraction(0), Fraction(0))]
    for _ in range(int(rng.integers(1, max_segments + 1))):
        t, v = points[-1]
        step = Fraction(int(rng.integers(1, 5)), 4)
        points.append((t + step, v + _pick(rng, SLOPES) * step))
    return PLFunction(tuple(points))


def random_pl_function(rng: np.random.Generator, max_segments: int = 4) -> PLFunction:
    if rng.random() < 0.05:
        return PLFunction.zero()
    return random_continuation(rng, max_segments)


def random_pl_family(
    rng: np.random.Generator, count: int, max_segments: int = 4, distinct: bool = False
) -> list[PLFunction]:
    """count functions, each a cut-and-continue of an earlier one."""
    family = [random_continuation(rng, max_segments) if distinct else random_pl_function(rng)]
    while len(family) < count:
        parent = family[int(rng.integers(len(family)))]
        cut = Fraction(int(rng.integers(0, int(parent.rho / TIME_STEP) + 1))) * TIME_STEP
        child = parent.restrict(cut)
        if rng.random() < 0.8:
            child = child.concat(random_continuation(rng, max_segments))
        if distinct and child in family:
            continue
        family.append(child)
    return family


def _support(
    rng: np.random.Generator, start: Fraction, end: Fraction, max_support: int
) -> list[tuple[Fraction, Fraction]]:
    slots = [start + k * TIME_STEP for k in range(1, int((end - start) / TIME_STEP))]
    slots = [t for t in slots if start < t < end]
    if not slots or max_support == 0:
        return []
    size = int(rng.integers(0, min(max_support, len(slots)) + 1))
    chosen = sorted(int(index) for index in rng.choice(len(slots), size=size, replace=False))
    return [(slots[index], _pick(rng, SUPPORT_VALUES)) for index in chosen]


def random_discrete_function(
    rng: np.random.Generator, max_support: int = 4, max_rho_steps: int = 16
) -> DiscreteFunction:
    rho = int(rng.integers(0, max_rho_steps + 1)) * TIME_STEP
    return DiscreteFunction(rho, tuple(_support(rng, Fraction(0), rho, max_support)))


def random_discrete_pair(
    rng: np.random.Generator, max_support: int = 4
) -> tuple[DiscreteFunction, DiscreteFunction]:
    """A function and a cut-and-continue of it."""
    first = random_discrete_function(rng, max_support)
    cut = int(rng.integers(0, int(first.rho / TIME_STEP) + 1)) * TIME_STEP
    rho = cut + int(rng.integers(0, 9)) * TIME_STEP
    head = first.restrict(cut).support
    # support may restart at the cut itself
    tail = _support(rng, cut - TIME_STEP if cut else Fraction(0), rho, max_support)
    return first, DiscreteFunction(rho, (*head, *tail))


def branching_discrete_pair(
    rng: np.random.Generator, max_support: int = 3
) -> tuple[DiscreteFunction, DiscreteFunction]:
    """Two discrete functions that first differ at a support time s below both domains.

    Only the first function carries support at s, with |value| in [1/3, 5/3], and
    both domains end at least 1/8 after s.
    """
    s = int(rng.integers(1, 9)) * TIME_STEP
    prefix = _support(rng, Fraction(0), s, max_support)
    leading = (s, _pick(rng, SUPPORT_VALUES))
    rho1 = s + int(rng.integers(1, 9)) * TIME_STEP
    rho2 = s + int(rng.integers(1, 9)) * TIME_STEP
    first = DiscreteFunction(rho1, (*prefix, leading, *_support(rng, s, rho1, max_support)))
    second = DiscreteFunction(rho2, (*prefix, *_support(rng, s, rho2, max_support)))
    return first, second


def random_polar_point(rng: np.random.Generator, max_rho: float) -> PolarPoint:
    return PolarPoint(
        rho=float(rng.uniform(0, max_rho)), phi=float(rng.uniform(-math.pi, math.pi))
    )
