"""Self-isometry of S moving a chosen base function f0 to zero.

Write a for the moment of segregation of f0 and f, and H for the continuation of f
after a. The image of f is H shifted so that it starts at rho0 - a, preceded by
zeros. Continuations are told apart only by their first slope, so H is relabelled
by a bijection of first slopes that keeps images of different branches apart:

- a = rho0: the shift g_n -> g_{n+1}; no image starts with slope 0.
- 0 < a < rho0: slope 0 takes the place of f0's own slope at a, which no
  continuation can have; the image never extends its zero prefix.
- a = 0: the chain (f0's first slope, g_0, g_1, ...) moves back one place, so
  every first slope is reached, f0's own included.

All three are bijections, and the map is inverted by homogenize_inverse.
"""

from __future__ import annotations

from collections.abc import Callable
from fractions import Fraction

from .core_tree import PLFunction, distance, segregation_moment
from .errors import OutOfDomainError

SlopeMap = Callable[[Fraction], Fraction]


def g_slope(n: int) -> Fraction:
    """(2^n - 1) / 2^n."""
    if n < 0:
        raise OutOfDomainError(f"g-family index must be non-negative, got {n}")
    return 1 - Fraction(1, 2**n)


def g_function(n: int, length: int | str | Fraction) -> PLFunction:
    return PLFunction.linear(g_slope(n), length)


def g_index(slope: Fraction) -> int | None:
    """The n with slope == (2^n - 1) / 2^n, if any."""
    gap = 1 - slope
    if gap <= 0 or gap > 1 or gap.numerator != 1:
        return None
    denominator = gap.denominator
    if denominator & (denominator - 1):
        return None
    return denominator.bit_length() - 1


def _shift_up(slope: Fraction) -> Fraction:
    n = g_index(slope)
    return slope if n is None else g_slope(n + 1)


def _shift_down(slope: Fraction) -> Fraction:
    n = g_index(slope)
    if n == 0:
        raise OutOfDomainError("slope 0 has no preimage under the g-family shift")
    return slope if n is None else g_slope(n - 1)


def _swap(first: Fraction, second: Fraction) -> SlopeMap:
    def relabel(slope: Fraction) -> Fraction:
        if slope == first:
            return second
        if slope == second:
            return first
        return slope

    return relabel


def _chain_back(anchor: Fraction) -> SlopeMap:
    def relabel(slope: Fraction) -> Fraction:
        if slope == anchor:
            raise OutOfDomainError(f"slope {slope} does not leave the base function")
        n = g_index(slope)
        if n is None:
            return slope
        previous = n - 1
        if previous >= 0 and g_slope(previous) == anchor:
            previous -= 1
        return g_slope(previous) if previous >= 0 else anchor

    return relabel


def _chain_forward(anchor: Fraction) -> SlopeMap:
    def relabel(slope: Fraction) -> Fraction:
        if slope == anchor:
            n = 0
        else:
            index = g_index(slope)
            if index is None:
                return slope
            n = index + 1
        if g_slope(n) == anchor:
            n += 1
        return g_slope(n)

    return relabel


def _relabel(continuation: PLFunction, relabel: SlopeMap) -> PLFunction:
    if continuation.rho == 0:
        return continuation
    first = continuation.slopes[0]
    return continuation.add_linear(relabel(first) - first)


def homogenize(f0: PLFunction, f: PLFunction) -> PLFunction:
    """Image of f under the isometry of S that sends f0 to zero.

    Args:
        f0: Base function.
        f: Function to move.

    Returns:
        A function whose distance to zero (its domain length) equals d(f, f0).
    """
    rho = f0.rho
    a = segregation_moment(f0, f).s
    continuation = f.tail(a)
    if a == rho:
        return _relabel(continuation, _shift_up)
    if a == 0:
        relabel = _chain_back(f0.right_slope(0))
    else:
        relabel = _swap(Fraction(0), f0.right_slope(a))
    return PLFunction.zero(rho - a).concat(_relabel(continuation, relabel))


def homogenize_inverse(f0: PLFunction, h: PLFunction) -> PLFunction:
    """The f with homogenize(f0, f) == h."""
    rho = f0.rho
    if h.rho == 0:
        return f0
    zeros = h.zero_prefix_length()
    if zeros == 0:
        return f0.concat(_relabel(h, _shift_down))
    if rho == 0:
        raise OutOfDomainError("functions starting with slope 0 are not images for a zero base")
    if zeros < rho:
        a = rho - zeros
        continuation = _relabel(h.tail(zeros), _swap(Fraction(0), f0.right_slope(a)))
        return f0.restrict(a).concat(continuation)
    return _relabel(h.tail(rho), _chain_forward(f0.right_slope(0)))


def homogenize_pairwise_check(f0: PLFunction, f: PLFunction, g: PLFunction) -> Fraction:
    """|d(F(f), F(g)) - d(f, g)|; zero for an isometry."""
    return abs(distance(homogenize(f0, f), homogenize(f0, g)) - distance(f, g))

