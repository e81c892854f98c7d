"""Embedding finite tree metrics and the discrete tree D into S.

Brushing builds the image of a tree vertex by vertex. Vertex 0 goes to the zero
function; every later vertex continues the prefix of an already built function up
to its branch abscissa, then runs linearly with a slope larger than any used so far.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .core_tree import DiscreteFunction, PLFunction, as_rational, distance
from .errors import OutOfDomainError, TreeMetricError
from .types import SlopeSchedule

# Integer-scaled sums of four entries must stay clear of int64 overflow
_INT64_SAFE = 2**60


@dataclass(frozen=True)
class TreeMetric:
    """n x n matrix of exact distances claimed to be a tree metric."""

    distances: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(as_rational(value) for value in row) for row in self.distances)
        for index, row in enumerate(rows):
            if len(row) != len(rows):
                raise TreeMetricError(
                    f"row {index} has {len(row)} entries, expected {len(rows)}", indices=(index,)
                )
        object.__setattr__(self, "distances", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int | str | Fraction]]) -> TreeMetric:
        return cls(tuple(tuple(row) for row in rows))

    @property
    def n(self) -> int:
        return len(self.distances)

    def __getitem__(self, index: tuple[int, int]) -> Fraction:
        i, j = index
        return self.distances[i][j]


@dataclass(frozen=True)
class TreeCertificate:
    """Outcome of check_tree_metric; `violation` names the first failing index tuple."""

    accepted: bool
    n: int
    violation: tuple[int, ...] | None = None
    reason: str = ""

    def raise_if_rejected(self) -> None:
        if not self.accepted:
            raise TreeMetricError(self.reason, indices=self.violation)


def _scaled_matrix(a: TreeMetric) -> np.ndarray:
    scale = math.lcm(*(value.denominator for row in a.distances for value in row))
    integers = [[int(value * scale) for value in row] for row in a.distances]
    largest = max((abs(value) for row in integers for value in row), default=0)
    dtype: type = np.int64 if 4 * largest < _INT64_SAFE else object
    return np.array(integers, dtype=dtype)


def check_tree_metric(a: TreeMetric) -> TreeCertificate:
    """Certify the metric axioms and the four-point condition on every quadruple.

    The four-point check runs over all (i, j, k, l) with i <= j, repeats included,
    so the triangle inequality is covered by the quadruples with i == j.
    """
    n = a.n
    for i in range(n):
        if a[i, i] != 0:
            return TreeCertificate(False, n, (i, i), f"diagonal entry a[{i}][{i}] = {a[i, i]}")
        for j in range(i + 1, n):
            if a[i, j] != a[j, i]:
                return TreeCertificate(
                    False, n, (i, j), f"a[{i}][{j}] = {a[i, j]} but a[{j}][{i}] = {a[j, i]}"
                )
            if a[i, j] <= 0:
                return TreeCertificate(
                    False,
                    n,
                    (i, j),
                    f"vertices {i} and {j} are at distance {a[i, j]}; duplicates are rejected",
                )
    if n < 2:
        return TreeCertificate(True, n)
    m = _scaled_matrix(a)
    for i in range(n):
        for j in range(i, n):
            paired = m[i, j] + m
            crossed = np.maximum(m[i, :, None] + m[j, None, :], m[j, :, None] + m[i, None, :])
            failures = np.argwhere(paired > crossed)
            if len(failures):
                k, l = (int(index) for index in failures[0])
                return TreeCertificate(
                    False,
                    n,
                    (i, j, k, l),
                    f"four-point condition fails on ({i}, {j}, {k}, {l}): "
                    f"a[{i}][{j}] + a[{k}][{l}] = {a[i, j] + a[k, l]} exceeds both other pairings",
                )
    return TreeCertificate(True, n)


def branch_abscissa(
    a1i: int | str | Fraction, a1j: int | str | Fraction, aij: int | str | Fraction
) -> Fraction:
    """Gromov product (a1i + a1j - aij) / 2: distance from vertex 1 to the branch point."""
    value = (as_rational(a1i) + as_rational(a1j) - as_rational(aij)) / 2
    if value < 0:
        raise TreeMetricError(f"negative branch abscissa {value} from ({a1i}, {a1j}, {aij})")
    return value


class Brusher:
    """Streaming brushing: vertices are inserted one at a time against the built family."""

    def __init__(self, slopes: SlopeSchedule | None = None) -> None:
        self.slopes = slopes if slopes is not None else SlopeSchedule()
        self.functions: list[PLFunction] = []

    def insert(self, distances_to_previous: Sequence[int | str | Fraction]) -> PLFunction:
        """Add one vertex, given its distances to every vertex inserted so far.

        Raises:
            TreeMetricError: The distances cannot be realized together with the
                vertices already built.
        """
        m = len(self.functions)
        row = [as_rational(value) for value in distances_to_previous]
        if len(row) != m:
            raise ValueError(f"vertex {m} needs {m} distances, got {len(row)}")
        if m == 0:
            function = PLFunction.zero()
        else:
            function = self._attach(m, row)
        for j, (built, expected) in enumerate(zip(self.functions, row)):
            actual = distance(function, built)
            if actual != expected:
                raise TreeMetricError(
                    f"vertex {m} lands at distance {actual} from vertex {j}, expected {expected}",
                    indices=(j, m),
                )
        self.functions.append(function)
        return function

    def _attach(self, m: int, row: list[Fraction]) -> PLFunction:
        for j, value in enumerate(row):
            if value <= 0:
                raise TreeMetricError(
                    f"vertices {j} and {m} are at distance {value}; duplicates are rejected",
                    indices=(j, m),
                )
        root_distance = row[0]
        best_s, best_j = Fraction(-1), 0
        for j, built in enumerate(self.functions):
            s = branch_abscissa(root_distance, built.rho, row[j])
            if s > best_s:
                best_s, best_j = s, j
        anchor = self.functions[best_j]
        if best_s > root_distance or best_s > anchor.rho:
            raise TreeMetricError(
                f"branch abscissa {best_s} of vertex {m} off vertex {best_j} exceeds a domain",
                indices=(0, best_j, m),
            )
        return anchor.restrict(best_s).continue_linear(self.slopes.slope(m), root_distance)


def brush(a: TreeMetric, slopes: SlopeSchedule | None = None) -> list[PLFunction]:
    """Embed a finite tree metric isometrically into S.

    Args:
        a: Distance matrix; it must pass check_tree_metric.
        slopes: Strictly increasing branch slopes; defaults to k_n = n.

    Returns:
        One PLFunction per vertex with distance(f_i, f_j) == a[i, j].
    """
    check_tree_metric(a).raise_if_rejected()
    brusher = Brusher(slopes)
    for m in range(a.n):
        brusher.insert([a[j, m] for j in range(m)])
    return brusher.functions


def embed_discrete(gamma: DiscreteFunction) -> PLFunction:
    """Isometric inclusion of D into S: the slope after a_k is gamma(a_1) + ... + gamma(a_k)."""
    if gamma.rho == 0:
        return PLFunction.zero()
    points = [(Fraction(0), Fraction(0))]
    slope = Fraction(0)
    for t, a in gamma.support:
        last_t, last_v = points[-1]
        points.append((t, last_v + slope * (t - last_t)))
        slope += a
    last_t, last_v = points[-1]
    points.append((gamma.rho, last_v + slope * (gamma.rho - last_t)))
    return PLFunction(tuple(points))


def verify_embedding(a: TreeMetric, fs: Sequence[PLFunction]) -> Fraction:
    """Largest |distance(f_i, f_j) - a[i, j]| over all pairs; 0 certifies an isometry."""
    if len(fs) != a.n:
        raise ValueError(f"{len(fs)} functions for a {a.n}-vertex metric")
    return max(
        (abs(distance(fs[i], fs[j]) - a[i, j]) for i in range(a.n) for j in range(i + 1, a.n)),
        default=Fraction(0),
    )


def star_metric(n: int, arm: int | str | Fraction = 1) -> TreeMetric:
    """n leaves of a star with equal arms; every off-diagonal entry is 2 * arm."""
    arm = as_rational(arm)
    return TreeMetric.from_rows(
        [[Fraction(0) if i == j else 2 * arm for j in range(n)] for i in range(n)]
    )


def random_tree_metric(
    rng: np.random.Generator, n: int, extra_nodes: int | None = None, max_weight: int = 8
) -> TreeMetric:
    """Distances between n distinct nodes of a random edge-weighted tree.

    The tree has n + extra_nodes nodes, so branch points need not be vertices.
    """
    size = n + (extra_nodes if extra_nodes is not None else n)
    adjacency: list[list[tuple[int, Fraction]]] = [[] for _ in range(size)]
    for node in range(1, size):
        parent = int(rng.integers(0, node))
        weight = Fraction(int(rng.integers(1, max_weight + 1)), int(rng.integers(1, 4)))
        adjacency[node].append((parent, weight))
        adjacency[parent].append((node, weight))
    chosen = [int(node) for node in rng.choice(size, size=n, replace=False)]
    rows = []
    for source in chosen:
        reach = {source: Fraction(0)}
        stack = [source]
        while stack:
            node = stack.pop()
            for neighbor, weight in adjacency[node]:
                if neighbor not in reach:
                    reach[neighbor] = reach[node] + weight
                    stack.append(neighbor)
        rows.append([reach[target] for target in chosen])
    return TreeMetric.from_rows(rows)


def branching_neighbors(
    f: PLFunction, radius: int | str | Fraction
) -> tuple[PLFunction, PLFunction]:
    """Two functions within `radius` of f such that none of f, g, h extends another."""
    radius = as_rational(radius)
    if radius <= 0:
        raise OutOfDomainError(f"radius must be positive, got {radius}")
    if f.rho == 0:
        raise OutOfDomainError("the zero function has no branching neighbors of its own length")
    cut = f.rho - min(radius / 4, f.rho)
    base = f.restrict(cut)
    slope = f.right_slope(cut)
    return (
        base.continue_linear(slope + 1, f.rho),
        base.continue_linear(slope + 2, f.rho),
    )
