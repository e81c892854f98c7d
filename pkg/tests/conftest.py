"""Pytest configuration and fixtures."""

import json
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from tree_subcone.core_tree import DiscreteFunction, PLFunction
from tree_subcone.embedding import TreeMetric


@pytest.fixture
def rng():
    """Seeded generator shared by randomized tests."""
    return np.random.default_rng(20240601)


@pytest.fixture
def slope_one():
    """Slope 1 on [0, 2]."""
    return PLFunction.linear(1, 2)


@pytest.fixture
def slope_two():
    """Slope 2 on [0, 3]."""
    return PLFunction.linear(2, 3)


@pytest.fixture
def tent():
    """Breakpoints (0,0), (1,1), (2,0)."""
    return PLFunction(((0, 0), (1, 1), (2, 0)))


@pytest.fixture
def three_leaf_metric():
    return TreeMetric.from_rows([[0, 2, 3], [2, 0, 3], [3, 3, 0]])


@pytest.fixture
def square_metric():
    """Graph distance on a 4-cycle: sides 1, diagonals 2."""
    return TreeMetric.from_rows([[0, 1, 2, 1], [1, 0, 1, 2], [2, 1, 0, 1], [1, 2, 1, 0]])


@pytest.fixture
def branching_discrete():
    """Two discrete functions branching at t = 1/2."""
    first = DiscreteFunction(Fraction(3, 2), ((Fraction(1, 4), 1), (Fraction(1, 2), 1)))
    second = DiscreteFunction(Fraction(5, 4), ((Fraction(1, 4), 1),))
    return first, second


def write_json(path: Path, payload) -> Path:
    path.write_text(json.dumps(payload))
    return path


@pytest.fixture
def function_files(tmp_path):
    """JSON documents for slope 1 on [0, 2] and slope 2 on [0, 3]."""
    origin = {"t": "0", "v": "0"}
    a = write_json(tmp_path / "a.json", {"breakpoints": [origin, {"t": "2", "v": "2"}]})
    b = write_json(tmp_path / "b.json", {"breakpoints": [origin, {"t": "3", "v": "6"}]})
    return a, b


@pytest.fixture
def discrete_files(tmp_path):
    """g1: rho 2, support {(1, 1)}; g2: rho 2, support {(1, 1), (3/2, 1)}."""
    a = write_json(tmp_path / "g1.json", {"rho": "2", "support": [{"t": "1", "v": "1"}]})
    b = write_json(
        tmp_path / "g2.json",
        {"rho": "2", "support": [{"t": "1", "v": "1"}, {"t": "3/2", "v": "1"}]},
    )
    return a, b


@pytest.fixture
def metric_csv(tmp_path):
    path = tmp_path / "metric.csv"
    path.write_text("a,b,c\n0,2,3\n2,0,3\n3,3,0\n")
    return path


@pytest.fixture
def no_settings(monkeypatch, tmp_path):
    """Run from an empty directory so the built-in defaults apply."""
    monkeypatch.delenv("TREE_SUBCONE_SETTINGS", raising=False)
    monkeypatch.chdir(tmp_path)
    return tmp_path
