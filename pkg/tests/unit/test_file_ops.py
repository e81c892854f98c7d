"""Tests for file operations."""

import json
from fractions import Fraction
from pathlib import Path

import pytest

from tree_subcone.utils.file_ops import (
    RationalEncoder,
    ensure_dir,
    load_json,
    load_text_rows,
    save_json,
)


def test_rational_encoder_writes_reduced_strings():
    data = {"rho": Fraction(6, 4), "n": 3}
    encoded = json.dumps(data, cls=RationalEncoder)
    assert encoded == '{"rho": "3/2", "n": 3}'


def test_rational_encoder_rejects_unknown_objects():
    with pytest.raises(TypeError):
        json.dumps({"value": object()}, cls=RationalEncoder)


def test_ensure_dir_creates_path(tmp_path: Path):
    target = tmp_path / "nested" / "dir"
    ensure_dir(target)
    assert target.exists()
    assert target.is_dir()


def test_save_and_load_json(tmp_path: Path):
    path = tmp_path / "data" / "output.json"
    payload = {"value": 42, "t": Fraction(1, 3)}
    save_json(payload, path)
    assert path.read_text().endswith("}\n")
    assert load_json(path) == {"value": 42, "t": "1/3"}


def test_load_text_rows_skips_blank_lines(tmp_path: Path):
    path = tmp_path / "metric.csv"
    path.write_text("0, 1/2\n\n1/2 ,0\n   \n")
    assert load_text_rows(path) == [["0", "1/2"], ["1/2", "0"]]
