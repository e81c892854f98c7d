"""Tests for validator utilities."""

from pathlib import Path

import pytest

from tree_subcone.utils.validators import (
    validate_file_exists,
    validate_output_dir,
    validate_stage,
)


def test_validate_file_exists_accepts_existing_file(tmp_path: Path) -> None:
    file_path = tmp_path / "data.json"
    file_path.write_text("{}")
    validate_file_exists(file_path)  # Should not raise


def test_validate_file_exists_raises_for_missing(tmp_path: Path) -> None:
    with pytest.raises(FileNotFoundError):
        validate_file_exists(tmp_path / "missing.json")


def test_validate_file_exists_rejects_directory(tmp_path: Path) -> None:
    directory = tmp_path / "folder"
    directory.mkdir()
    with pytest.raises(ValueError):
        validate_file_exists(directory)


def test_validate_output_dir(tmp_path: Path) -> None:
    validate_output_dir(tmp_path)
    validate_output_dir(tmp_path / "not-yet")
    blocker = tmp_path / "file.txt"
    blocker.write_text("")
    with pytest.raises(ValueError, match="not a directory"):
        validate_output_dir(blocker)


def test_validate_stage() -> None:
    validate_stage(1)
    with pytest.raises(ValueError, match="max_stage must be at least 1, got 0"):
        validate_stage(0, "max_stage")
