"""Data validation utilities."""

from pathlib import Path


def validate_file_exists(path: Path) -> None:
    """Validate that a file exists."""
    if not path.exists():
        raise FileNotFoundError(f"File not found: {path}")
    if not path.is_file():
        raise ValueError(f"Path is not a file: {path}")


def validate_output_dir(path: Path) -> None:
    """Validate that a path can be used as an output directory."""
    if path.exists() and not path.is_dir():
        raise ValueError(f"Output path is not a directory: {path}")


def validate_stage(value: int, name: str = "stage") -> None:
    if value < 1:
        raise ValueError(f"{name} must be at least 1, got {value}")
