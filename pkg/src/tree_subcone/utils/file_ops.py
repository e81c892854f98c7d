"""File operation utilities."""

import json
from fractions import Fraction
from pathlib import Path
from typing import Any


class RationalEncoder(json.JSONEncoder):
    """JSON encoder that writes Fractions as reduced "p/q" strings."""

    def default(self, obj: Any) -> Any:
        if isinstance(obj, Fraction):
            return str(obj)
        return super().default(obj)


def ensure_dir(path: Path) -> None:
    """Create directory if it doesn't exist."""
    path.mkdir(parents=True, exist_ok=True)


def load_json(path: Path) -> Any:
    """Load JSON file."""
    with open(path, "r") as f:
        return json.load(f)


def save_json(data: Any, path: Path, indent: int = 2) -> None:
    """Save data to JSON file."""
    ensure_dir(path.parent)
    with open(path, "w") as f:
        json.dump(data, f, indent=indent, cls=RationalEncoder)
        f.write("\n")


def load_text_rows(path: Path) -> list[list[str]]:
    """Read a comma separated file into stripped cells, skipping blank lines."""
    with open(path, "r") as f:
        return [
            [cell.strip() for cell in line.split(",")]
            for line in f.read().splitlines()
            if line.strip()
        ]
