"""Tests for the installer script."""

import re
from pathlib import Path

ROOT = Path(__file__).resolve().parents[2]


def test_setup_installs_only_files_in_the_repo():
    script = (ROOT / "setup.sh").read_text()
    for target in re.findall(r"-r (\S+)", script):
        assert (ROOT / target).is_file()
    assert "pip install -e ." in script


def test_setup_finishes_with_the_selftest():
    lines = [line for line in (ROOT / "setup.sh").read_text().splitlines() if line.strip()]
    assert lines[-1] == "tree-subcone selftest"
