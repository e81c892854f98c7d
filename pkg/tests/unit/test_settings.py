"""Tests for settings loading."""

import json
from fractions import Fraction
from pathlib import Path

import pytest
from pydantic import ValidationError

from tree_subcone.settings import (
    SETTINGS_ENV_VAR,
    Settings,
    load_settings,
    resolve_settings_path,
)

CONFIG = Path(__file__).resolve().parents[2] / "config" / "settings.json"


def test_defaults_without_a_file(no_settings):
    assert resolve_settings_path() is None
    settings = load_settings()
    assert settings == Settings()
    assert settings.schedule.build().values[0] == 0.5
    assert len(settings.schedule.build()) == 64
    assert settings.asymptotic.burn_in == 4


def test_shipped_config_matches_defaults():
    assert load_settings(CONFIG) == Settings()


def test_env_var_names_the_file(no_settings, monkeypatch):
    path = no_settings / "custom.json"
    path.write_text(json.dumps({"cauchy": {"max_r": 3, "amplitude": "1/2"}}))
    monkeypatch.setenv(SETTINGS_ENV_VAR, str(path))
    settings = load_settings()
    assert settings.cauchy.max_r == 3
    assert settings.cauchy.amplitude == Fraction(1, 2)
    assert settings.subcone.max_stage == 8


def test_explicit_missing_file_raises(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_settings(tmp_path / "nope.json")


def test_invalid_values_are_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"schedule": {"first_exponent": 10, "last_exponent": 2}}))
    with pytest.raises(ValidationError):
        load_settings(path)


def test_unknown_sections_are_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"destinations": {}}))
    with pytest.raises(ValidationError):
        load_settings(path)
