"""Tunable constants, read from config/settings.json."""

import os
from fractions import Fraction
from pathlib import Path
from typing import Literal

from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, model_validator

from .types import EpsilonSchedule, RationalField
from .utils.file_ops import load_json

load_dotenv()

SETTINGS_ENV_VAR = "TREE_SUBCONE_SETTINGS"
DEFAULT_SETTINGS_PATH = Path("config") / "settings.json"


class HyperbolicSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    direct_rho_sum_limit: float = Field(
        400.0, gt=0, le=1400, description="Largest rho1 + rho2 (nats) handled by the direct path"
    )
    oracle_dps: int = Field(60, ge=15, description="mpmath decimal places for the oracle")


class ScheduleSettings(BaseModel):
    """Default eps schedule eps_i = 2^-i."""

    model_config = ConfigDict(extra="forbid")

    first_exponent: int = Field(1, ge=0)
    last_exponent: int = Field(64, ge=0)

    @model_validator(mode="after")
    def _ordered(self) -> "ScheduleSettings":
        if self.last_exponent < self.first_exponent:
            raise ValueError("last_exponent must not be smaller than first_exponent")
        return self

    def build(self) -> EpsilonSchedule:
        return EpsilonSchedule.dyadic(self.first_exponent, self.last_exponent)


class AsymptoticSettings(ScheduleSettings):
    first_exponent: int = Field(4, ge=0)
    last_exponent: int = Field(20, ge=0)
    burn_in: int = Field(4, ge=0, description="Rows skipped before monotonicity is required")


class SubconeSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_stage: int = Field(8, ge=1)


class CauchySettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    max_k: int = Field(20, ge=1)
    max_r: int = Field(6, ge=1)
    amplitude: RationalField = Field(
        default=Fraction(1), description="Zigzag amplitude of the chains"
    )


class SelftestSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    seed: int = 0


class OutputSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    float_digits: int = Field(17, ge=1, le=17)


class LoggingSettings(BaseModel):
    model_config = ConfigDict(extra="forbid")

    level: Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"] = "INFO"
    format: Literal["rich"] = "rich"


class Settings(BaseModel):
    """All configuration sections; every field has a default."""

    model_config = ConfigDict(extra="forbid")

    hyperbolic: HyperbolicSettings = Field(default_factory=HyperbolicSettings)
    schedule: ScheduleSettings = Field(default_factory=ScheduleSettings)
    asymptotic: AsymptoticSettings = Field(default_factory=AsymptoticSettings)
    subcone: SubconeSettings = Field(default_factory=SubconeSettings)
    cauchy: CauchySettings = Field(default_factory=CauchySettings)
    selftest: SelftestSettings = Field(default_factory=SelftestSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


def resolve_settings_path(path: Path | None = None) -> Path | None:
    """Explicit path, then $TREE_SUBCONE_SETTINGS, then config/settings.json if present."""
    if path is not None:
        return path
    env_path = os.getenv(SETTINGS_ENV_VAR)
    if env_path:
        return Path(env_path)
    if DEFAULT_SETTINGS_PATH.is_file():
        return DEFAULT_SETTINGS_PATH
    return None


def load_settings(path: Path | None = None) -> Settings:
    """Load settings, falling back to defaults when no file is found.

    Args:
        path: Explicit settings file; missing explicit or env-named files raise.

    Returns:
        Validated Settings.
    """
    resolved = resolve_settings_path(path)
    if resolved is None:
        return Settings()
    if not resolved.is_file():
        raise FileNotFoundError(f"Settings file not found: {resolved}")
    return Settings.model_validate(load_json(resolved))
