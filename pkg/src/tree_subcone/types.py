"""Type definitions for tree subcone documents, schedules and reports."""

import math
import re
from fractions import Fraction
from typing import Annotated, Any

import numpy as np
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    PlainSerializer,
    PlainValidator,
    WithJsonSchema,
    field_validator,
)

RATIONAL_PATTERN = re.compile(r"^-?\d+(/\d+)?$")


def parse_rational(value: Any) -> Fraction:
    """Parse a reduced "p/q" string (or "p", or a JSON integer) into a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Fraction(value)
    if not isinstance(value, str):
        raise ValueError(f"rational must be a 'p/q' string, got {value!r}")
    text = value.strip()
    if not RATIONAL_PATTERN.match(text):
        raise ValueError(f"malformed rational {value!r}")
    if "/" in text:
        numerator, denominator = (int(part) for part in text.split("/"))
        if denominator == 0:
            raise ValueError(f"zero denominator in {value!r}")
        if math.gcd(numerator, denominator) != 1:
            raise ValueError(f"rational {value!r} is not in lowest terms")
        return Fraction(numerator, denominator)
    return Fraction(int(text))


RationalField = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(str, return_type=str),
    WithJsonSchema({"type": "string", "pattern": RATIONAL_PATTERN.pattern}),
]


# Documents
class BreakpointDoc(BaseModel):
    """One (t, v) pair of a function document."""

    model_config = ConfigDict(extra="forbid")

    t: RationalField = Field(..., description="Time coordinate")
    v: RationalField = Field(..., description="Function value at t")


class PLFunctionDoc(BaseModel):
    """JSON form of a piecewise-linear element of S."""

    model_config = ConfigDict(extra="forbid")

    breakpoints: list[BreakpointDoc] = Field(..., min_length=1)


class DiscreteFunctionDoc(BaseModel):
    """JSON form of a finitely supported element of D."""

    model_config = ConfigDict(extra="forbid")

    rho: RationalField = Field(..., description="Domain length; the domain is [0, rho)")
    support: list[BreakpointDoc] = Field(default_factory=list)


class EmbeddingReport(BaseModel):
    """Summary written next to brushed function files."""

    max_error: RationalField
    n: int = Field(..., ge=1)
    schedule: list[RationalField] = Field(default_factory=list, description="Slopes used")


# Schedules
class SlopeSchedule(BaseModel):
    """Strictly increasing branch slopes k_1 < k_2 < ...; default k_n = n."""

    slopes: list[RationalField] = Field(default_factory=list)

    @field_validator("slopes")
    @classmethod
    def _strictly_increasing(cls, slopes: list[Fraction]) -> list[Fraction]:
        for index in range(1, len(slopes)):
            if slopes[index] <= slopes[index - 1]:
                raise ValueError(
                    f"slopes must increase strictly (k_{index} = {slopes[index - 1]}, "
                    f"k_{index + 1} = {slopes[index]})"
                )
        return slopes

    @classmethod
    def default(cls, count: int) -> "SlopeSchedule":
        return cls(slopes=[Fraction(n) for n in range(1, count + 1)])

    @classmethod
    def parse(cls, text: str) -> "SlopeSchedule":
        """Parse a comma separated list of rationals."""
        return cls(slopes=[parse_rational(token) for token in text.split(",") if token.strip()])

    def slope(self, index: int) -> Fraction:
        """k_index (1-based); indices past the explicit list continue by +1 steps."""
        if index <= len(self.slopes):
            return self.slopes[index - 1]
        last = self.slopes[-1] if self.slopes else Fraction(0)
        return last + (index - len(self.slopes))


class EpsilonSchedule(BaseModel):
    """Strictly decreasing positive scales eps_1 > eps_2 > ... > 0."""

    values: list[float] = Field(..., min_length=1)

    @field_validator("values")
    @classmethod
    def _strictly_decreasing(cls, values: list[float]) -> list[float]:
        for index, value in enumerate(values):
            if not math.isfinite(value) or value <= 0:
                raise ValueError(f"eps values must be finite and positive, got {value}")
            if index and value >= values[index - 1]:
                raise ValueError(
                    f"eps values must decrease strictly ({values[index - 1]}, {value})"
                )
        return values

    @classmethod
    def dyadic(cls, first: int, last: int) -> "EpsilonSchedule":
        """eps_i = 2^-i for i = first..last."""
        return cls(values=[2.0**-exponent for exponent in range(first, last + 1)])

    @classmethod
    def parse(cls, text: str) -> "EpsilonSchedule":
        """Parse "2^-a:2^-b" ranges or comma lists of floats and 2^-k tokens."""
        text = text.strip()
        if ":" in text:
            first, last = (_dyadic_exponent(part) for part in text.split(":", 1))
            return cls.dyadic(first, last)
        values = []
        for token in (part.strip() for part in text.split(",")):
            if not token:
                continue
            if token.startswith("2^"):
                values.append(2.0 ** -_dyadic_exponent(token))
            else:
                values.append(float(token))
        return cls(values=values)

    def __len__(self) -> int:
        return len(self.values)


def _dyadic_exponent(token: str) -> int:
    token = token.strip()
    if not token.startswith("2^-"):
        raise ValueError(f"expected a 2^-k token, got {token!r}")
    return int(token[3:])


# Reports
class ConvergenceRow(BaseModel):
    """One eps of a witness-point convergence run."""

    eps: float
    d_x: float = Field(..., description="Hyperbolic distance of the witness points")
    eps_d_x: float
    d_d: float = Field(..., description="Exact tree distance, as a float")
    error: float


class ConvergenceReport(BaseModel):
    """Per-eps records of |eps * d_X - d_tree|."""

    rows: list[ConvergenceRow] = Field(default_factory=list)

    @property
    def errors(self) -> list[float]:
        return [row.error for row in self.rows]

    @property
    def final_error(self) -> float:
        return self.rows[-1].error if self.rows else 0.0

    def is_monotone_after(self, burn_in: int, slack: float = 1e-12) -> bool:
        """True when errors never grow (beyond slack) from row `burn_in` on."""
        tail = self.errors[burn_in:]
        return all(later <= earlier + slack for earlier, later in zip(tail, tail[1:]))

    def empirical_order(self, burn_in: int = 0) -> float | None:
        """Least-squares slope of log(error) against log(eps) past the burn-in."""
        usable = [row for row in self.rows[burn_in:] if row.error > 0]
        if len(usable) < 2:
            return None
        log_eps = np.log([row.eps for row in usable])
        log_err = np.log([row.error for row in usable])
        slope, _ = np.polyfit(log_eps, log_err, 1)
        return float(slope)


class PairRecord(BaseModel):
    """Stage measurements for one unordered pair (k1, k2)."""

    pair: tuple[int, int]
    sample_time: RationalField
    segregation: RationalField
    discrete_segregation: RationalField = Field(
        ..., description="First plan time at which the discretizations differ"
    )
    d_s: RationalField = Field(..., description="Exact distance in S (or the limit distance)")
    d_d: RationalField = Field(..., description="Exact distance of the discretizations in D")
    eps_d_x: float
    err_vs_d: float
    err_vs_s: float
    slack: float = Field(..., description="2 * (discrete_segregation - segregation)")


class StageRecord(BaseModel):
    """Outcome of one stage of the staged discretization."""

    stage: int = Field(..., ge=1)
    eps_index: int = Field(..., ge=-1, description="Index into the schedule; -1 if vacuous")
    eps: float | None = None
    bound: RationalField
    pairs: list[PairRecord] = Field(default_factory=list)

    @property
    def max_error(self) -> float:
        return max((pair.err_vs_s for pair in self.pairs), default=0.0)

    @property
    def succeeded(self) -> bool:
        return all(pair.err_vs_s < self.bound for pair in self.pairs)


class SelftestOutcome(BaseModel):
    """Result of one named selftest property."""

    name: str
    passed: bool
    cases: int = 0
    detail: str = ""
