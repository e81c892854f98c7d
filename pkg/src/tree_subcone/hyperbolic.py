"""Distances in the Poincare disk and the witness points of discrete functions.

Two evaluation paths are kept. The direct path works with native floats and is used
as a cross-check at moderate radii. The log-domain path carries every large or tiny
quantity as a logarithm and stays finite for radii of millions of nats and angle
differences far below the smallest float.

Both paths evaluate X = sinh^2(d/2), which splits into two non-negative terms:

    X = sinh^2((rho1 - rho2)/2) + (beta^2 / 2) * sinh(rho1) * sinh(rho2),
    beta^2 = 1 - cos(phi1 - phi2) = 2 sin^2((phi1 - phi2)/2),

so that D/8 = 1 + X, A = sqrt(X / (1 + X)) and d = log(1 + X) + 2 log(1 + A).
"""

from __future__ import annotations

import cmath
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import mpmath
import numpy as np
from scipy.special import logsumexp

from .core_tree import DiscreteFunction, distance_discrete
from .errors import InputFormatError, OutOfDomainError, OutsideDiskError, OverflowRegimeError
from .types import ConvergenceReport, ConvergenceRow, EpsilonSchedule

LOG2 = math.log(2.0)
LOG8 = math.log(8.0)
DEFAULT_DIRECT_RHO_SUM_LIMIT = 400.0
SMALL_ANGLE_LOG = math.log(1e-3)
LARGEST_LOG_ANGLE = 700.0


@dataclass(frozen=True)
class SignedLog:
    """A real number stored as sign * exp(log_abs); zero is (0, -inf)."""

    sign: int
    log_abs: float

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise ValueError(f"sign must be -1, 0 or 1, got {self.sign}")
        if self.sign == 0 and self.log_abs != -math.inf:
            object.__setattr__(self, "log_abs", -math.inf)

    @classmethod
    def from_float(cls, value: float) -> SignedLog:
        if value == 0:
            return ZERO_LOG
        return cls(1 if value > 0 else -1, math.log(abs(value)))

    @property
    def is_zero(self) -> bool:
        return self.sign == 0

    def to_float(self) -> float:
        if self.sign == 0:
            return 0.0
        return self.sign * math.exp(self.log_abs)

    def __neg__(self) -> SignedLog:
        return SignedLog(-self.sign, self.log_abs)


ZERO_LOG = SignedLog(0, -math.inf)


def signed_log_sum(terms: Sequence[SignedLog]) -> SignedLog:
    """Sum signed terms without leaving log space; the dominant term survives."""
    live = [term for term in terms if term.sign != 0]
    if not live:
        return ZERO_LOG
    if len(live) == 1:
        return live[0]
    log_abs, sign = logsumexp(
        [term.log_abs for term in live], b=[term.sign for term in live], return_sign=True
    )
    if sign == 0 or not math.isfinite(log_abs):
        return ZERO_LOG
    return SignedLog(int(sign), float(log_abs))


@dataclass(frozen=True)
class AngleExpansion:
    """Support terms (s_k, a_k) behind phi = sum a_k exp(-s_k / eps)."""

    eps: float
    terms: tuple[tuple[Fraction, Fraction], ...]


@dataclass(frozen=True)
class PolarPoint:
    """Point of the hyperbolic plane in non-Euclidean polar coordinates (rho, phi)."""

    rho: float
    phi: float
    log_phi: SignedLog | None = None
    expansion: AngleExpansion | None = None

    def __post_init__(self) -> None:
        if not math.isfinite(self.rho) or self.rho < 0:
            raise OutOfDomainError(f"rho must be finite and non-negative, got {self.rho}")
        if not math.isfinite(self.phi):
            raise OutOfDomainError(f"phi must be finite, got {self.phi}")
        if self.log_phi is not None and self.phi != 0:
            if self.log_phi.sign != (1 if self.phi > 0 else -1):
                raise OutOfDomainError("phi and its signed log disagree in sign")

    def angle_log(self) -> SignedLog:
        if self.log_phi is not None:
            return self.log_phi
        return SignedLog.from_float(self.phi)


@dataclass(frozen=True)
class HyperbolicTerms:
    """Intermediate quantities of the closed-form distance between two polar points."""

    beta2: float
    log_t2: float
    log_s2: float
    log_denom: float
    a: float


def rho_to_r(rho: float) -> float:
    """Euclidean radius (e^rho - 1)/(e^rho + 1) of a point at hyperbolic radius rho."""
    if rho < 0:
        raise OutOfDomainError(f"rho must be non-negative, got {rho}")
    return math.tanh(rho / 2)


def one_minus_r(rho: float) -> float:
    """1 - rho_to_r(rho) = 2 / (e^rho + 1), without cancellation."""
    if rho < 0:
        raise OutOfDomainError(f"rho must be non-negative, got {rho}")
    decay = math.exp(-rho)
    return 2 * decay / (1 + decay)


def polar_to_disk(point: PolarPoint) -> complex:
    return cmath.rect(rho_to_r(point.rho), point.phi)


def _boundary_gap(name: str, x: complex) -> float:
    """sqrt(1 - |x|^2), with 1 - |x|^2 evaluated exactly from the float coordinates."""
    gap = 1 - Fraction(x.real) ** 2 - Fraction(x.imag) ** 2
    if gap <= 0:
        raise OutsideDiskError(f"{name} = {x} is not inside the unit disk")
    root = math.sqrt(float(gap))
    if root == 0:
        raise OverflowRegimeError(
            f"{name} = {x} is closer to the boundary than a float resolves"
        )
    return root


def disk_distance(x1: complex, x2: complex) -> float:
    """Hyperbolic distance between two points of the open unit disk.

    Uses d = 2 asinh(|x1 - x2| / sqrt((1 - |x1|^2)(1 - |x2|^2))), which has no
    cancellation near the boundary.
    """
    gap1, gap2 = _boundary_gap("x1", x1), _boundary_gap("x2", x2)
    ratio = abs(x1 - x2) / gap1 / gap2
    if math.isinf(ratio):
        raise OverflowRegimeError(f"distance between {x1} and {x2} is beyond float range")
    return 2 * math.asinh(ratio)


def log_sinh(x: float) -> float:
    """log(sinh(x)) for x >= 0; -inf at 0."""
    if x == 0:
        return -math.inf
    if x > 20:
        return x - LOG2 + math.log1p(-math.exp(-2 * x))
    return math.log(math.sinh(x))


def angle_difference(p1: PolarPoint, p2: PolarPoint) -> SignedLog:
    """phi1 - phi2 as a signed log.

    Witness points built at the same eps are differenced term by term, so terms of
    the shared prefix cancel exactly and the leading surviving term is kept.
    """
    e1, e2 = p1.expansion, p2.expansion
    if e1 is not None and e2 is not None and e1.eps == e2.eps:
        coefficients: dict[Fraction, Fraction] = {}
        for t, a in e1.terms:
            coefficients[t] = coefficients.get(t, Fraction(0)) + a
        for t, a in e2.terms:
            coefficients[t] = coefficients.get(t, Fraction(0)) - a
        return signed_log_sum(
            [
                SignedLog(1 if c > 0 else -1, math.log(abs(c)) - float(t) / e1.eps)
                for t, c in sorted(coefficients.items())
                if c != 0
            ]
        )
    return signed_log_sum([p1.angle_log(), -p2.angle_log()])


def log_beta2(delta: SignedLog) -> float:
    """log(1 - cos(delta)), from the signed log of the angle difference."""
    if delta.is_zero:
        return -math.inf
    if delta.log_abs < SMALL_ANGLE_LOG:
        x2 = math.exp(2 * delta.log_abs)
        return 2 * delta.log_abs - LOG2 + math.log1p(-x2 / 12 + x2 * x2 / 360)
    if delta.log_abs > LARGEST_LOG_ANGLE:
        raise OutOfDomainError(f"angle difference exp({delta.log_abs}) is beyond float range")
    reduced = math.remainder(delta.to_float(), 2 * math.pi)
    half_sine = math.sin(reduced / 2)
    if half_sine == 0:
        return -math.inf
    return math.log(2 * half_sine * half_sine)


def _log_x(p1: PolarPoint, p2: PolarPoint, lb2: float) -> float:
    radial = 2 * log_sinh(abs(p1.rho - p2.rho) / 2)
    angular = lb2 - LOG2 + log_sinh(p1.rho) + log_sinh(p2.rho)
    return float(np.logaddexp(radial, angular))


def hyperbolic_terms(p1: PolarPoint, p2: PolarPoint) -> HyperbolicTerms:
    """Fill HyperbolicTerms in log space; valid at every magnitude."""
    lb2 = log_beta2(angle_difference(p1, p2))
    log_x = _log_x(p1, p2, lb2)
    log1p_x = float(np.logaddexp(0.0, log_x))
    return HyperbolicTerms(
        beta2=math.exp(lb2),
        log_t2=p1.rho - p2.rho,
        log_s2=p1.rho + p2.rho,
        log_denom=LOG8 + log1p_x,
        a=math.exp(0.5 * (log_x - log1p_x)) if log_x > -math.inf else 0.0,
    )


def polar_distance(
    p1: PolarPoint, p2: PolarPoint, rho_sum_limit: float = DEFAULT_DIRECT_RHO_SUM_LIMIT
) -> float:
    """Distance from the closed form with D = (2 - b)(t + 1/t)^2 + b(s + 1/s)^2.

    Args:
        p1: First point.
        p2: Second point.
        rho_sum_limit: Largest rho1 + rho2 evaluated with native floats.

    Returns:
        The hyperbolic distance.

    Raises:
        OverflowRegimeError: rho1 + rho2 exceeds rho_sum_limit.
    """
    if p1.rho + p2.rho > rho_sum_limit:
        raise OverflowRegimeError(
            f"rho1 + rho2 = {p1.rho + p2.rho} exceeds {rho_sum_limit}; use the log-domain path"
        )
    half_angle = math.sin(math.remainder(p1.phi - p2.phi, 2 * math.pi) / 2)
    beta2 = 2 * half_angle * half_angle
    radial = math.sinh((p1.rho - p2.rho) / 2)
    angular = math.sinh((p1.rho + p2.rho) / 2)
    # D - 8, expanded so that both terms are non-negative
    excess = 4 * ((2 - beta2) * radial * radial + beta2 * angular * angular)
    if excess == 0:
        return 0.0
    denom = 8 + excess
    return math.log1p(excess / 8) + 2 * math.log1p(math.sqrt(excess / denom))


def polar_distance_logdomain(p1: PolarPoint, p2: PolarPoint) -> float:
    """Distance evaluated entirely from logarithms of the two terms of X."""
    terms = hyperbolic_terms(p1, p2)
    if terms.a == 0:
        return 0.0
    log1p_x = terms.log_denom - LOG8
    if log1p_x < 0.5:
        # small X: log(1 + X) = -log(1 - A^2)
        log1p_x = -math.log1p(-terms.a * terms.a)
    return log1p_x + 2 * math.log1p(terms.a)


def parse_polar_literal(text: str) -> PolarPoint:
    """Parse "rho,phi" or "rho,logphi:<sign>,<value>"."""
    rho_text, _, angle_text = text.partition(",")
    try:
        rho = float(rho_text)
        if angle_text.strip().startswith("logphi:"):
            sign_text, _, value_text = angle_text.strip()[len("logphi:") :].partition(",")
            sign = _parse_sign(sign_text.strip())
            log_phi = SignedLog(sign, float(value_text)) if sign else SignedLog(0, -math.inf)
            return PolarPoint(rho=rho, phi=log_phi.to_float(), log_phi=log_phi)
        return PolarPoint(rho=rho, phi=float(angle_text))
    except (ValueError, OverflowError) as e:
        raise InputFormatError(f"bad polar literal {text!r}: {e}") from e


def _parse_sign(text: str) -> int:
    signs = {"+": 1, "+1": 1, "1": 1, "-": -1, "-1": -1, "0": 0}
    if text not in signs:
        raise ValueError(f"sign must be one of {sorted(signs)}, got {text!r}")
    return signs[text]


def witness_point(gamma: DiscreteFunction, eps: float) -> PolarPoint:
    """The point (rho / eps, sum a_k exp(-s_k / eps)) attached to gamma at scale eps."""
    if not eps > 0:
        raise OutOfDomainError(f"eps must be positive, got {eps}")
    log_phi = signed_log_sum(
        [
            SignedLog(1 if a > 0 else -1, math.log(abs(a)) - float(t) / eps)
            for t, a in gamma.support
        ]
    )
    return PolarPoint(
        rho=float(gamma.rho) / eps,
        phi=log_phi.to_float(),
        log_phi=log_phi,
        expansion=AngleExpansion(eps, gamma.support),
    )


def witness_distance(gamma1: DiscreteFunction, gamma2: DiscreteFunction, eps: float) -> float:
    return polar_distance_logdomain(witness_point(gamma1, eps), witness_point(gamma2, eps))


def asymptotic_error(gamma1: DiscreteFunction, gamma2: DiscreteFunction, eps: float) -> float:
    """|eps * d_X(witness points) - d_D(gamma1, gamma2)|."""
    target = float(distance_discrete(gamma1, gamma2))
    return abs(eps * witness_distance(gamma1, gamma2, eps) - target)


def witness_distance_oracle(
    gamma1: DiscreteFunction, gamma2: DiscreteFunction, eps: float, dps: int = 60
) -> float:
    """High-precision witness distance, used to calibrate the float path."""
    with mpmath.workdps(dps):
        e = mpmath.mpf(eps)
        rho1 = mpmath.mpf(gamma1.rho.numerator) / gamma1.rho.denominator / e
        rho2 = mpmath.mpf(gamma2.rho.numerator) / gamma2.rho.denominator / e
        coefficients: dict[Fraction, Fraction] = {}
        for t, a in gamma1.support:
            coefficients[t] = coefficients.get(t, Fraction(0)) + a
        for t, a in gamma2.support:
            coefficients[t] = coefficients.get(t, Fraction(0)) - a
        delta = mpmath.fsum(
            mpmath.mpf(c.numerator) / c.denominator
            * mpmath.exp(-(mpmath.mpf(t.numerator) / t.denominator) / e)
            for t, c in coefficients.items()
            if c != 0
        )
        x = mpmath.sinh((rho1 - rho2) / 2) ** 2 + mpmath.sin(delta / 2) ** 2 * mpmath.sinh(
            rho1
        ) * mpmath.sinh(rho2)
        return float(2 * mpmath.asinh(mpmath.sqrt(x)))


def convergence_report(
    gamma1: DiscreteFunction, gamma2: DiscreteFunction, schedule: EpsilonSchedule
) -> ConvergenceReport:
    """Witness-point distances of gamma1, gamma2 along a schedule, with their errors.

    Args:
        gamma1: First discrete function.
        gamma2: Second discrete function.
        schedule: Decreasing eps values.

    Returns:
        One row per eps: eps, d_X, eps * d_X, d_D and |eps * d_X - d_D|.
    """
    target = float(distance_discrete(gamma1, gamma2))
    rows = []
    for eps in schedule.values:
        d_x = witness_distance(gamma1, gamma2, eps)
        rows.append(
            ConvergenceRow(
                eps=eps, d_x=d_x, eps_d_x=eps * d_x, d_d=target, error=abs(eps * d_x - target)
            )
        )
    return ConvergenceReport(rows=rows)
