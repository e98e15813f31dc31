"""
Oscillatory function with a power-law limit at 0 and no Hölder bound.

f(x) = x^alpha (sin(x^-gamma) / ln x + 1) on (0, 1) with
gamma = 2 |beta - alpha| / beta. f(x) / x^alpha -> 1, yet the quotient
|f(q_n) - f(p_n)| / |q_n - p_n|^beta grows without bound along
p_n^-gamma = pi (n + 1), q_n^-gamma = pi (n + 1/2).
"""

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence

import numpy as np

from .errors import DomainError
from .validation import validate_osc_params

logger = logging.getLogger(__name__)

# x^-gamma above this is rejected by the direct evaluation
PHASE_GUARD = 1e12
PHASE_GUARD_SLACK = 1e-9


@dataclass(frozen=True)
class OscParams:
    """Exponents of the oscillatory function."""

    alpha: float = 1.0
    beta: float = 0.5

    def __post_init__(self):
        is_valid, error = validate_osc_params(self.alpha, self.beta)
        if not is_valid:
            raise DomainError(error)

    @property
    def gamma(self) -> float:
        return 2.0 * abs(self.beta - self.alpha) / self.beta

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {"alpha": self.alpha, "beta": self.beta, "gamma": self.gamma}


@dataclass(frozen=True)
class OscPoints:
    """p_n < q_n with their phases as exact multiples of pi."""

    n: int
    p: float
    q: float
    phase_p: Fraction
    phase_q: Fraction


@dataclass(frozen=True)
class HolderRow:
    """One row of the counterexample table."""

    n: int
    p: float
    q: float
    f_p: float
    f_q: float
    quotient: float

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {"n": self.n, "p_n": self.p, "q_n": self.q, "f_p": self.f_p, "f_q": self.f_q, "quotient": self.quotient}


def osc_f(params: OscParams, x: float) -> float:
    """
    Evaluate f directly.

    Raises:
        DomainError: x outside (0, 1) or x^-gamma beyond the phase guard

    Example:
        >>> osc_f(OscParams(), 0.5) > 0
        True
    """
    if not 0.0 < x < 1.0:
        raise DomainError(f"x must lie in (0, 1), got {x}")
    phase = x ** (-params.gamma)
    if phase > PHASE_GUARD * (1.0 + PHASE_GUARD_SLACK):
        raise DomainError(f"x^-gamma = {phase:.3e} exceeds {PHASE_GUARD:.0e}; sin is meaningless there")
    return x ** params.alpha * (math.sin(phase) / math.log(x) + 1.0)


def sin_pi(phase: Fraction) -> float:
    """
    sin(pi * phase) with the phase reduced exactly modulo 2.

    Example:
        >>> sin_pi(Fraction(3, 2))
        -1.0
    """
    reduced = phase - 2 * (phase.numerator // (2 * phase.denominator))
    if reduced.denominator == 1:
        return 0.0
    if reduced.denominator == 2:
        return 1.0 if reduced == Fraction(1, 2) else -1.0
    return math.sin(math.pi * float(reduced))


def osc_points(params: OscParams, n: int) -> OscPoints:
    """
    Points with p_n^-gamma = pi (n + 1) and q_n^-gamma = pi (n + 1/2).

    Example:
        >>> pts = osc_points(OscParams(), 10)
        >>> pts.p < pts.q
        True
    """
    if n < 1:
        raise DomainError(f"n must be a positive integer, got {n}")
    phase_p = Fraction(n + 1)
    phase_q = Fraction(2 * n + 1, 2)
    inv = 1.0 / params.gamma
    return OscPoints(
        n=n,
        p=(math.pi * float(phase_p)) ** -inv,
        q=(math.pi * float(phase_q)) ** -inv,
        phase_p=phase_p,
        phase_q=phase_q,
    )


def _f_on_phase(params: OscParams, x: float, phase: Fraction) -> float:
    return x ** params.alpha * (sin_pi(phase) / math.log(x) + 1.0)


def holder_quotient(params: OscParams, n: int) -> HolderRow:
    """
    |f(q_n) - f(p_n)| / |q_n - p_n|^beta along the exact phases.

    Both differences are formed from the ratio p_n / q_n with expm1/log1p,
    so nothing cancels as the points merge.
    """
    pts = osc_points(params, n)
    # log(p/q) = (1/gamma) log((n + 1/2) / (n + 1))
    log_ratio = math.log1p(-0.5 / (n + 1)) / params.gamma
    gap = -pts.q * math.expm1(log_ratio)

    f_p = _f_on_phase(params, pts.p, pts.phase_p)
    f_q = _f_on_phase(params, pts.q, pts.phase_q)
    sign = sin_pi(pts.phase_q)
    diff = pts.q ** params.alpha * (sign / math.log(pts.q) - math.expm1(params.alpha * log_ratio))

    quotient = abs(diff) / gap ** params.beta
    logger.debug("n = %d: gap %.3e, quotient %.6g", n, gap, quotient)
    return HolderRow(n=n, p=pts.p, q=pts.q, f_p=f_p, f_q=f_q, quotient=quotient)


def holder_table(params: OscParams, ns: Sequence[int]) -> List[HolderRow]:
    """Quotient rows for each n."""
    return [holder_quotient(params, int(n)) for n in ns]


def holder_growth_slope(rows: Sequence[HolderRow]) -> float:
    """Least-squares slope of log quotient against log n."""
    if len(rows) < 2:
        raise DomainError("at least two rows are needed for a slope")
    log_n = np.log([row.n for row in rows])
    log_q = np.log([row.quotient for row in rows])
    slope, _ = np.polyfit(log_n, log_q, 1)
    return float(slope)


def limit_ratio(params: OscParams, x: float) -> float:
    """f(x) / x^alpha, which tends to 1 as x -> 0+."""
    return osc_f(params, x) / x ** params.alpha


def phase_consistency(params: OscParams, n: int) -> float:
    """
    Relative gap between f(q_n) evaluated directly and along the exact phase.

    Only meaningful while q_n^-gamma is far below the phase guard.
    """
    pts = osc_points(params, n)
    exact = _f_on_phase(params, pts.q, pts.phase_q)
    return abs(osc_f(params, pts.q) - exact) / abs(exact)


# Acceptance thresholds of the divergence and limit witnesses
GROWTH_SLOPE_MIN = 0.1
DIVERGENCE_FACTOR = 5.0
LIMIT_TOLERANCE = 0.05
CONSISTENCY_TOLERANCE = 1e-6
CONSISTENCY_MAX_N = 10**6


@dataclass
class CounterexampleSummary:
    """Quotient table and the witnesses drawn from it."""

    params: OscParams
    rows: List[HolderRow]
    slope: float
    growth_factor: float
    limit_x: float
    limit_deviation: float
    consistency: float

    def checks(self) -> List[dict]:
        """Check records, each with name, claim, value and pass."""
        return [
            {
                "name": "holder growth slope",
                "claim": "|f(q_n) - f(p_n)|/|q_n - p_n|^beta grows like a power of n",
                "value": self.slope,
                "pass": self.slope >= GROWTH_SLOPE_MIN,
            },
            {
                "name": "holder divergence factor",
                "claim": "max_n Q_n / Q_first exceeds the divergence factor",
                "value": self.growth_factor,
                "pass": self.growth_factor > DIVERGENCE_FACTOR,
            },
            {
                "name": "power-law limit",
                "claim": "f(x)/x^alpha -> 1 as x -> 0+",
                "value": self.limit_deviation,
                "pass": self.limit_deviation <= LIMIT_TOLERANCE,
            },
            {
                "name": "phase consistency",
                "claim": "f(q_n) along the exact phase equals the direct evaluation",
                "value": self.consistency,
                "pass": self.consistency <= CONSISTENCY_TOLERANCE,
            },
        ]

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks())

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "params": self.params.to_dict(),
            "slope": self.slope,
            "growth_factor": self.growth_factor,
            "limit_x": self.limit_x,
            "limit_deviation": self.limit_deviation,
            "consistency": self.consistency,
            "checks": self.checks(),
        }


def summarize(params: OscParams, ns: Sequence[int], limit_x: float) -> CounterexampleSummary:
    """Build the quotient table for ns and evaluate every witness."""
    rows = holder_table(params, ns)
    first = rows[0].quotient
    checked = [n for n in ns if n <= CONSISTENCY_MAX_N]
    consistency = max((phase_consistency(params, int(n)) for n in checked), default=0.0)
    summary = CounterexampleSummary(
        params=params,
        rows=rows,
        slope=holder_growth_slope(rows),
        growth_factor=max(row.quotient for row in rows) / first,
        limit_x=limit_x,
        limit_deviation=abs(limit_ratio(params, limit_x) - 1.0),
        consistency=consistency,
    )
    logger.info(
        "holder quotient: slope %.4f, growth x%.3g, |f(x)/x^alpha - 1| = %.4f at x = %g",
        summary.slope,
        summary.growth_factor,
        summary.limit_deviation,
        limit_x,
    )
    return summary
