"""
Asymptotic verification harness.

Every limit statement about the layer, its fractional Laplacian and the
generated potential is sampled along a geometric sequence, extrapolated and
compared with its closed-form target.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .config_file import VerifyConfig
from .errors import ConvergenceError, DomainError
from .fraclap import fraclap_deriv
from .layer import Layer, LayerParams, arctan_layer
from .numerics import LimitEstimate, QuadratureConfig, extrapolate_limit, gamma_ratio
from .potential import PotentialModel, recover_Vderiv, well_integral

logger = logging.getLogger(__name__)

SIDES = ("+inf", "-inf", "+1-", "-1+")
# Slack when deciding whether 2s/alpha is an integer
INTEGER_SLACK = 1e-12


@dataclass
class LimitReport:
    """One extrapolated limit compared with its target (None: finiteness only)."""

    name: str
    claim: str
    side: str
    estimate: LimitEstimate
    target: Optional[float]
    rel_error: float
    passed: bool
    tolerance: float
    note: str = ""
    sample_converged: List[bool] = field(default_factory=list)

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "name": self.name,
            "claim": self.claim,
            "side": self.side,
            "samples": [[x, v] for x, v in self.estimate.samples],
            "sample_converged": list(self.sample_converged),
            "extrapolated": self.estimate.extrapolated,
            "error_estimate": self.estimate.error_estimate,
            "converged": self.estimate.converged,
            "target": "finite" if self.target is None else self.target,
            "rel_error": None if math.isnan(self.rel_error) else self.rel_error,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "note": self.note,
        }


@dataclass
class ScalarCheck:
    """A pointwise structural check."""

    name: str
    claim: str
    value: float
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "name": self.name,
            "claim": self.claim,
            "value": self.value,
            "pass": self.passed,
            "detail": self.detail,
        }


@dataclass
class VerificationReport:
    """All limit reports and scalar checks of one run."""

    layer: Dict[str, float]
    quadrature: Dict[str, object]
    limits: List[LimitReport] = field(default_factory=list)
    scalars: List[ScalarCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.limits) and all(c.passed for c in self.scalars)

    @property
    def check_count(self) -> int:
        return len(self.limits) + len(self.scalars)

    def failures(self) -> List[str]:
        """Names of failed checks."""
        return [r.name for r in self.limits if not r.passed] + [c.name for c in self.scalars if not c.passed]

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "layer": dict(self.layer),
            "quadrature": dict(self.quadrature),
            "passed": self.passed,
            "checks": [r.to_dict() for r in self.limits],
            "scalar_checks": [c.to_dict() for c in self.scalars],
        }


def make_report(
    name: str,
    claim: str,
    side: str,
    samples: List[Tuple[float, float]],
    target: Optional[float],
    tolerance: float,
    note: str = "",
    converged: Optional[Sequence[bool]] = None,
) -> LimitReport:
    """
    Extrapolate samples and grade them against a target.

    With a finite target the report passes when the relative error is within
    tolerance; without one it passes when the extrapolation converged. A
    sample whose quadrature ran out of budget fails the report whatever the
    extrapolant.
    """
    flags = [True] * len(samples) if converged is None else [bool(c) for c in converged]
    estimate = extrapolate_limit(samples, tolerance=tolerance)
    missed = flags.count(False)
    if missed:
        estimate.converged = False
        budget_note = f"{missed} of {len(flags)} samples did not converge"
        note = f"{note}; {budget_note}" if note else budget_note
    if target is None:
        rel_error = float("nan")
        passed = estimate.converged
    else:
        denom = abs(target) if target != 0.0 else 1.0
        rel_error = abs(estimate.extrapolated - target) / denom
        passed = rel_error <= tolerance and not missed
    if not passed:
        logger.warning(
            "%s (%s): estimate %.6g, target %s, rel_error %.3g%s",
            name,
            side,
            estimate.extrapolated,
            "finite" if target is None else f"{target:.6g}",
            rel_error,
            f" ({note})" if note else "",
        )
    return LimitReport(name, claim, side, estimate, target, rel_error, passed, tolerance, note, flags)


def _abscissae(layer: Layer, vcfg: VerifyConfig) -> List[float]:
    x0 = vcfg.x0_factor * layer.params.kappa
    return [x0 * 2.0 ** k for k in range(vcfg.samples)]


def _lap(layer: Layer, i: int, x: float, cfg: QuadratureConfig) -> Tuple[float, bool]:
    try:
        return fraclap_deriv(layer, i, x, cfg).value, True
    except ConvergenceError as e:
        logger.warning("quadrature did not converge at x = %g (order %d): %s", x, i, e)
        return e.estimate, False


def _sampled(
    fn: Callable[[float], Tuple[float, bool]], xs: List[float]
) -> Tuple[List[Tuple[float, float]], List[bool]]:
    samples = []
    flags = []
    for x in xs:
        value, ok = fn(x)
        samples.append((x, value))
        flags.append(ok)
    return samples, flags


def _scaled(pair: Tuple[float, bool], factor: float) -> Tuple[float, bool]:
    return pair[0] * factor, pair[1]


def verify_fraclap_decay(
    layer: Layer, cfg: QuadratureConfig, vcfg: VerifyConfig, tolerance: float = 2e-2
) -> Tuple[LimitReport, LimitReport]:
    """
    |x|^{2s} L_s phi(x) -> +1/s as x -> -inf and -1/s as x -> +inf.

    Returns:
        (report at -inf, report at +inf)
    """
    s = layer.params.s
    xs = _abscissae(layer, vcfg)
    reports = []
    for side, sign in (("-inf", -1.0), ("+inf", 1.0)):
        samples, flags = _sampled(lambda x, sg=sign: _scaled(_lap(layer, 0, sg * x, cfg), x ** (2.0 * s)), xs)
        reports.append(
            make_report(
                "fraclap decay",
                f"|x|^{{2s}} L_s phi(x) -> {'-' if sign > 0 else ''}1/s",
                side,
                samples,
                -sign / s,
                tolerance,
                converged=flags,
            )
        )
    return reports[0], reports[1]


def derivative_decay_target(i: int, s: float, side: str) -> float:
    """
    Limit of |x|^{i+2s} L_s phi^(i)(x): (+-1)^{i-1} 2 Gamma(i+2s)/Gamma(1+2s).

    Example:
        >>> derivative_decay_target(2, 0.5, "+inf")
        -4.0
    """
    sign = (-1.0) ** (i - 1) if side == "+inf" else 1.0
    return sign * 2.0 * gamma_ratio(i, s)


def verify_derivative_decay(
    layer: Layer, i: int, cfg: QuadratureConfig, vcfg: VerifyConfig, tolerance: float = 3e-2
) -> Tuple[LimitReport, LimitReport]:
    """
    |x|^{i+2s} L_s phi^(i)(x) at -inf and +inf for i = 1..3.

    The factor 2 is the total variation of phi.
    """
    if not 1 <= i <= 3:
        raise DomainError(f"i must lie in 1..3, got {i}")
    s = layer.params.s
    xs = _abscissae(layer, vcfg)
    power = i + 2.0 * s
    reports = []
    for side, sign in (("-inf", -1.0), ("+inf", 1.0)):
        samples, flags = _sampled(lambda x, sg=sign: _scaled(_lap(layer, i, sg * x, cfg), x ** power), xs)
        reports.append(
            make_report(
                f"fraclap derivative decay (i={i})",
                "|x|^{i+2s} L_s phi^(i)(x) -> (+-1)^{i-1} 2 Gamma(i+2s)/Gamma(1+2s)",
                side,
                samples,
                derivative_decay_target(i, s, side),
                tolerance,
                converged=flags,
            )
        )
    return reports[0], reports[1]


def potential_targets(params: LayerParams) -> Dict[str, float]:
    """Closed-form well limits of V and V' at -1+ and 1-."""
    s = params.s
    qa = 2.0 * s / params.alpha
    qb = 2.0 * s / params.beta
    return {
        "V -1+": params.alpha * params.c1 ** (-qa) / ((2.0 * s + params.alpha) * s),
        "V 1-": params.beta * params.c2 ** (-qb) / ((2.0 * s + params.beta) * s),
        "V' -1+": params.c1 ** (-qa) / s,
        "V' 1-": -(params.c2 ** (-qb)) / s,
    }


def _model_sample(layer: Layer, model: PotentialModel, x: float, cfg: QuadratureConfig) -> Tuple[float, float, bool]:
    """(V(r) - V(well), V'(r), converged) at r = phi(x), V referenced to the nearer well."""
    if abs(x) <= model.x_far:
        r = float(layer.value(x))
        reference = model.v_right if x > 0 else 0.0
        return model.v_at(r) - reference, model.vprime_at(r), True
    # Beyond the grid the model's V is its tail quadrature.
    slope, ok = _lap(layer, 0, x, cfg)
    try:
        return well_integral(layer, x, cfg), slope, ok
    except ConvergenceError as e:
        logger.warning("well integral at x = %g did not converge: %s", x, e)
        return float("nan"), slope, False


def verify_potential_limits(
    layer: Layer,
    model: PotentialModel,
    cfg: QuadratureConfig,
    vcfg: VerifyConfig,
    tolerance: float = 2e-2,
) -> List[LimitReport]:
    """
    Well asymptotics of V and V' read from the potential model.

    V(r)/(1+r)^{2s/alpha+1}, V'(r)/(1+r)^{2s/alpha} at -1+ and the mirrored
    quantities at 1-, with r_k = phi(x_k) and the exact tail gaps
    1+r = C1 x^-alpha, 1-r = C2 x^-beta. V at the right well is referenced to
    the model's V(1).
    """
    p = layer.params
    s = p.s
    qa = 2.0 * s / p.alpha
    qb = 2.0 * s / p.beta
    targets = potential_targets(p)
    xs = _abscissae(layer, vcfg)
    outside = sum(1 for x in xs if x > model.x_far)
    note = f"model V(1) = {model.v_right:.3e}"
    if outside:
        note += f"; {outside} samples beyond x_far use the tail quadrature"

    sides = {}
    for side, sign, power in (("-1+", -1.0, qa), ("+1-", 1.0, qb)):
        points = [_model_sample(layer, model, sign * x, cfg) for x in xs]
        gaps = [float(layer.well_gap(sign * x)) for x in xs]
        flags = [ok for _, _, ok in points]
        values = [(x, v / g ** (power + 1.0)) for x, (v, _, _), g in zip(xs, points, gaps)]
        slopes = [(x, dv / g ** power) for x, (_, dv, _), g in zip(xs, points, gaps)]
        sides[side] = (values, slopes, flags)

    left_values, left_slopes, left_flags = sides["-1+"]
    right_values, right_slopes, right_flags = sides["+1-"]
    return [
        make_report(
            "potential well value",
            "V(r)/(1+r)^{2s/alpha+1} -> alpha C1^{-2s/alpha}/((2s+alpha)s)",
            "-1+",
            left_values,
            targets["V -1+"],
            tolerance,
            note,
            converged=left_flags,
        ),
        make_report(
            "potential well value",
            "V(r)/(1-r)^{2s/beta+1} -> beta C2^{-2s/beta}/((2s+beta)s)",
            "+1-",
            right_values,
            targets["V 1-"],
            tolerance,
            note,
            converged=right_flags,
        ),
        make_report(
            "potential well slope",
            "V'(r)/(1+r)^{2s/alpha} -> C1^{-2s/alpha}/s",
            "-1+",
            left_slopes,
            targets["V' -1+"],
            tolerance,
            note,
            converged=left_flags,
        ),
        make_report(
            "potential well slope",
            "V'(r)/(1-r)^{2s/beta} -> -C2^{-2s/beta}/s",
            "+1-",
            right_slopes,
            targets["V' 1-"],
            tolerance,
            note,
            converged=right_flags,
        ),
    ]


def _is_integer(q: float) -> bool:
    return abs(q - round(q)) <= INTEGER_SLACK * max(1.0, abs(q))


def higher_limit_target(two_s: float, tail: float, c: float, i: int, right: bool) -> Optional[float]:
    """
    Limit of V^(i+1)(r)/(gap)^{2s/tail - i}, or None when only finiteness holds.

    Example:
        >>> higher_limit_target(1.0, 0.5, 1.0, 1, right=False)
        4.0
    """
    q = two_s / tail
    if not (two_s >= tail * i * (1.0 - INTEGER_SLACK) or not _is_integer(q)):
        return None
    s = 0.5 * two_s
    product = 1.0
    for j in range(i):
        product *= q - j
    sign = (-1.0) ** (i + 1) if right else 1.0
    return sign / s * c ** (-q) * product


def verify_higher_limits(
    layer: Layer, i: int, cfg: QuadratureConfig, vcfg: VerifyConfig, tolerance: float = 5e-2
) -> Tuple[LimitReport, LimitReport]:
    """
    V^(i+1)(r)/(1+r)^{2s/alpha-i} at -1+ and V^(i+1)(r)/(1-r)^{2s/beta-i} at 1-.

    V^(i+1) comes from the triangular Faa di Bruno recovery.
    """
    if not 1 <= i <= 3:
        raise DomainError(f"i must lie in 1..3, got {i}")
    p = layer.params
    two_s = 2.0 * p.s
    xs = _abscissae(layer, vcfg)

    def recovered(x: float, power: float) -> Tuple[float, bool]:
        try:
            value = recover_Vderiv(layer, x, i, cfg)
        except ConvergenceError as e:
            logger.warning("recovery at x = %g did not converge: %s", x, e)
            return float("nan"), False
        return value / float(layer.well_gap(x)) ** power, True

    left_samples, left_flags = _sampled(lambda x: recovered(-x, two_s / p.alpha - i), xs)
    right_samples, right_flags = _sampled(lambda x: recovered(x, two_s / p.beta - i), xs)
    left = make_report(
        f"potential derivative (i={i})",
        "V^(i+1)(r)/(1+r)^{2s/alpha-i} -> (1/s) C1^{-2s/alpha} prod_j (2s/alpha - j)",
        "-1+",
        left_samples,
        higher_limit_target(two_s, p.alpha, p.c1, i, right=False),
        tolerance,
        converged=left_flags,
    )
    right = make_report(
        f"potential derivative (i={i})",
        "V^(i+1)(r)/(1-r)^{2s/beta-i} -> ((-1)^{i+1}/s) C2^{-2s/beta} prod_j (2s/beta - j)",
        "+1-",
        right_samples,
        higher_limit_target(two_s, p.beta, p.c2, i, right=True),
        tolerance,
        converged=right_flags,
    )
    return left, right


def verify_double_well(model: PotentialModel, balance_tol: float = 1e-4) -> List[ScalarCheck]:
    """V(-1) = 0, |V(1)| <= balance_tol * max V and V > 0 strictly inside."""
    interior_min = float(model.v_values[1:-1].min())
    return [
        ScalarCheck(
            "potential left well",
            "V(-1) = 0",
            float(model.v_values[0]),
            model.v_values[0] == 0.0,
        ),
        ScalarCheck(
            "potential balance",
            "|V(1)| <= tol * max V",
            model.v_right,
            abs(model.v_right) <= balance_tol * model.max_v,
            f"max V = {model.max_v:.6g}",
        ),
        ScalarCheck(
            "potential positivity",
            "V > 0 on (-1, 1)",
            interior_min,
            interior_min > 0.0,
        ),
    ]


def _floor_ratio(two_s: float, tail: float) -> int:
    q = two_s / tail
    nearest = round(q)
    return int(nearest) if _is_integer(q) else int(math.floor(q))


def regularity_class(params: LayerParams) -> Tuple[int, int]:
    """
    (floor(2s/alpha), floor(2s/beta)).

    Example:
        >>> regularity_class(LayerParams(s=0.5, alpha=0.4, beta=1.0, kappa=4.0))
        (2, 1)
    """
    two_s = 2.0 * params.s
    return _floor_ratio(two_s, params.alpha), _floor_ratio(two_s, params.beta)


def classify_wells(params: LayerParams) -> Tuple[str, str]:
    """
    Non-degenerate when the tail exponent equals 2s (V'' nonzero at the well).

    Example:
        >>> classify_wells(LayerParams(s=0.5, alpha=1.0, beta=0.5, kappa=2.0))
        ('non-degenerate', 'degenerate')
    """
    two_s = 2.0 * params.s

    def kind(tail: float) -> str:
        return "non-degenerate" if _is_integer(two_s / tail) and round(two_s / tail) == 1 else "degenerate"

    return kind(params.alpha), kind(params.beta)


def fractional_order_split(params: LayerParams) -> Tuple[Tuple[int, float], Tuple[int, float]]:
    """
    Write 2s/alpha and 2s/beta as integer part plus remainder in [0, 1).

    Example:
        >>> fractional_order_split(LayerParams(s=0.5, alpha=0.4, beta=1.0, kappa=4.0))
        ((2, 0.5), (1, 0.0))
    """
    two_s = 2.0 * params.s
    out = []
    for tail in (params.alpha, params.beta):
        q = two_s / tail
        whole = _floor_ratio(two_s, tail)
        out.append((whole, max(q - whole, 0.0) if not _is_integer(q) else 0.0))
    return out[0], out[1]


def verify_arctan_tail(vcfg: VerifyConfig, tolerance: float = 1e-6) -> LimitReport:
    """x (1 - u(x)) -> 2/pi for the arctan profile."""
    u = arctan_layer()
    xs = [vcfg.arctan_start * 2.0 ** k for k in range(max(vcfg.samples, 4))]
    return make_report(
        "arctan tail",
        "x (1 - u(x)) -> 2/pi",
        "+inf",
        [(x, x * float(u.well_gap(x))) for x in xs],
        2.0 / math.pi,
        tolerance,
    )


def verify_all(
    layer: Layer,
    model: PotentialModel,
    cfg: QuadratureConfig,
    vcfg: VerifyConfig,
    tolerances: Optional[Dict[str, float]] = None,
) -> VerificationReport:
    """
    Run every check on one layer and its potential.

    Reports are ordered by name, then side.
    """
    tol = {
        "limit": 2e-2,
        "derivative_limit": 3e-2,
        "derivative_limit_higher": 5e-2,
        "higher_limit": 5e-2,
        "balance": 1e-4,
        "arctan_tail": 1e-6,
    }
    tol.update(tolerances or {})
    p = layer.params

    limits: List[LimitReport] = []
    logger.info("verifying fraclap decay")
    limits.extend(verify_fraclap_decay(layer, cfg, vcfg, tol["limit"]))
    for i in range(1, vcfg.max_order + 1):
        logger.info("verifying fraclap derivative decay, i = %d", i)
        key = "derivative_limit" if i == 1 else "derivative_limit_higher"
        limits.extend(verify_derivative_decay(layer, i, cfg, vcfg, tol[key]))
    logger.info("verifying potential well limits")
    limits.extend(verify_potential_limits(layer, model, cfg, vcfg, tol["limit"]))
    for i in range(1, vcfg.max_order + 1):
        logger.info("verifying potential derivative limits, i = %d", i)
        limits.extend(verify_higher_limits(layer, i, cfg, vcfg, tol["higher_limit"]))
    limits.append(verify_arctan_tail(vcfg, tol["arctan_tail"]))
    limits.sort(key=lambda r: (r.name, r.side))

    scalars = verify_double_well(model, tol["balance"])
    reg_left, reg_right = regularity_class(p)
    wells = classify_wells(p)
    (i_l, m_l), (i_r, m_r) = fractional_order_split(p)
    scalars.append(
        ScalarCheck(
            "regularity class",
            "(floor(2s/alpha), floor(2s/beta))",
            float(reg_left),
            True,
            f"left {reg_left}, right {reg_right}; split left ({i_l}, {m_l:.6g}), right ({i_r}, {m_r:.6g})",
        )
    )
    scalars.append(
        ScalarCheck(
            "well type",
            "non-degenerate iff tail exponent = 2s",
            0.0,
            True,
            f"left {wells[0]}, right {wells[1]}",
        )
    )
    scalars.sort(key=lambda c: c.name)

    report = VerificationReport(layer=p.to_dict(), quadrature=cfg.to_dict(), limits=limits, scalars=scalars)
    logger.info("verification: %d checks, %d failed", report.check_count, len(report.failures()))
    return report
