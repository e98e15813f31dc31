"""
Poisson extension of a profile to the upper half-plane.

u_bar(x, y) = integral H_s(xi) v(x - y xi) dxi with H_s(xi) = p_s (1 + xi^2)^-(1+2s)/2,
the conjugate quantity w = y^(1-2s) d_y u_bar, its trace 2s p_s L_s v and the
Hamiltonian inequality along vertical segments.
"""

import logging
import math
from dataclasses import dataclass
from typing import Any, Callable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import DomainError
from .numerics import (
    QuadratureConfig,
    adaptive_panel_integrate,
    gamma,
    gauss_rule,
    graded_unit_integrate,
    reciprocal_gamma,
    weighted_unit_integral,
)

logger = logging.getLogger(__name__)

Evaluator = Callable[[np.ndarray], np.ndarray]

# Step of the finite-difference route of w, as a fraction of y
FD_STEP = 1e-2
NORMALIZATION_ORDER = 40


@dataclass(frozen=True)
class ExtensionConstants:
    """Constants of the extension problem for one s."""

    s: float
    p_s: float
    d_s: float
    q_s: float
    ds_over_qs: float
    p_s_closed_form: Optional[float]

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "s": self.s,
            "p_s": self.p_s,
            "d_s": self.d_s,
            "q_s": self.q_s,
            "ds_over_qs": self.ds_over_qs,
            "p_s_closed_form": self.p_s_closed_form,
        }


@dataclass(frozen=True)
class ExtensionSample:
    """Extension and both estimates of w at one point."""

    x: float
    y: float
    u_bar: float
    w_fd: float
    w_repr: float

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {"x": self.x, "y": self.y, "u_bar": self.u_bar, "w_fd": self.w_fd, "w_repr": self.w_repr}


@dataclass(frozen=True)
class HamiltonianSample:
    """Both sides of the Hamiltonian inequality at (x, y)."""

    x: float
    y: float
    lhs: float
    rhs: float
    holds: bool

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {"x": self.x, "y": self.y, "lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


def _gamma_any(z: float) -> float:
    # Gamma on (-1, 0) by the recurrence, positive axis by Lanczos.
    if -1.0 < z < 0.0:
        return gamma(z + 1.0) / z
    return gamma(z)


def extension_constants(s: float) -> ExtensionConstants:
    """
    Constants p_s, d_s, q_s and the ratio d_s/q_s = 1/(2s p_s).

    p_s is fixed by the normalization of H_s. The closed form
    Gamma((1+2s)/2) Gamma(1-2s) / (sqrt(pi) Gamma(1-s) Gamma(s)) is reported
    alongside (None at s = 1/2, where Gamma(1-2s) has a pole).

    Example:
        >>> round(extension_constants(0.5).p_s, 10)
        0.3183098862
    """
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    sqrt_pi = math.sqrt(math.pi)
    half = 0.5 * (1.0 + 2.0 * s)
    p_s = gamma(half) / (sqrt_pi * gamma(s))
    q_s = s * (1.0 - s) * 2.0 ** (2.0 * s) * gamma(half) / (sqrt_pi * gamma(2.0 - s))
    d_s = 2.0 ** (2.0 * s - 1.0) * gamma(s) * reciprocal_gamma(1.0 - 2.0 * s)

    closed: Optional[float] = None
    if abs(1.0 - 2.0 * s) > 1e-14:
        closed = gamma(half) * _gamma_any(1.0 - 2.0 * s) / (sqrt_pi * gamma(1.0 - s) * gamma(s))
        if abs(closed - p_s) > 1e-8 * p_s:
            logger.warning("closed-form p_s = %.12g differs from normalization p_s = %.12g at s = %g", closed, p_s, s)

    return ExtensionConstants(
        s=s,
        p_s=p_s,
        d_s=d_s,
        q_s=q_s,
        ds_over_qs=1.0 / (2.0 * s * p_s),
        p_s_closed_form=closed,
    )


def kernel_H(s: float, xi: np.ndarray) -> np.ndarray:
    """H_s(xi) = p_s (1 + xi^2)^-(1+2s)/2."""
    p_s = extension_constants(s).p_s
    return p_s * (1.0 + np.asarray(xi, dtype=float) ** 2) ** (-0.5 - s)


def kernel_normalization(s: float) -> float:
    """
    integral over R of H_s, computed as 2 (integral_0^1 + integral_1^inf).

    Example:
        >>> abs(kernel_normalization(0.5) - 1.0) < 1e-12
        True
    """
    p_s = extension_constants(s).p_s
    rule = gauss_rule(NORMALIZATION_ORDER)
    xi = 0.5 * (rule.nodes + 1.0)
    near = 0.5 * float(np.dot(rule.weights, p_s * (1.0 + xi ** 2) ** (-0.5 - s)))
    far, _ = weighted_unit_integral(
        lambda u: p_s * (1.0 + u ** 2) ** (-0.5 - s), 2.0 * s - 1.0, NORMALIZATION_ORDER
    )
    return 2.0 * (near + far)


def poisson_average(
    fn: Evaluator, x: float, y: float, s: float, cfg: QuadratureConfig, first_moment: bool = False
) -> float:
    """
    integral H_s(xi) fn(x - y xi) dxi, or with xi H_s(xi) when first_moment is set.

    |xi| <= 1 by adaptive panels; |xi| > 1 through u = 1/xi on a mesh graded
    toward u = 0.
    """
    if not y > 0.0:
        raise DomainError(f"y must be positive, got {y}")
    p_s = extension_constants(s).p_s

    def near(xi: np.ndarray) -> np.ndarray:
        kernel = p_s * (1.0 + xi * xi) ** (-0.5 - s)
        if first_moment:
            kernel = kernel * xi
        return kernel * fn(x - y * xi)

    near_val, _ = adaptive_panel_integrate(near, -1.0, 1.0, cfg, breakpoints=[0.0])

    if first_moment:
        exponent = 2.0 * s - 2.0

        def far(u: np.ndarray) -> np.ndarray:
            return p_s * (1.0 + u * u) ** (-0.5 - s) * (fn(x - y / u) - fn(x + y / u))
    else:
        exponent = 2.0 * s - 1.0

        def far(u: np.ndarray) -> np.ndarray:
            return p_s * (1.0 + u * u) ** (-0.5 - s) * (fn(x - y / u) + fn(x + y / u))

    far_val = graded_unit_integrate(far, exponent, cfg.graded_levels, cfg.graded_order)
    return near_val + far_val


def _values(v: Any) -> Evaluator:
    return lambda z: np.asarray(v.value(z), dtype=float)


def _slopes(v: Any) -> Evaluator:
    return lambda z: np.asarray(v.derivative(z, 1), dtype=float)


def extend(v: Any, x: float, y: float, cfg: QuadratureConfig) -> float:
    """
    u_bar(x, y) for a bounded profile v (an object with value, derivative and s).

    Example:
        >>> from src.core.layer import arctan_layer
        >>> abs(extend(arctan_layer(), 0.0, 0.5, QuadratureConfig())) < 1e-12
        True
    """
    return poisson_average(_values(v), x, y, v.s, cfg)


def ubar_x(v: Any, x: float, y: float, cfg: QuadratureConfig) -> float:
    """d_x u_bar = integral H_s(xi) v'(x - y xi) dxi."""
    return poisson_average(_slopes(v), x, y, v.s, cfg)


def ubar_y(v: Any, x: float, y: float, cfg: QuadratureConfig) -> float:
    """d_y u_bar = -integral xi H_s(xi) v'(x - y xi) dxi."""
    return -poisson_average(_slopes(v), x, y, v.s, cfg, first_moment=True)


def w_eval(
    v: Any,
    lsv: Optional[Evaluator],
    x: float,
    y: float,
    cfg: QuadratureConfig,
    method: str = "finite_difference",
) -> float:
    """
    w(x, y) = y^(1-2s) d_y u_bar(x, y).

    method "finite_difference": central differences of u_bar with steps
    y/100 and y/200 combined by one Richardson step.
    method "representation": 2s p_s integral H_{1-s}(xi) L_s v(x - y xi) dxi,
    with lsv evaluating L_s v on arrays.
    """
    s = v.s
    if method == "finite_difference":
        h = FD_STEP * y

        def central(step: float) -> float:
            return (extend(v, x, y + step, cfg) - extend(v, x, y - step, cfg)) / (2.0 * step)

        derivative = (4.0 * central(0.5 * h) - central(h)) / 3.0
        return y ** (1.0 - 2.0 * s) * derivative
    if method == "representation":
        if lsv is None:
            raise DomainError("the representation route needs an evaluator of L_s v")
        p_s = extension_constants(s).p_s
        return 2.0 * s * p_s * poisson_average(lsv, x, y, 1.0 - s, cfg)
    raise DomainError(f"Unknown method: {method}")


def extension_samples(
    v: Any, lsv: Optional[Evaluator], xs: Sequence[float], ys: Sequence[float], cfg: QuadratureConfig
) -> List[ExtensionSample]:
    """u_bar and both routes of w on an (x, y) grid."""
    samples = []
    for y in ys:
        for x in xs:
            samples.append(
                ExtensionSample(
                    x=float(x),
                    y=float(y),
                    u_bar=extend(v, x, y, cfg),
                    w_fd=w_eval(v, lsv, x, y, cfg, "finite_difference"),
                    w_repr=w_eval(v, lsv, x, y, cfg, "representation") if lsv is not None else float("nan"),
                )
            )
    return samples


def trace_check(
    v: Any, lsv: Evaluator, xs: Sequence[float], y: float, cfg: QuadratureConfig
) -> Tuple[float, List[Tuple[float, float, float]]]:
    """
    Compare w(x, y) at small y with its trace 2s p_s L_s v(x).

    Returns:
        Tuple of (max abs deviation, list of (x, w, trace))
    """
    scale = 2.0 * v.s * extension_constants(v.s).p_s
    rows = []
    for x in xs:
        w = w_eval(v, lsv, x, y, cfg, "finite_difference")
        trace = scale * float(np.asarray(lsv(np.array([x])))[0])
        rows.append((float(x), w, trace))
    worst = max(abs(w - t) for _, w, t in rows)
    return worst, rows


def hamiltonian_check(v: Any, G: Callable[[float], float], x: float, y: float, cfg: QuadratureConfig) -> HamiltonianSample:
    """
    (d_s/q_s) integral_0^y (t^(1-2s)/2)(u_x^2 - u_y^2) dt < G(v(x)) - G(1).

    d_s/q_s is taken as 1/(2s p_s). u_x and u_y use the differentiated kernels.
    """
    s = v.s
    consts = extension_constants(s)
    inner_cfg = cfg.with_tolerance(max(cfg.tol_abs, 1e-9), max(cfg.tol_rel, 1e-8))

    def integrand(ts: np.ndarray) -> np.ndarray:
        out = np.empty_like(ts)
        for k, t in enumerate(ts):
            ux = ubar_x(v, x, float(t), cfg)
            uy = ubar_y(v, x, float(t), cfg)
            out[k] = 0.5 * t ** (1.0 - 2.0 * s) * (ux * ux - uy * uy)
        return out

    integral, _ = adaptive_panel_integrate(integrand, 0.0, y, inner_cfg)
    lhs = consts.ds_over_qs * integral
    rhs = float(G(float(v.value(x)))) - float(G(1.0))
    return HamiltonianSample(x=float(x), y=float(y), lhs=lhs, rhs=rhs, holds=bool(lhs < rhs))


def maximum_principle_check(
    v: Any, points: Sequence[Tuple[float, float]], cfg: QuadratureConfig, lower: float = -1.0, upper: float = 1.0
) -> bool:
    """True when lower <= u_bar(x, y) <= upper at every point."""
    for x, y in points:
        value = extend(v, x, y, cfg)
        if not lower - 1e-12 <= value <= upper + 1e-12:
            logger.warning("maximum principle violated at (%g, %g): u_bar = %.15g", x, y, value)
            return False
    return True
