"""
Double-well potential generated by a layer.

g = L_s phi, h = g o phi^-1 and V(r) = integral_{-1}^r h. V is integrated in
the x variable, V(phi(X)) = integral_{-inf}^X g(x) phi'(x) dx, on an
asinh-graded grid with the two infinite tails added by graded quadrature.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np
from scipy.integrate import cumulative_simpson

from .config_file import GridConfig
from .errors import DomainError
from .fraclap import fraclap, fraclap_deriv
from .layer import Layer, Profile
from .numerics import ArrayLike, QuadratureConfig, graded_unit_integrate, partitions_weighted

logger = logging.getLogger(__name__)

# Graded mesh used for the infinite tails of integral g phi'
WELL_LEVELS = 14
WELL_ORDER = 8
MAX_RECOVERY_ORDER = 4


@dataclass
class PotentialModel:
    """Sampled potential V and its derivative on an increasing r grid."""

    r_grid: np.ndarray
    v_values: np.ndarray
    vprime_values: np.ndarray
    x_grid: np.ndarray
    x_far: float
    truncation_bound: float
    truncation_warning: bool
    provenance: Dict[str, object] = field(default_factory=dict)

    @property
    def v_right(self) -> float:
        """Numerical V(1); zero in exact arithmetic when the wells balance."""
        return float(self.v_values[-1])

    @property
    def max_v(self) -> float:
        return float(np.max(self.v_values))

    def v_at(self, r: ArrayLike) -> ArrayLike:
        """V(r) by linear interpolation on the grid."""
        vals = np.interp(r, self.r_grid, self.v_values)
        return float(vals) if np.ndim(r) == 0 else vals

    def vprime_at(self, r: ArrayLike) -> ArrayLike:
        """V'(r) = h(r) by linear interpolation on the grid."""
        vals = np.interp(r, self.r_grid, self.vprime_values)
        return float(vals) if np.ndim(r) == 0 else vals

    def rows(self) -> List[List[float]]:
        """(r, V, V') rows for reporting."""
        return [[float(r), float(v), float(dv)] for r, v, dv in zip(self.r_grid, self.v_values, self.vprime_values)]

    def to_dict(self) -> dict:
        """Convert to dictionary representation (grid excluded)."""
        return {
            "x_far": self.x_far,
            "nodes": int(len(self.x_grid)),
            "v_right": self.v_right,
            "max_v": self.max_v,
            "truncation_bound": self.truncation_bound,
            "truncation_warning": self.truncation_warning,
            "provenance": dict(self.provenance),
        }


def h_of_r(layer: Profile, r: float, cfg: QuadratureConfig) -> float:
    """
    h(r) = L_s phi(phi^-1(r)).

    Raises:
        DomainError: r is not strictly inside (-1, 1)
    """
    return fraclap(layer, layer.inverse(r), cfg).value


def _g_times_slope(layer: Profile, y: np.ndarray, cfg: QuadratureConfig) -> np.ndarray:
    g = np.array([fraclap(layer, float(yj), cfg).value for yj in np.atleast_1d(y)])
    return g * np.asarray(layer.derivative(np.atleast_1d(y), 1))


def well_integral(layer: Layer, x: float, cfg: QuadratureConfig) -> float:
    """
    Tail integral of g phi' beyond x.

    For x < 0 returns integral_{-inf}^x g phi' = V(phi(x)); for x > 0 returns
    -integral_x^inf g phi' = V(phi(x)) - V(1). Computed in v = x / y on a
    mesh graded toward v = 0, where the integrand behaves like a power of v.

    Args:
        layer: Power-tail layer
        x: Tail abscissa with |x| >= kappa
        cfg: Quadrature configuration
    """
    p = layer.params
    if abs(x) < p.kappa:
        raise DomainError(f"well_integral needs |x| >= kappa = {p.kappa}, got {x}")
    tail_exp = p.alpha if x < 0 else p.beta
    exponent = 2.0 * p.s + tail_exp - 1.0
    ax = abs(x)

    def smooth_part(v: np.ndarray) -> np.ndarray:
        return _g_times_slope(layer, x / v, cfg) * ax * v ** (-2.0 - exponent)

    total = graded_unit_integrate(smooth_part, exponent, WELL_LEVELS, WELL_ORDER)
    return total if x < 0 else -total


def _symmetric_asinh_grid(scale: float, x_far: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    unit = np.linspace(-1.0, 1.0, nodes)
    unit = 0.5 * (unit - unit[::-1])
    xi = math.asinh(x_far / scale) * unit
    x = scale * np.sinh(xi)
    x[0], x[-1] = -x_far, x_far
    return xi, x


def build_potential(layer: Layer, grid_cfg: GridConfig, cfg: QuadratureConfig) -> PotentialModel:
    """
    Build V on r = phi(x) for an asinh-graded x grid.

    V(-1) is 0 by definition; V(1) is the full integral and is not forced to
    vanish. h(+-1) are closed by 0.

    Args:
        layer: Power-tail layer
        grid_cfg: Grid settings (x_far, node count, truncation tolerance)
        cfg: Quadrature configuration

    Returns:
        PotentialModel
    """
    p = layer.params
    x_far = grid_cfg.potential_x_far
    scale = layer.feature_scale
    xi, x = _symmetric_asinh_grid(scale, x_far, grid_cfg.potential_nodes)

    logger.info("building potential on %d nodes, x_far = %g", len(x), x_far)
    g = np.array([fraclap(layer, float(xj), cfg).value for xj in x])
    slope = np.asarray(layer.derivative(x, 1))
    integrand = g * slope * scale * np.cosh(xi)

    # Accumulate from each well toward x = 0 so that odd integrands cancel exactly.
    c = len(x) // 2
    left_tail = well_integral(layer, -x_far, cfg)
    right_tail = -well_integral(layer, x_far, cfg)
    from_left = left_tail + cumulative_simpson(integrand[: c + 1], x=xi[: c + 1], initial=0.0)
    to_right = right_tail + cumulative_simpson(integrand[c:][::-1], x=-xi[c:][::-1], initial=0.0)
    v_right = float(from_left[-1] + to_right[-1])
    v_nodes = np.concatenate([from_left, v_right - to_right[::-1][1:]])

    decade = np.abs(x) >= 0.1 * x_far
    measured = float(np.max(np.abs(x[decade]) ** (2.0 * p.s) * np.abs(g[decade])))
    two_s = 2.0 * p.s
    tail_mass = p.c2 * p.beta * x_far ** (-two_s - p.beta) / (two_s + p.beta) + p.c1 * p.alpha * x_far ** (
        -two_s - p.alpha
    ) / (two_s + p.alpha)
    bound = measured * tail_mass
    warning = bound > grid_cfg.truncation_tol
    if warning:
        logger.warning(
            "truncation bound %.3e at x_far = %g exceeds %.1e; tails are added by quadrature",
            bound,
            x_far,
            grid_cfg.truncation_tol,
        )

    r_grid = np.concatenate([[-1.0], np.asarray(layer.value(x)), [1.0]])
    if np.any(np.diff(r_grid) <= 0.0):
        raise DomainError("r grid is not strictly increasing; reduce x_far or the node count")

    return PotentialModel(
        r_grid=r_grid,
        v_values=np.concatenate([[0.0], v_nodes, [v_right]]),
        vprime_values=np.concatenate([[0.0], g, [0.0]]),
        x_grid=x,
        x_far=x_far,
        truncation_bound=bound,
        truncation_warning=bool(warning),
        provenance={
            "layer": p.to_dict(),
            "quadrature": cfg.to_dict(),
            "left_tail": left_tail,
            "right_tail": right_tail,
            "h_at_wells": "h(-1) = h(1) := 0 (continuous extension)",
        },
    )


def recover_Vderiv(layer: Layer, x: float, i: int, cfg: QuadratureConfig) -> float:
    """
    V^(i+1)(phi(x)) from L_s phi^(j)(x), j <= i.

    Differentiating V'(phi(x)) = L_s phi(x) i times with the Faa di Bruno
    formula gives a triangular system; the term with m_1 = i carries the
    unknown V^(i+1) times phi'(x)^i.

    Args:
        layer: Power-tail layer
        x: Tail abscissa, |x| > 2 kappa
        i: Order, 0..4
        cfg: Quadrature configuration

    Example:
        i = 1 gives L_s phi'(x) / phi'(x).
    """
    if not 0 <= i <= MAX_RECOVERY_ORDER:
        raise DomainError(f"recovery order must lie in 0..{MAX_RECOVERY_ORDER}, got {i}")
    if abs(x) <= 2.0 * layer.feature_scale:
        raise DomainError(f"recover_Vderiv needs |x| > 2 kappa, got {x}")

    lap = [fraclap_deriv(layer, j, x, cfg).value for j in range(i + 1)]
    d = [float(layer.derivative(x, j)) for j in range(i + 1)]

    vd = {1: lap[0]}
    for n in range(1, i + 1):
        acc = lap[n]
        for m in partitions_weighted(n):
            order = sum(m)
            if order == n:
                continue
            coef = math.factorial(n)
            for j, mj in enumerate(m, start=1):
                coef *= (d[j] / math.factorial(j)) ** mj / math.factorial(mj)
            acc -= coef * vd[1 + order]
        vd[n + 1] = acc / d[1] ** n
    return vd[i + 1]
