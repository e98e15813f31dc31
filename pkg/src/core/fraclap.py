"""
One-dimensional fractional Laplacian of a profile and of its derivatives.

L_s f(x) = integral_0^inf (f(x+t) + f(x-t) - 2 f(x)) t^(-1-2s) dt, without a
normalizing constant. The integral is split into an inner Taylor part on
(0, t_min], an adaptive panel part on [t_min, T] and an outer part on
[T, inf) where both x + t and x - t lie in the closed-form tails.
"""

import logging
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import ConvergenceError, DomainError
from .layer import ArctanLayer, Profile
from .numerics import QuadratureConfig, adaptive_panel_integrate

logger = logging.getLogger(__name__)

MAX_DERIVATIVE_ORDER = 4
# Geometric ratio of the initial panel edges in t
PANEL_RATIO = 4.0
# Below this fraction of the feature scale the second difference comes from Taylor terms
TAYLOR_SWITCH = 1e-3
TAYLOR_TERMS = 4


@dataclass(frozen=True)
class FracEval:
    """Fractional Laplacian value with its error estimate and parts."""

    value: float
    error_estimate: float
    inner: float
    mid: float
    outer_constant: float
    outer_power: float

    @property
    def breakdown(self) -> Tuple[float, float, float, float]:
        return (self.inner, self.mid, self.outer_constant, self.outer_power)

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "value": self.value,
            "error_estimate": self.error_estimate,
            "inner": self.inner,
            "mid": self.mid,
            "outer_constant": self.outer_constant,
            "outer_power": self.outer_power,
        }


def fraclap(layer: Profile, x: float, cfg: QuadratureConfig) -> FracEval:
    """
    Evaluate L_s phi(x).

    Args:
        layer: Profile to act on
        x: Evaluation point
        cfg: Quadrature configuration

    Returns:
        FracEval whose value is the sum of its four parts

    Raises:
        ConvergenceError: The panel budget ran out; carries the best estimate
            of the full value (all four parts)
    """
    return fraclap_deriv(layer, 0, x, cfg)


def fraclap_deriv(layer: Profile, i: int, x: float, cfg: QuadratureConfig) -> FracEval:
    """
    Evaluate L_s phi^(i)(x) for i = 0..4.

    Example:
        >>> from src.core.layer import arctan_layer
        >>> round(fraclap_deriv(arctan_layer(), 0, 1.0, QuadratureConfig()).value, 8)
        -1.0
    """
    if not 0 <= i <= MAX_DERIVATIVE_ORDER:
        raise DomainError(f"derivative order must lie in 0..{MAX_DERIVATIVE_ORDER}, got {i}")
    if not math.isfinite(x):
        raise DomainError(f"x must be finite, got {x!r}")
    x = float(x)
    s = layer.s
    two_s = 2.0 * s

    derivs = layer.derivatives_at(x, i + 2 * TAYLOR_TERMS)[i:]
    f0 = derivs[0]

    # Far from the transition the result decays like |x|^-(i+2s); the absolute tolerance follows it.
    decay = min(1.0, (layer.reach / abs(x)) ** (i + two_s)) if x != 0.0 else 1.0
    if decay < 1.0:
        cfg = cfg.with_tolerance(cfg.tol_abs * decay)

    # Inner part (0, t_min]: second difference replaced by f'' t^2.
    t_min = cfg.inner_cutoff(derivs[2], s)
    inner = derivs[2] * t_min ** (2.0 - two_s) / (2.0 - two_s)
    inner_err = abs(derivs[4]) / 12.0 * t_min ** (4.0 - two_s) / (4.0 - two_s)

    T = cfg.outer_margin * (abs(x) + layer.reach)
    t_switch = min(TAYLOR_SWITCH * layer.feature_scale, T)

    taylor = [derivs[2 * k] / math.factorial(2 * k) for k in range(1, TAYLOR_TERMS + 1)]
    if i == 0:
        offset0, rem0 = layer.split(np.array([x]))
        offset0, rem0 = float(offset0[0]), float(rem0[0])

    def integrand(t: np.ndarray) -> np.ndarray:
        diff = np.empty_like(t)
        small = t < t_switch
        if np.any(small):
            t2 = t[small] ** 2
            acc = np.zeros_like(t2)
            for k in range(TAYLOR_TERMS, 0, -1):
                acc = (acc + taylor[k - 1]) * t2
            diff[small] = 2.0 * acc
        big = ~small
        if np.any(big):
            tb = t[big]
            if i == 0:
                off_p, rem_p = layer.split(x + tb)
                off_m, rem_m = layer.split(x - tb)
                diff[big] = (off_p + off_m - 2.0 * offset0) + (rem_p + rem_m - 2.0 * rem0)
            else:
                diff[big] = (
                    np.asarray(layer.derivative(x + tb, i))
                    + np.asarray(layer.derivative(x - tb, i))
                    - 2.0 * f0
                )
        return diff * t ** (-1.0 - two_s)

    outer_constant = -2.0 * f0 * T ** (-two_s) / two_s
    outer_power, outer_err = layer.outer_power(x, T, i, cfg.outer_order)

    try:
        mid, mid_err = adaptive_panel_integrate(
            integrand, t_min, T, cfg, breakpoints=_breakpoints(layer, x, t_min, T)
        )
    except ConvergenceError as e:
        raise ConvergenceError(
            f"L_s f^({i})({x:g}): {e}",
            estimate=inner + e.estimate + outer_constant + outer_power,
            error_estimate=inner_err + e.error_estimate + outer_err,
        ) from e

    value = inner + mid + outer_constant + outer_power
    error = inner_err + mid_err + outer_err
    logger.debug(
        "L_s f^(%d)(%g) = %.16g (t_min %.2e, T %.3g, err %.2e)", i, x, value, t_min, T, error
    )
    return FracEval(
        value=value,
        error_estimate=error,
        inner=inner,
        mid=mid,
        outer_constant=outer_constant,
        outer_power=outer_power,
    )


def _breakpoints(layer: Profile, x: float, t_min: float, T: float) -> np.ndarray:
    count = max(int(math.ceil(math.log(T / t_min) / math.log(PANEL_RATIO))), 1)
    edges = list(t_min * PANEL_RATIO ** np.arange(1, count))
    width = layer.feature_scale
    for point in layer.feature_points:
        centre = abs(x - point)
        edges.extend([centre - 0.5 * width, centre, centre + 0.5 * width])
    edges.extend([abs(x) - layer.reach, abs(x) + layer.reach])
    return np.array([e for e in edges if t_min < e < T])


def fraclap_arctan_exact(x: float, normalized: bool = False) -> float:
    """
    Closed-form L_{1/2} of u(x) = (2/pi) arctan(x).

    Example:
        >>> fraclap_arctan_exact(1.0)
        -1.0
    """
    return ArctanLayer().exact_fraclap(x, normalized=normalized)
