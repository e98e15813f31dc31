"""
Transition layer profiles.

A profile is a bounded, strictly increasing function connecting -1 to +1.
Two kinds are provided: the power-tail layer with a smooth bridge on
[-kappa, kappa], and the exact arctan profile. Both expose the evaluators the
fractional Laplacian quadrature needs (values, derivatives, the offset /
remainder split of the values, and the far-field power integrals).
"""

import logging
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from numpy.polynomial import Chebyshev

from .errors import ConstructionError, DomainError
from .numerics import (
    ArrayLike,
    LimitEstimate,
    TaylorJet,
    extrapolate_limit,
    rising_factorial,
    smooth_step,
    smooth_step_jet,
    weighted_unit_integral,
)
from .validation import validate_layer_params

logger = logging.getLogger(__name__)

# Clamp level of m(y) as a fraction of kappa
LEVEL_FRACTION = 0.75
MONOTONE_GRID_POINTS = 4096
MONOTONE_GRID_SPAN = 10.0
DEFAULT_CHEBYSHEV_DEGREE = 96


@dataclass(frozen=True)
class LayerParams:
    """Parameters of a power-tail layer."""

    s: float = 0.5
    alpha: float = 1.0
    beta: float = 1.0
    kappa: float = 2.0
    c1: float = 1.0
    c2: float = 1.0

    @property
    def is_symmetric(self) -> bool:
        """True when the layer is an odd function."""
        return self.alpha == self.beta and self.c1 == self.c2

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "s": self.s,
            "alpha": self.alpha,
            "beta": self.beta,
            "kappa": self.kappa,
            "c1": self.c1,
            "c2": self.c2,
        }


def _as_output(values: np.ndarray, scalar: bool) -> ArrayLike:
    return float(values[0]) if scalar else values


class Profile(ABC):
    """
    Interface shared by every profile the quadrature can act on.

    Values are split as offset + remainder, where the offset is -1, 0 or +1
    and the remainder is small in the tails, so second differences of far
    points cancel the offsets exactly.
    """

    @property
    @abstractmethod
    def s(self) -> float:
        """Fractional order the profile is paired with."""

    @property
    @abstractmethod
    def reach(self) -> float:
        """Half-width beyond which both tails have closed forms."""

    @property
    @abstractmethod
    def feature_scale(self) -> float:
        """Length scale of the transition region."""

    @property
    def feature_points(self) -> Tuple[float, ...]:
        """Abscissae where the profile changes character."""
        return (0.0,)

    @abstractmethod
    def value(self, x: ArrayLike) -> ArrayLike:
        """Profile value."""

    @abstractmethod
    def derivative(self, x: ArrayLike, order: int) -> ArrayLike:
        """Derivative of the given order (order 0 is the value)."""

    @abstractmethod
    def split(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Return (offset, remainder) with value = offset + remainder."""

    @abstractmethod
    def outer_power(self, x: float, T: float, order: int, rule_order: int) -> Tuple[float, float]:
        """
        integral_T^inf of (f(x+t) + f(x-t)) t^(-1-2s) dt for f the order-th
        derivative, offsets removed. Requires x + T and x - T in the tails.
        """

    @abstractmethod
    def inverse(self, r: float) -> float:
        """The unique x with value(x) = r."""

    @abstractmethod
    def well_gap(self, x: ArrayLike) -> ArrayLike:
        """Distance to the nearest well: 1 + f(x) for x < 0, 1 - f(x) for x >= 0."""

    def derivatives_at(self, x: float, count: int) -> np.ndarray:
        """f^(k)(x) for k = 0..count."""
        return np.array([float(self.derivative(x, k)) for k in range(count + 1)])


# ---------------------------------------------------------------------------
# Power-tail layer
# ---------------------------------------------------------------------------


def _step(t):
    return smooth_step_jet(t) if isinstance(t, TaylorJet) else smooth_step(t)


def _pow(a, p: float):
    return a.power(p) if isinstance(a, TaylorJet) else np.power(a, p)


def _level(y, kappa: float):
    """C-infinity clamp: y for y >= kappa, the constant LEVEL_FRACTION*kappa for small y."""
    floor = LEVEL_FRACTION * kappa
    return floor + (y - floor) * _step((y - floor) / ((1.0 - LEVEL_FRACTION) * kappa))


def _bridge_expression(x, p: LayerParams):
    """Bridge formula, evaluated on arrays or on Taylor jets."""
    t = (x + p.kappa) / (2.0 * p.kappa)
    sigma = _step(t)
    upper = 1.0 - p.c2 * _pow(_level(x, p.kappa), -p.beta)
    lower = -1.0 + p.c1 * _pow(_level(-x, p.kappa), -p.alpha)
    return lower + sigma * (upper - lower)


@dataclass(frozen=True)
class Layer(Profile):
    """
    Power-tail transition layer.

    phi(x) = -1 + C1 |x|^-alpha for x <= -kappa, 1 - C2 x^-beta for x >= kappa,
    and a C-infinity strictly increasing bridge in between.
    """

    params: LayerParams
    bridge: Chebyshev
    monotone_verified: bool
    min_slope: float

    # -- Profile interface ------------------------------------------------

    @property
    def s(self) -> float:
        return self.params.s

    @property
    def margin(self) -> float:
        return 0.5 * self.params.kappa

    @property
    def reach(self) -> float:
        return self.params.kappa + self.margin

    @property
    def feature_scale(self) -> float:
        return self.params.kappa

    @property
    def feature_points(self) -> Tuple[float, ...]:
        k = self.params.kappa
        return (-k, 0.0, k)

    @property
    def chebyshev_degree(self) -> int:
        return self.bridge.degree()

    def value(self, x: ArrayLike) -> ArrayLike:
        return self.derivative(x, 0)

    def derivative(self, x: ArrayLike, order: int) -> ArrayLike:
        if order < 0:
            raise DomainError(f"derivative order must be nonnegative, got {order}")
        scalar = np.ndim(x) == 0
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        if self.params.is_symmetric:
            # Evaluate on |x| so odd symmetry holds bit for bit.
            vals = self._raw_derivative(np.abs(arr), order)
            parity = 1.0 if order % 2 == 1 else -1.0
            vals = np.where(arr < 0.0, parity * vals, vals)
        else:
            vals = self._raw_derivative(arr, order)
        return _as_output(vals, scalar)

    def split(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        p = self.params
        arr = np.asarray(x, dtype=float)
        left = arr <= -p.kappa
        right = arr >= p.kappa
        offset = np.where(left, -1.0, np.where(right, 1.0, 0.0))
        rem = np.empty_like(arr)
        rem[left] = p.c1 * (-arr[left]) ** (-p.alpha)
        rem[right] = -p.c2 * arr[right] ** (-p.beta)
        middle = ~(left | right)
        if np.any(middle):
            rem[middle] = self.derivative(arr[middle], 0)
        return offset, rem

    def outer_power(self, x: float, T: float, order: int, rule_order: int) -> Tuple[float, float]:
        p = self.params
        s = p.s
        e_left = p.alpha + order
        e_right = p.beta + order
        a = p.c1 * rising_factorial(p.alpha, order)
        b = -p.c2 if order == 0 else p.c2 * (-1.0) ** (order + 1) * rising_factorial(p.beta, order)
        scale = T ** (-2.0 * s)

        left_val, left_err = weighted_unit_integral(
            lambda v: a * scale * (T - x * v) ** (-e_left), 2.0 * s - 1.0 + e_left, rule_order
        )
        right_val, right_err = weighted_unit_integral(
            lambda v: b * scale * (T + x * v) ** (-e_right), 2.0 * s - 1.0 + e_right, rule_order
        )
        return left_val + right_val, left_err + right_err

    def inverse(self, r: float) -> float:
        return phi_inverse(self, r)

    def well_gap(self, x: ArrayLike) -> ArrayLike:
        p = self.params
        scalar = np.ndim(x) == 0
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        out = np.empty_like(arr)
        left = arr <= -p.kappa
        right = arr >= p.kappa
        out[left] = p.c1 * (-arr[left]) ** (-p.alpha)
        out[right] = p.c2 * arr[right] ** (-p.beta)
        middle = ~(left | right)
        if np.any(middle):
            vals = np.asarray(self.derivative(arr[middle], 0))
            out[middle] = np.where(arr[middle] < 0.0, 1.0 + vals, 1.0 - vals)
        return _as_output(out, scalar)

    # -- internals ----------------------------------------------------------

    def _raw_derivative(self, x: np.ndarray, order: int) -> np.ndarray:
        p = self.params
        out = np.empty_like(x)
        left = x <= -p.kappa
        right = x >= p.kappa
        middle = ~(left | right)

        if order == 0:
            out[left] = -1.0 + p.c1 * (-x[left]) ** (-p.alpha)
            out[right] = 1.0 - p.c2 * x[right] ** (-p.beta)
            if np.any(middle):
                out[middle] = _bridge_expression(x[middle], p)
            return out

        out[left] = p.c1 * rising_factorial(p.alpha, order) * (-x[left]) ** (-p.alpha - order)
        out[right] = (
            p.c2 * (-1.0) ** (order + 1) * rising_factorial(p.beta, order) * x[right] ** (-p.beta - order)
        )
        if np.any(middle):
            jet = _bridge_expression(TaylorJet.variable(x[middle], order), p)
            out[middle] = jet.coeffs[order] * math.factorial(order)
        return out


def new_layer(params: LayerParams, chebyshev_degree: int = DEFAULT_CHEBYSHEV_DEGREE) -> Layer:
    """
    Construct and validate a power-tail layer.

    Args:
        params: Layer parameters
        chebyshev_degree: Degree of the Chebyshev series kept for the bridge

    Returns:
        Validated Layer

    Raises:
        DomainError: Parameters violate the layer invariants
        ConstructionError: The derivative is not positive on the check grid

    Example:
        >>> layer = new_layer(LayerParams(s=0.5, alpha=1, beta=1, kappa=2, c1=1, c2=1))
        >>> phi(layer, 2.0)
        0.5
    """
    is_valid, error = validate_layer_params(params)
    if not is_valid:
        raise DomainError(error)

    k = params.kappa
    margin = 0.5 * k
    bridge = Chebyshev.interpolate(
        lambda xs: _bridge_or_tail(params, xs), chebyshev_degree, domain=[-k - margin, k + margin]
    )
    draft = Layer(params=params, bridge=bridge, monotone_verified=False, min_slope=float("nan"))

    grid = np.linspace(-MONOTONE_GRID_SPAN * k, MONOTONE_GRID_SPAN * k, MONOTONE_GRID_POINTS)
    slopes = np.asarray(draft.derivative(grid, 1))
    bad = np.flatnonzero(~(slopes > 0.0))
    if bad.size:
        x_bad = float(grid[bad[0]])
        raise ConstructionError(
            f"layer is not strictly increasing: phi'({x_bad:.6g}) = {slopes[bad[0]]:.3e} "
            f"(need c1*kappa^-alpha + c2*kappa^-beta comfortably below 2)",
            x=x_bad,
        )
    values = np.asarray(draft.value(grid))
    if np.any(np.abs(values) >= 1.0):
        x_bad = float(grid[np.argmax(np.abs(values))])
        raise ConstructionError(f"layer leaves (-1, 1) at x = {x_bad:.6g}", x=x_bad)

    min_slope = float(slopes.min())
    logger.debug("layer %s built: min phi' on check grid %.3e", params.to_dict(), min_slope)
    return Layer(params=params, bridge=bridge, monotone_verified=True, min_slope=min_slope)


def _bridge_or_tail(params: LayerParams, xs: np.ndarray) -> np.ndarray:
    layer = Layer(params=params, bridge=Chebyshev([0.0]), monotone_verified=False, min_slope=float("nan"))
    return np.asarray(layer.derivative(xs, 0))


def phi(layer: Profile, x: ArrayLike) -> ArrayLike:
    """
    Evaluate the profile.

    Example:
        >>> layer = new_layer(LayerParams(kappa=2.0))
        >>> phi(layer, -4.0)
        -0.75
    """
    return layer.value(x)


def phi_deriv(layer: Profile, x: ArrayLike, order: int) -> ArrayLike:
    """
    Derivative of the profile of order 1..6.

    Closed-form power derivatives in the tails, exact Taylor arithmetic on
    the bridge.

    Example:
        >>> layer = new_layer(LayerParams(kappa=2.0))
        >>> phi_deriv(layer, 2.0, 1)
        0.25
    """
    if not 1 <= order <= 6:
        raise DomainError(f"phi_deriv supports orders 1..6, got {order}")
    return layer.derivative(x, order)


def phi_inverse(layer: Layer, r: float) -> float:
    """
    Invert the layer.

    Tails are inverted in closed form; on the bridge a Chebyshev root seeds a
    bracketed Newton iteration on the exact profile.

    Raises:
        DomainError: r is not strictly inside (-1, 1)
    """
    if not (math.isfinite(r) and -1.0 < r < 1.0):
        raise DomainError(f"phi_inverse needs r in the open interval (-1, 1), got {r!r}")
    p = layer.params
    k = p.kappa
    r_low = -1.0 + p.c1 * k ** (-p.alpha)
    r_high = 1.0 - p.c2 * k ** (-p.beta)
    if r <= r_low:
        return -((p.c1 / (1.0 + r)) ** (1.0 / p.alpha))
    if r >= r_high:
        return (p.c2 / (1.0 - r)) ** (1.0 / p.beta)
    if p.is_symmetric and r < 0.0:
        return -phi_inverse(layer, -r)

    lo, hi = -k, k
    x = _chebyshev_seed(layer, r, lo, hi)
    for _ in range(100):
        f = float(layer.value(x)) - r
        if f == 0.0:
            return x
        if f > 0.0:
            hi = x
        else:
            lo = x
        slope = float(layer.derivative(x, 1))
        step = x - f / slope if slope > 0.0 else 0.5 * (lo + hi)
        x = step if lo < step < hi else 0.5 * (lo + hi)
        if hi - lo <= 4.0 * np.finfo(float).eps * max(1.0, abs(x)):
            break
        if abs(f) <= 1e-15:
            break
    return x


def _chebyshev_seed(layer: Layer, r: float, lo: float, hi: float) -> float:
    roots = (layer.bridge - r).roots()
    real = roots[np.abs(roots.imag) < 1e-8].real
    inside = real[(real > lo) & (real < hi)]
    if inside.size == 0:
        return 0.5 * (lo + hi)
    return float(inside[np.argmin(np.abs(layer.bridge(inside) - r))])


def bridge_diagnostics(layer: Layer, points: int = 1001) -> dict:
    """
    Smoothness diagnostics of the bridge.

    Returns:
        Dictionary with the Chebyshev degree, the maximum deviation of the
        Chebyshev series from the exact bridge, and min phi' on the check grid
    """
    k = layer.params.kappa
    xs = np.linspace(-k, k, points)
    deviation = float(np.max(np.abs(layer.bridge(xs) - np.asarray(layer.value(xs)))))
    return {
        "chebyshev_degree": layer.chebyshev_degree,
        "chebyshev_max_deviation": deviation,
        "min_slope": layer.min_slope,
        "monotone_verified": layer.monotone_verified,
    }


# ---------------------------------------------------------------------------
# Arctan profile
# ---------------------------------------------------------------------------

TWO_OVER_PI = 2.0 / math.pi
HALF_PI = 0.5 * math.pi


class ArctanLayer(Profile):
    """
    The profile u(x) = (2/pi) arctan(x), paired with s = 1/2.

    Its fractional Laplacian, inverse and potential are known in closed form.
    """

    @property
    def s(self) -> float:
        return 0.5

    @property
    def reach(self) -> float:
        return 1.0

    @property
    def feature_scale(self) -> float:
        return 1.0

    def value(self, x: ArrayLike) -> ArrayLike:
        vals = np.arctan(np.asarray(x, dtype=float)) / HALF_PI
        return float(vals) if np.ndim(x) == 0 else vals

    def derivative(self, x: ArrayLike, order: int) -> ArrayLike:
        if order < 0:
            raise DomainError(f"derivative order must be nonnegative, got {order}")
        if order == 0:
            return self.value(x)
        scalar = np.ndim(x) == 0
        arr = np.atleast_1d(np.asarray(x, dtype=float))
        theta = np.arctan2(1.0, arr)
        vals = (
            TWO_OVER_PI
            * (-1.0) ** (order - 1)
            * math.factorial(order - 1)
            * np.sin(order * theta)
            / (1.0 + arr * arr) ** (0.5 * order)
        )
        return _as_output(vals, scalar)

    def split(self, x: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        arr = np.asarray(x, dtype=float)
        far = np.abs(arr) >= 1.0
        offset = np.where(far, np.sign(arr), 0.0)
        with np.errstate(divide="ignore"):
            rem = np.where(far, -TWO_OVER_PI * np.arctan(1.0 / np.where(far, arr, 1.0)), TWO_OVER_PI * np.arctan(arr))
        return offset, rem

    def outer_power(self, x: float, T: float, order: int, rule_order: int) -> Tuple[float, float]:
        scale = T ** (-2.0 * self.s)

        if order == 0:
            def g(v):
                return -TWO_OVER_PI * scale * (np.arctan(v / (x * v + T)) + np.arctan(v / (x * v - T)))
        else:
            def g(v):
                return scale * (
                    np.asarray(self.derivative(x + T / v, order)) + np.asarray(self.derivative(x - T / v, order))
                )

        return weighted_unit_integral(g, 2.0 * self.s - 1.0, rule_order)

    def inverse(self, r: float) -> float:
        if not (math.isfinite(r) and -1.0 < r < 1.0):
            raise DomainError(f"inverse needs r in the open interval (-1, 1), got {r!r}")
        return math.tan(0.5 * math.pi * r)

    def well_gap(self, x: ArrayLike) -> ArrayLike:
        arr = np.abs(np.asarray(x, dtype=float))
        with np.errstate(divide="ignore"):
            out = TWO_OVER_PI * np.arctan(1.0 / arr)
        return float(out) if np.ndim(x) == 0 else out

    def exact_fraclap(self, x: ArrayLike, normalized: bool = False) -> ArrayLike:
        """
        Closed-form L_{1/2} u = -sin(pi u) = -2x / (1 + x^2).

        With normalized=True the value carries the 1/pi constant of the
        normalized operator.
        """
        arr = np.asarray(x, dtype=float)
        vals = -2.0 * arr / (1.0 + arr * arr)
        if normalized:
            vals = vals / math.pi
        return float(vals) if np.ndim(x) == 0 else vals

    def potential(self, rho: ArrayLike) -> ArrayLike:
        """G(rho) = (1 + cos(pi rho)) / pi, so that G' = L_{1/2}u composed with u^-1."""
        vals = (1.0 + np.cos(math.pi * np.asarray(rho, dtype=float))) / math.pi
        return float(vals) if np.ndim(rho) == 0 else vals


def arctan_layer() -> ArctanLayer:
    """
    The exact arctan profile.

    Example:
        >>> u = arctan_layer()
        >>> u.value(1.0)
        0.5
    """
    return ArctanLayer()


def arctan_tail_constant(start: float = 10.0, samples: int = 8, tolerance: float = 2e-2) -> LimitEstimate:
    """x (1 - u(x)) along x = start * 2^k, extrapolated; the limit is 2/pi."""
    u = arctan_layer()
    xs = [start * 2.0 ** k for k in range(samples)]
    return extrapolate_limit([(x, x * float(u.well_gap(x))) for x in xs], tolerance=tolerance)
