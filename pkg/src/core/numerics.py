"""
Numerical primitives shared by every other core module.

Special functions, the C-infinity smooth step, Gauss rules, adaptive panel
quadrature, graded meshes for endpoint singularities, Aitken extrapolation,
weighted partition enumeration and truncated Taylor arithmetic.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, List, Optional, Sequence, Set, Tuple, Union

import numpy as np
from scipy.special import expit, roots_jacobi

from .errors import ConvergenceError, DomainError

logger = logging.getLogger(__name__)

ArrayLike = Union[float, np.ndarray]

# Lanczos coefficients, g = 7, n = 9
_LANCZOS_G = 7.0
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_SQRT_TWO_PI = math.sqrt(2.0 * math.pi)
_GAMMA_OVERFLOW = 171.6
# Panel error below this multiple of the summed |panel| values is rounding noise
ROUNDOFF_FLOOR = 64.0 * float(np.finfo(float).eps)


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and panel settings for every singular-integral evaluation."""

    tol_abs: float = 1e-11
    tol_rel: float = 1e-10
    panel_order: int = 20
    max_panels: int = 4096
    t_min_policy: str = "taylor-balance"
    t_min_fixed: float = 1e-6
    t_min_floor: float = 1e-8
    t_min_cap: float = 1e-2
    outer_margin: float = 2.0
    outer_order: int = 40
    graded_levels: int = 40
    graded_order: int = 16

    def inner_cutoff(self, second_derivative: float, s: float) -> float:
        """Inner cutoff below which the second difference is replaced by its Taylor term."""
        if self.t_min_policy == "fixed":
            return self.t_min_fixed
        power = 2.0 - 2.0 * s
        raw = (self.tol_abs * power / max(1.0, abs(second_derivative))) ** (1.0 / power)
        return min(max(raw, self.t_min_floor), self.t_min_cap)

    def with_tolerance(self, tol_abs: float, tol_rel: Optional[float] = None) -> "QuadratureConfig":
        """Copy with different tolerances."""
        return QuadratureConfig(
            **{**self.to_dict(), "tol_abs": tol_abs, "tol_rel": self.tol_rel if tol_rel is None else tol_rel}
        )

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "tol_abs": self.tol_abs,
            "tol_rel": self.tol_rel,
            "panel_order": self.panel_order,
            "max_panels": self.max_panels,
            "t_min_policy": self.t_min_policy,
            "t_min_fixed": self.t_min_fixed,
            "t_min_floor": self.t_min_floor,
            "t_min_cap": self.t_min_cap,
            "outer_margin": self.outer_margin,
            "outer_order": self.outer_order,
            "graded_levels": self.graded_levels,
            "graded_order": self.graded_order,
        }


@dataclass(frozen=True)
class GaussRule:
    """Gauss–Legendre rule on [-1, 1]."""

    order: int
    nodes: np.ndarray
    weights: np.ndarray


@dataclass
class LimitEstimate:
    """A sampled sequence and its extrapolated limit."""

    samples: List[Tuple[float, float]]
    extrapolated: float
    error_estimate: float
    converged: bool
    extrapolants: List[float] = field(default_factory=list)

    def to_dict(self) -> dict:
        """Convert to dictionary representation."""
        return {
            "samples": [[x, v] for x, v in self.samples],
            "extrapolated": self.extrapolated,
            "error_estimate": self.error_estimate,
            "converged": self.converged,
            "extrapolants": list(self.extrapolants),
        }


# ---------------------------------------------------------------------------
# Special functions
# ---------------------------------------------------------------------------


def gamma(x: float) -> float:
    """
    Euler Gamma function on the positive axis (Lanczos, g = 7).

    Args:
        x: Positive finite argument

    Returns:
        Gamma(x) with relative error below 1e-12

    Example:
        >>> round(gamma(5.0), 10)
        24.0
    """
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"gamma is only defined here for finite x > 0, got {x!r}")
    if x > _GAMMA_OVERFLOW:
        raise DomainError(f"gamma({x}) overflows double precision")
    if x < 0.5:
        # Recurrence keeps the Lanczos sum on [0.5, inf).
        return gamma(x + 1.0) / x

    z = x - 1.0
    acc = _LANCZOS_COEFFS[0]
    for k in range(1, len(_LANCZOS_COEFFS)):
        acc += _LANCZOS_COEFFS[k] / (z + k)
    t = z + _LANCZOS_G + 0.5
    return _SQRT_TWO_PI * math.exp((z + 0.5) * math.log(t) - t) * acc


def reciprocal_gamma(x: float) -> float:
    """1/Gamma(x) for x > -1, with 1/Gamma(0) = 0."""
    if x == 0.0:
        return 0.0
    if -1.0 < x < 0.0:
        return x / gamma(x + 1.0)
    return 1.0 / gamma(x)


def gamma_ratio(i: int, s: float) -> float:
    """
    Gamma(i + 2s) / Gamma(1 + 2s) as the product (1+2s)(2+2s)...(i-1+2s).

    Example:
        >>> gamma_ratio(2, 0.5)
        2.0
    """
    if i < 0:
        raise DomainError(f"gamma_ratio needs i >= 0, got {i}")
    if not 0.0 < s < 1.0:
        raise DomainError(f"s must lie in (0, 1), got {s}")
    if i == 0:
        return 1.0 / (2.0 * s)
    result = 1.0
    for k in range(1, i):
        result *= k + 2.0 * s
    return result


def rising_factorial(a: float, n: int) -> float:
    """Pochhammer symbol a(a+1)...(a+n-1)."""
    result = 1.0
    for k in range(n):
        result *= a + k
    return result


# ---------------------------------------------------------------------------
# Smooth step
# ---------------------------------------------------------------------------


def smooth_step(t: ArrayLike) -> ArrayLike:
    """
    C-infinity step: 0 for t <= 0, 1 for t >= 1, flat at both ends.

    sigma(t) = e^{-1/t} / (e^{-1/t} + e^{-1/(1-t)}) on (0, 1).

    Example:
        >>> smooth_step(0.5)
        0.5
    """
    arr = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.where(arr >= 1.0, 1.0, 0.0)
    inside = (arr > 0.0) & (arr < 1.0)
    if np.any(inside):
        ti = arr[inside]
        z = 1.0 / ti - 1.0 / (1.0 - ti)
        out[inside] = expit(-z)
    if np.ndim(t) == 0:
        return float(out[0])
    return out


# ---------------------------------------------------------------------------
# Gauss rules
# ---------------------------------------------------------------------------


@lru_cache(maxsize=32)
def gauss_rule(order: int) -> GaussRule:
    """Gauss–Legendre nodes and weights on [-1, 1]."""
    if order < 1:
        raise DomainError(f"Gauss rule order must be positive, got {order}")
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return GaussRule(order=order, nodes=nodes, weights=weights)


@lru_cache(maxsize=256)
def _jacobi_unit_rule(order: int, exponent: float) -> Tuple[np.ndarray, np.ndarray]:
    x, w = roots_jacobi(order, 0.0, exponent)
    nodes = 0.5 * (1.0 + x)
    weights = w * 2.0 ** (-exponent - 1.0)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def gauss_jacobi_unit(order: int, exponent: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Nodes/weights for integral_0^1 v^exponent f(v) dv.

    Args:
        order: Number of nodes
        exponent: Weight exponent, must exceed -1

    Returns:
        Tuple of (nodes in (0,1), weights)
    """
    if exponent <= -1.0:
        raise DomainError(f"Gauss–Jacobi weight v^{exponent} is not integrable at 0")
    return _jacobi_unit_rule(order, round(float(exponent), 14))


def weighted_unit_integral(f: Callable[[np.ndarray], np.ndarray], exponent: float, order: int) -> Tuple[float, float]:
    """
    integral_0^1 v^exponent f(v) dv for smooth f, with an order/2 error estimate.

    Returns:
        Tuple of (value, error_estimate)
    """
    nodes, weights = gauss_jacobi_unit(order, exponent)
    value = float(np.dot(weights, f(nodes)))
    half_nodes, half_weights = gauss_jacobi_unit(max(order // 2, 2), exponent)
    coarse = float(np.dot(half_weights, f(half_nodes)))
    return value, abs(value - coarse)


# ---------------------------------------------------------------------------
# Panel quadrature
# ---------------------------------------------------------------------------


def _panel_sums(f, lo: np.ndarray, hi: np.ndarray, rule: GaussRule) -> np.ndarray:
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    pts = mid[:, None] + half[:, None] * rule.nodes[None, :]
    vals = np.asarray(f(pts.ravel()), dtype=float).reshape(pts.shape)
    return half * (vals @ rule.weights)


def adaptive_panel_integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    cfg: QuadratureConfig,
    breakpoints: Optional[Iterable[float]] = None,
) -> Tuple[float, float]:
    """
    Integrate f over [a, b] by Gauss panels with bisection refinement.

    f receives a 1-D array of abscissae and must return an array of the same
    length. Each panel carries the difference between its one-panel and
    two-half-panel sums as error; panels with the largest errors are split
    until the total error meets max(tol_abs, tol_rel * |value|). The target
    never drops below ROUNDOFF_FLOOR * sum |panel|, the level at which panel
    differences are rounding noise.

    Args:
        f: Vectorized integrand
        a: Lower limit
        b: Upper limit (a < b)
        cfg: Quadrature configuration
        breakpoints: Optional initial panel edges inside (a, b)

    Returns:
        Tuple of (value, error_estimate)

    Raises:
        ConvergenceError: Panel budget exhausted; carries the best estimate

    Example:
        >>> value, _ = adaptive_panel_integrate(np.sin, 0.0, np.pi, QuadratureConfig())
        >>> round(value, 12)
        2.0
    """
    if not a < b:
        raise DomainError(f"adaptive_panel_integrate needs a < b, got [{a}, {b}]")
    rule = gauss_rule(cfg.panel_order)

    edges = [a, b]
    if breakpoints is not None:
        edges.extend(p for p in breakpoints if a < p < b)
    edges = np.unique(np.asarray(edges, dtype=float))
    lo = edges[:-1]
    hi = edges[1:]

    whole = _panel_sums(f, lo, hi, rule)
    mid = 0.5 * (lo + hi)
    left = _panel_sums(f, lo, mid, rule)
    right = _panel_sums(f, mid, hi, rule)

    rounds = 0
    while True:
        values = left + right
        errors = np.abs(whole - values)
        total = float(values.sum())
        total_err = float(errors.sum())
        magnitude = float(np.abs(left).sum() + np.abs(right).sum())
        tol = max(cfg.tol_abs, cfg.tol_rel * abs(total), ROUNDOFF_FLOOR * magnitude)
        if total_err <= tol:
            logger.debug("panel quadrature on [%g, %g]: %d panels, %d rounds", a, b, len(lo), rounds)
            return total, total_err

        room = cfg.max_panels - len(lo)
        if room <= 0:
            raise ConvergenceError(
                f"panel budget of {cfg.max_panels} exhausted on [{a}, {b}] "
                f"(error {total_err:.3e} > tolerance {tol:.3e})",
                estimate=total,
                error_estimate=total_err,
            )

        candidates = np.flatnonzero(errors > tol / len(lo))
        if candidates.size == 0:
            candidates = np.array([int(np.argmax(errors))])
        if candidates.size > room:
            candidates = candidates[np.argsort(errors[candidates])[::-1][:room]]

        keep = np.ones(len(lo), dtype=bool)
        keep[candidates] = False
        split_lo = lo[candidates]
        split_hi = hi[candidates]
        split_mid = mid[candidates]

        new_lo = np.concatenate([split_lo, split_mid])
        new_hi = np.concatenate([split_mid, split_hi])
        new_whole = np.concatenate([left[candidates], right[candidates]])
        new_mid = 0.5 * (new_lo + new_hi)
        new_left = _panel_sums(f, new_lo, new_mid, rule)
        new_right = _panel_sums(f, new_mid, new_hi, rule)

        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        mid = np.concatenate([mid[keep], new_mid])
        whole = np.concatenate([whole[keep], new_whole])
        left = np.concatenate([left[keep], new_left])
        right = np.concatenate([right[keep], new_right])
        rounds += 1


def graded_unit_integrate(
    g: Callable[[np.ndarray], np.ndarray],
    exponent: float,
    levels: int,
    order: int,
) -> float:
    """
    integral_0^1 v^exponent g(v) dv on a dyadic mesh graded toward v = 0.

    Panels [2^-(k+1), 2^-k] use Gauss–Legendre on the full integrand. The
    innermost panel [0, 2^-levels] uses Gauss–Jacobi with the weight
    v^exponent when the weight is integrable and is dropped otherwise (the
    integrand is then assumed to vanish at the origin).
    """
    rule = gauss_rule(order)
    k = np.arange(levels, dtype=float)
    hi = 2.0 ** (-k)
    lo = 0.5 * hi
    half = 0.5 * (hi - lo)
    pts = (0.5 * (hi + lo))[:, None] + half[:, None] * rule.nodes[None, :]
    flat = pts.ravel()
    vals = np.asarray(g(flat), dtype=float) * flat ** exponent
    total = float(np.sum(half * (vals.reshape(pts.shape) @ rule.weights)))

    if exponent > -1.0:
        h = 2.0 ** (-levels)
        nodes, weights = gauss_jacobi_unit(order, exponent)
        total += h ** (exponent + 1.0) * float(np.dot(weights, g(h * nodes)))
    return total


# ---------------------------------------------------------------------------
# Limit extrapolation
# ---------------------------------------------------------------------------


def aitken_sequence(values: Sequence[float]) -> List[float]:
    """Aitken delta-squared transform of a sequence (length n - 2)."""
    v = [float(x) for x in values]
    out = []
    for k in range(len(v) - 2):
        d0 = v[k + 1] - v[k]
        d1 = v[k + 2] - v[k + 1]
        denom = d1 - d0
        if denom == 0.0 or not math.isfinite(denom):
            out.append(v[k + 2])
        else:
            out.append(v[k + 2] - d1 * d1 / denom)
    return out


def extrapolate_limit(
    samples: Sequence[Tuple[float, float]],
    tolerance: float = 2e-2,
) -> LimitEstimate:
    """
    Extrapolate the limit of v_k sampled at geometric abscissae x_k.

    Args:
        samples: (x_k, v_k) pairs with x_k a geometric progression
        tolerance: Convergence threshold on the last two extrapolants,
            relative to max(|limit|, 1)

    Returns:
        LimitEstimate; erratic (non-monotone) sequences give converged=False
        and the last raw sample as the estimate

    Example:
        >>> est = extrapolate_limit([(10.0 * 2**k, 3.0) for k in range(5)])
        >>> est.extrapolated, est.error_estimate
        (3.0, 0.0)
    """
    pts = [(float(x), float(v)) for x, v in samples]
    if len(pts) < 4:
        raise DomainError(f"extrapolate_limit needs at least 4 samples, got {len(pts)}")
    xs = np.array([p[0] for p in pts])
    vs = np.array([p[1] for p in pts])
    if np.any(np.diff(xs) <= 0.0):
        raise DomainError("sample abscissae must be strictly increasing")
    ratios = xs[1:] / xs[:-1]
    if not np.allclose(ratios, ratios[0], rtol=1e-9):
        raise DomainError("sample abscissae must form a geometric progression")
    if not np.all(np.isfinite(vs)):
        return LimitEstimate(pts, float(vs[-1]), math.inf, False, [])

    diffs = np.diff(vs)
    scale = max(float(np.max(np.abs(vs))), 1e-300)
    noise = 1e-13 * scale
    if float(np.max(np.abs(diffs))) <= noise:
        return LimitEstimate(pts, float(vs[-1]), 0.0, True, [float(vs[-1])])

    significant = diffs[np.abs(diffs) > noise]
    if not (np.all(significant > 0.0) or np.all(significant < 0.0)):
        logger.debug("erratic sequence, no extrapolation: %s", vs)
        return LimitEstimate(pts, float(vs[-1]), float(abs(diffs[-1])), False, [])

    extrapolants = aitken_sequence(vs)
    limit = extrapolants[-1]
    err = abs(extrapolants[-1] - extrapolants[-2])
    converged = err <= tolerance * max(abs(limit), 1.0)
    return LimitEstimate(pts, float(limit), float(err), bool(converged), [float(e) for e in extrapolants])


# ---------------------------------------------------------------------------
# Weighted partitions
# ---------------------------------------------------------------------------


def partitions_weighted(i: int) -> Set[Tuple[int, ...]]:
    """
    All i-tuples (m_1, ..., m_i) of nonnegative integers with sum j*m_j = i.

    Example:
        >>> sorted(partitions_weighted(3))
        [(0, 0, 1), (1, 1, 0), (3, 0, 0)]
    """
    if not 1 <= i <= 12:
        raise DomainError(f"partitions_weighted supports 1 <= i <= 12, got {i}")
    return set(_multiplicities(i, i))


@lru_cache(maxsize=None)
def _multiplicities(n: int, largest: int) -> Tuple[Tuple[int, ...], ...]:
    # Partitions of n with parts <= largest, encoded as multiplicity tuples of length `largest`.
    if n == 0:
        return ((0,) * largest,)
    if largest == 0:
        return ()
    out = []
    for count in range(n // largest + 1):
        for rest in _multiplicities(n - count * largest, largest - 1):
            out.append(rest + (count,))
    return tuple(out)


# ---------------------------------------------------------------------------
# Truncated Taylor arithmetic
# ---------------------------------------------------------------------------


class TaylorJet:
    """
    Truncated Taylor expansion carried through arithmetic.

    coeffs[k] holds f^(k)(x) / k! for k = 0..order, vectorized over the
    trailing axis, so derivatives of closed-form expressions come out exact
    up to rounding.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: np.ndarray):
        self.coeffs = np.asarray(coeffs, dtype=float)

    @classmethod
    def variable(cls, x: ArrayLike, order: int) -> "TaylorJet":
        x = np.atleast_1d(np.asarray(x, dtype=float))
        c = np.zeros((order + 1,) + x.shape)
        c[0] = x
        if order >= 1:
            c[1] = 1.0
        return cls(c)

    @property
    def order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def value(self) -> np.ndarray:
        return self.coeffs[0]

    def derivatives(self) -> np.ndarray:
        """Array of f^(k)(x), k = 0..order."""
        factorials = np.array([math.factorial(k) for k in range(self.order + 1)], dtype=float)
        return self.coeffs * factorials.reshape((-1,) + (1,) * (self.coeffs.ndim - 1))

    def _lift(self, other) -> "TaylorJet":
        if isinstance(other, TaylorJet):
            return other
        c = np.zeros_like(self.coeffs)
        c[0] = other
        return TaylorJet(c)

    def __add__(self, other):
        return TaylorJet(self.coeffs + self._lift(other).coeffs)

    __radd__ = __add__

    def __neg__(self):
        return TaylorJet(-self.coeffs)

    def __sub__(self, other):
        return TaylorJet(self.coeffs - self._lift(other).coeffs)

    def __rsub__(self, other):
        return TaylorJet(self._lift(other).coeffs - self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, TaylorJet):
            return TaylorJet(self.coeffs * other)
        a, b = self.coeffs, other.coeffs
        c = np.zeros_like(a)
        for k in range(a.shape[0]):
            c[k] = np.sum(a[: k + 1] * b[k::-1], axis=0)
        return TaylorJet(c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if not isinstance(other, TaylorJet):
            return TaylorJet(self.coeffs / other)
        a, b = self.coeffs, other.coeffs
        q = np.zeros_like(a)
        for k in range(a.shape[0]):
            acc = a[k].copy()
            for j in range(1, k + 1):
                acc -= b[j] * q[k - j]
            q[k] = acc / b[0]
        return TaylorJet(q)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def exp(self) -> "TaylorJet":
        a = self.coeffs
        e = np.zeros_like(a)
        e[0] = np.exp(a[0])
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc += j * a[j] * e[k - j]
            e[k] = acc / k
        return TaylorJet(e)

    def power(self, p: float) -> "TaylorJet":
        """self ** p for a positive leading coefficient."""
        a = self.coeffs
        y = np.zeros_like(a)
        y[0] = a[0] ** p
        for k in range(1, a.shape[0]):
            acc = np.zeros_like(a[0])
            for j in range(1, k + 1):
                acc += ((p + 1.0) * j - k) * a[j] * y[k - j]
            y[k] = acc / (k * a[0])
        return TaylorJet(y)

    def where(self, mask: np.ndarray, other: "TaylorJet") -> "TaylorJet":
        """Entrywise select self where mask holds, other elsewhere."""
        return TaylorJet(np.where(mask, self.coeffs, other.coeffs))


def smooth_step_jet(t: TaylorJet) -> TaylorJet:
    """smooth_step carried through Taylor arithmetic."""
    t0 = t.value
    zeros = np.zeros_like(t.coeffs)
    ones = zeros.copy()
    ones[0] = 1.0
    result = TaylorJet(np.where(t0 >= 1.0, ones, zeros))

    inside = (t0 > 0.0) & (t0 < 1.0)
    if not np.any(inside):
        return result
    # Evaluate on a safe copy so masked-out entries never produce inf/nan.
    safe = TaylorJet(np.where(inside, t.coeffs, _constant_coeffs(t.coeffs, 0.5)))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        z = 1.0 / safe - 1.0 / (1.0 - safe)
        z0 = z.value
        positive = z0 >= 0.0
        z_pos = TaylorJet(np.where(positive, z.coeffs, zeros))
        z_neg = TaylorJet(np.where(positive, zeros, z.coeffs))
        e_pos = (-z_pos).exp()
        sig_pos = e_pos / (1.0 + e_pos)
        sig_neg = 1.0 / (1.0 + z_neg.exp())
    sig = sig_pos.where(positive, sig_neg)
    # Beyond |z| = 700 the step is flat to double precision.
    sig = TaylorJet(np.where(z0 > 700.0, zeros, sig.coeffs))
    sig = TaylorJet(np.where(z0 < -700.0, ones, sig.coeffs))
    return TaylorJet(np.where(inside, sig.coeffs, result.coeffs))


def _constant_coeffs(like: np.ndarray, value: float) -> np.ndarray:
    c = np.zeros_like(like)
    c[0] = value
    return c
