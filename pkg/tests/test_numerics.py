"""Tests for the numerical primitives."""

import math

import numpy as np
import pytest
from scipy import special
from scipy.integrate import quad

from src.core.errors import ConvergenceError, DomainError
from src.core.numerics import (
    ROUNDOFF_FLOOR,
    QuadratureConfig,
    TaylorJet,
    adaptive_panel_integrate,
    aitken_sequence,
    extrapolate_limit,
    gamma,
    gamma_ratio,
    gauss_jacobi_unit,
    gauss_rule,
    graded_unit_integrate,
    partitions_weighted,
    reciprocal_gamma,
    smooth_step,
    smooth_step_jet,
    weighted_unit_integral,
)


class TestGamma:
    """Test the Lanczos Gamma function."""

    def test_integer_values(self):
        """Test factorials."""
        for n in range(1, 12):
            assert gamma(float(n)) == pytest.approx(math.factorial(n - 1), rel=1e-12)

    def test_half(self):
        """Test Gamma(1/2) = sqrt(pi)."""
        assert gamma(0.5) == pytest.approx(math.sqrt(math.pi), rel=1e-13)

    def test_against_scipy(self):
        """Test a spread of arguments against scipy."""
        for x in (0.01, 0.25, 0.7, 1.3, 2.5, 7.25, 33.3, 120.0):
            assert gamma(x) == pytest.approx(special.gamma(x), rel=1e-12)

    def test_rejects_nonpositive(self):
        """Test domain errors at and below zero."""
        for x in (0.0, -1.0, -0.5, float("nan")):
            with pytest.raises(DomainError):
                gamma(x)

    def test_rejects_overflow(self):
        """Test overflow guard."""
        with pytest.raises(DomainError):
            gamma(200.0)

    def test_reciprocal_at_pole(self):
        """Test 1/Gamma(0) = 0."""
        assert reciprocal_gamma(0.0) == 0.0

    def test_reciprocal_negative(self):
        """Test 1/Gamma(-1/2) = -1/(2 sqrt(pi))."""
        assert reciprocal_gamma(-0.5) == pytest.approx(-1.0 / (2.0 * math.sqrt(math.pi)), rel=1e-13)


class TestGammaRatio:
    """Test Gamma(i+2s)/Gamma(1+2s)."""

    def test_against_gamma(self):
        """Test the product form against the Gamma quotient."""
        for s in (0.2, 0.4, 0.5, 0.9):
            for i in (1, 2, 3, 4):
                expected = gamma(i + 2 * s) / gamma(1 + 2 * s)
                assert gamma_ratio(i, s) == pytest.approx(expected, rel=1e-12)

    def test_half_values(self):
        """Test s = 1/2 values."""
        assert gamma_ratio(1, 0.5) == 1.0
        assert gamma_ratio(2, 0.5) == 2.0
        assert gamma_ratio(3, 0.5) == 6.0

    def test_rejects_bad_s(self):
        """Test domain errors."""
        with pytest.raises(DomainError):
            gamma_ratio(1, 1.0)
        with pytest.raises(DomainError):
            gamma_ratio(-1, 0.5)


class TestSmoothStep:
    """Test the C-infinity step."""

    def test_endpoints(self):
        """Test flat ends."""
        assert smooth_step(0.0) == 0.0
        assert smooth_step(-3.0) == 0.0
        assert smooth_step(1.0) == 1.0
        assert smooth_step(4.0) == 1.0

    def test_midpoint(self):
        """Test sigma(1/2) = 1/2."""
        assert smooth_step(0.5) == pytest.approx(0.5, abs=1e-15)

    def test_symmetry(self):
        """Test sigma(t) + sigma(1-t) = 1."""
        t = np.linspace(0.01, 0.99, 99)
        assert np.allclose(smooth_step(t) + smooth_step(1.0 - t), 1.0, atol=1e-14)

    def test_monotone(self):
        """Test strict increase inside (0, 1)."""
        t = np.linspace(0.05, 0.95, 200)
        assert np.all(np.diff(smooth_step(t)) > 0.0)

    def test_jet_matches_values(self):
        """Test the Taylor jet against plain evaluation and a finite difference."""
        t = np.array([0.1, 0.3, 0.5, 0.8])
        jet = smooth_step_jet(TaylorJet.variable(t, 2))
        assert np.allclose(jet.value, smooth_step(t), atol=1e-15)
        h = 1e-5
        fd = (smooth_step(t + h) - smooth_step(t - h)) / (2 * h)
        assert np.allclose(jet.derivatives()[1], fd, atol=1e-7)


class TestGaussRules:
    """Test Gauss rules."""

    def test_legendre_exactness(self):
        """Test exactness for polynomials of degree 2n-1."""
        rule = gauss_rule(10)
        assert float(np.dot(rule.weights, rule.nodes ** 18)) == pytest.approx(2.0 / 19.0, rel=1e-13)

    def test_jacobi_weight(self):
        """Test integral_0^1 v^p dv = 1/(p+1)."""
        for p in (-0.5, 0.0, 0.3, 1.7):
            _, weights = gauss_jacobi_unit(20, p)
            assert float(weights.sum()) == pytest.approx(1.0 / (p + 1.0), rel=1e-12)

    def test_jacobi_rejects_nonintegrable(self):
        """Test exponent <= -1 is rejected."""
        with pytest.raises(DomainError):
            gauss_jacobi_unit(10, -1.0)

    def test_weighted_unit_integral(self):
        """Test integral_0^1 v^0.3 e^v dv against scipy."""
        value, err = weighted_unit_integral(np.exp, 0.3, 20)
        expected, _ = quad(lambda v: v ** 0.3 * math.exp(v), 0.0, 1.0, epsabs=1e-14, epsrel=1e-14)
        assert value == pytest.approx(expected, rel=1e-12)
        assert err < 1e-10


class TestAdaptivePanelIntegrate:
    """Test adaptive panel quadrature."""

    def test_sine(self):
        """Test integral of sin over [0, pi]."""
        value, err = adaptive_panel_integrate(np.sin, 0.0, math.pi, QuadratureConfig())
        assert value == pytest.approx(2.0, abs=1e-12)
        assert err <= 1e-10

    def test_peaked_integrand(self):
        """Test a narrow Lorentzian with breakpoints at the peak."""
        eps = 1e-3
        value, _ = adaptive_panel_integrate(
            lambda x: eps / (x * x + eps * eps), -1.0, 1.0, QuadratureConfig(), breakpoints=[0.0]
        )
        assert value == pytest.approx(2.0 * math.atan(1.0 / eps), rel=1e-9)

    def test_budget_exhausted(self):
        """Test ConvergenceError carries the best estimate."""
        cfg = QuadratureConfig(max_panels=2)
        with pytest.raises(ConvergenceError) as info:
            adaptive_panel_integrate(lambda x: x ** -0.5, 1e-12, 1.0, cfg)
        assert math.isfinite(info.value.estimate)
        assert info.value.error_estimate > 0.0

    def test_roundoff_floor(self):
        """Test a large smooth integrand with zero tolerances stops at the rounding floor."""
        cfg = QuadratureConfig(tol_abs=0.0, tol_rel=0.0, max_panels=64)
        value, err = adaptive_panel_integrate(lambda x: 1e6 + np.exp(x), 0.0, 1.0, cfg)
        assert value == pytest.approx(1e6 + math.e - 1.0, rel=1e-14)
        assert err <= ROUNDOFF_FLOOR * (1e6 + math.e)

    def test_rejects_empty_interval(self):
        """Test a >= b."""
        with pytest.raises(DomainError):
            adaptive_panel_integrate(np.sin, 1.0, 1.0, QuadratureConfig())


class TestGradedUnitIntegrate:
    """Test the dyadic graded mesh."""

    def test_integrable_weight(self):
        """Test integral_0^1 v^-1/2 dv = 2."""
        value = graded_unit_integrate(np.ones_like, -0.5, 40, 16)
        assert value == pytest.approx(2.0, rel=1e-12)

    def test_nonintegrable_weight_with_vanishing_integrand(self):
        """Test integral_0^1 v^-2 * v^3 dv = 1/2 with the innermost panel dropped."""
        value = graded_unit_integrate(lambda v: v ** 3, -2.0, 40, 16)
        assert value == pytest.approx(0.5, rel=1e-12)


class TestExtrapolateLimit:
    """Test Aitken extrapolation."""

    def test_geometric_error(self):
        """Test a geometric error term is removed exactly."""
        samples = [(10.0 * 2 ** k, 3.0 + 2.0 / (10.0 * 2 ** k)) for k in range(6)]
        est = extrapolate_limit(samples)
        assert est.extrapolated == pytest.approx(3.0, abs=1e-12)
        assert est.converged is True

    def test_constant_sequence(self):
        """Test a constant sequence has zero error."""
        est = extrapolate_limit([(10.0 * 2 ** k, -1.25) for k in range(5)])
        assert est.extrapolated == -1.25
        assert est.error_estimate == 0.0

    def test_erratic_sequence(self):
        """Test sign changes of the differences give converged=False."""
        values = [1.0, 2.0, 1.0, 2.0, 1.0]
        est = extrapolate_limit([(2.0 ** k, v) for k, v in enumerate(values)])
        assert est.converged is False
        assert est.extrapolated == 1.0

    def test_nonfinite_samples(self):
        """Test NaN samples give converged=False."""
        est = extrapolate_limit([(2.0 ** k, v) for k, v in enumerate([1.0, 2.0, float("nan"), 3.0])])
        assert est.converged is False

    def test_too_few_samples(self):
        """Test at least four samples are needed."""
        with pytest.raises(DomainError):
            extrapolate_limit([(1.0, 1.0), (2.0, 1.0), (4.0, 1.0)])

    def test_non_geometric_abscissae(self):
        """Test arithmetic abscissae are rejected."""
        with pytest.raises(DomainError):
            extrapolate_limit([(float(k + 1), 1.0 / (k + 1)) for k in range(5)])

    def test_aitken_length(self):
        """Test the transform shortens the sequence by two."""
        assert len(aitken_sequence([1.0, 0.5, 0.25, 0.125])) == 2


class TestPartitionsWeighted:
    """Test weighted partitions."""

    def test_three(self):
        """Test i = 3."""
        assert partitions_weighted(3) == {(0, 0, 1), (1, 1, 0), (3, 0, 0)}

    def test_counts_match_partition_numbers(self):
        """Test counts against p(i)."""
        for i, p in ((1, 1), (2, 2), (4, 5), (6, 11), (8, 22), (12, 77)):
            assert len(partitions_weighted(i)) == p

    def test_weights(self):
        """Test sum j m_j = i for every tuple."""
        for m in partitions_weighted(7):
            assert sum((j + 1) * mj for j, mj in enumerate(m)) == 7

    def test_range(self):
        """Test supported range."""
        with pytest.raises(DomainError):
            partitions_weighted(0)
        with pytest.raises(DomainError):
            partitions_weighted(13)


class TestTaylorJet:
    """Test truncated Taylor arithmetic."""

    def test_exp_derivatives(self):
        """Test every derivative of exp equals exp."""
        jet = TaylorJet.variable(0.3, 5).exp()
        assert np.allclose(jet.derivatives()[:, 0], math.exp(0.3), rtol=1e-14)

    def test_product(self):
        """Test x * x at 2."""
        x = TaylorJet.variable(2.0, 3)
        assert np.allclose((x * x).derivatives()[:, 0], [4.0, 4.0, 2.0, 0.0])

    def test_power(self):
        """Test derivatives of x^-1/2."""
        d = TaylorJet.variable(4.0, 3).power(-0.5).derivatives()[:, 0]
        expected = [0.5, -0.5 * 4.0 ** -1.5, 0.75 * 4.0 ** -2.5, -1.875 * 4.0 ** -3.5]
        assert np.allclose(d, expected, rtol=1e-13)

    def test_quotient(self):
        """Test 1 / (1 + x) at 0."""
        d = (1.0 / (1.0 + TaylorJet.variable(0.0, 4))).derivatives()[:, 0]
        assert np.allclose(d, [1.0, -1.0, 2.0, -6.0, 24.0])
