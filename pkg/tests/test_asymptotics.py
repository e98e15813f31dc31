"""Tests for the asymptotic verification harness."""

import dataclasses
import math

import pytest

from src.core.asymptotics import (
    ScalarCheck,
    VerificationReport,
    classify_wells,
    derivative_decay_target,
    fractional_order_split,
    higher_limit_target,
    make_report,
    potential_targets,
    regularity_class,
    verify_all,
    verify_arctan_tail,
    verify_derivative_decay,
    verify_fraclap_decay,
    verify_higher_limits,
    verify_potential_limits,
)
from src.core.config_file import GridConfig, RunConfig, VerifyConfig
from src.core.errors import DomainError
from src.core.layer import LayerParams, new_layer
from src.core.potential import build_potential


class TestMakeReport:
    """Test report grading."""

    def test_target_pass(self):
        """Test a sequence converging to its target."""
        samples = [(10.0 * 2 ** k, 2.0 - 1.0 / (10.0 * 2 ** k)) for k in range(6)]
        report = make_report("demo", "v -> 2", "+inf", samples, 2.0, 1e-6)
        assert report.passed is True
        assert report.rel_error < 1e-10

    def test_target_fail(self):
        """Test a wrong target fails and reports its relative error."""
        samples = [(10.0 * 2 ** k, 2.0 - 1.0 / (10.0 * 2 ** k)) for k in range(6)]
        report = make_report("demo", "v -> 3", "+inf", samples, 3.0, 1e-2)
        assert report.passed is False
        assert report.rel_error == pytest.approx(1.0 / 3.0, rel=1e-8)

    def test_finiteness_only(self):
        """Test target None passes on convergence and serializes as 'finite'."""
        samples = [(10.0 * 2 ** k, 0.5 + 0.1 / 2 ** k) for k in range(6)]
        report = make_report("demo", "v finite", "-1+", samples, None, 1e-3)
        assert report.passed is True
        result = report.to_dict()
        assert result["target"] == "finite"
        assert result["rel_error"] is None
        assert result["pass"] is True

    def test_zero_target_uses_absolute_error(self):
        """Test target 0 grades the absolute error."""
        samples = [(10.0 * 2 ** k, 1e-3 / 2 ** k) for k in range(6)]
        report = make_report("demo", "v -> 0", "+inf", samples, 0.0, 1e-2)
        assert report.passed is True

    def test_dict_keys(self):
        """Test the serialized report carries its samples and claim."""
        samples = [(2.0 ** k, 1.0) for k in range(4)]
        result = make_report("demo", "v -> 1", "+inf", samples, 1.0, 1e-2).to_dict()
        assert result["claim"] == "v -> 1"
        assert len(result["samples"]) == 4
        assert result["converged"] is True

    def test_unconverged_sample_fails(self):
        """Test a sample that ran out of quadrature budget fails an otherwise good report."""
        samples = [(10.0 * 2 ** k, 2.0 - 1.0 / (10.0 * 2 ** k)) for k in range(6)]
        flags = [True, True, False, True, True, True]
        report = make_report("demo", "v -> 2", "+inf", samples, 2.0, 1e-6, converged=flags)
        assert report.passed is False
        assert report.estimate.converged is False
        assert report.note == "1 of 6 samples did not converge"
        assert report.to_dict()["sample_converged"] == flags


class TestTargets:
    """Test closed-form targets."""

    def test_derivative_decay(self):
        """Test (+-1)^{i-1} 2 Gamma(i+2s)/Gamma(1+2s)."""
        assert derivative_decay_target(1, 0.5, "+inf") == 2.0
        assert derivative_decay_target(2, 0.5, "+inf") == -4.0
        assert derivative_decay_target(2, 0.5, "-inf") == 4.0
        assert derivative_decay_target(3, 0.5, "+inf") == 12.0

    def test_potential_unit_layer(self):
        """Test the unit layer targets."""
        targets = potential_targets(LayerParams(s=0.5, alpha=1.0, beta=1.0, kappa=2.0))
        assert targets == {"V -1+": 1.0, "V 1-": 1.0, "V' -1+": 2.0, "V' 1-": -2.0}

    def test_potential_skew_layer(self):
        """Test asymmetric targets."""
        targets = potential_targets(LayerParams(s=0.4, alpha=0.5, beta=0.8, kappa=4.0, c2=2.0))
        assert targets["V -1+"] == pytest.approx(0.5 / (1.3 * 0.4), rel=1e-14)
        assert targets["V' 1-"] == pytest.approx(-(2.0 ** -1.0) / 0.4, rel=1e-14)

    def test_higher_limit_integer_ratio(self):
        """Test 2s/alpha = 2."""
        assert higher_limit_target(1.0, 0.5, 1.0, 1, right=False) == 4.0
        assert higher_limit_target(1.0, 0.5, 1.0, 2, right=False) == 4.0
        assert higher_limit_target(1.0, 0.5, 1.0, 2, right=True) == -4.0

    def test_higher_limit_finite_only(self):
        """Test integer ratio below i gives None."""
        assert higher_limit_target(1.0, 0.5, 1.0, 3, right=False) is None
        assert higher_limit_target(1.0, 1.0, 1.0, 2, right=True) is None

    def test_higher_limit_fractional_ratio(self):
        """Test 2s/alpha = 2.5 has a target at every order."""
        assert higher_limit_target(1.0, 0.4, 1.0, 3, right=False) == pytest.approx(2.0 * 2.5 * 1.5 * 0.5, rel=1e-14)


class TestClassifiers:
    """Test regularity and well classification."""

    def test_regularity_class(self):
        """Test floor(2s/alpha), floor(2s/beta)."""
        assert regularity_class(LayerParams(s=0.5, alpha=0.4, beta=1.0, kappa=4.0)) == (2, 1)
        assert regularity_class(LayerParams(s=0.5, alpha=1.0 / 3.0, beta=0.5, kappa=4.0)) == (3, 2)

    def test_classify_wells(self):
        """Test non-degenerate iff the tail exponent equals 2s."""
        assert classify_wells(LayerParams(s=0.5, alpha=1.0, beta=0.5, kappa=2.0)) == ("non-degenerate", "degenerate")
        assert classify_wells(LayerParams(s=0.4, alpha=0.8, beta=0.8, kappa=4.0)) == (
            "non-degenerate",
            "non-degenerate",
        )

    def test_fractional_order_split(self):
        """Test integer part and remainder."""
        assert fractional_order_split(LayerParams(s=0.5, alpha=0.4, beta=1.0, kappa=4.0)) == ((2, 0.5), (1, 0.0))


class TestVerificationReport:
    """Test report aggregation."""

    def test_failures(self):
        """Test failed names and pass flag."""
        report = VerificationReport(
            layer={},
            quadrature={},
            scalars=[ScalarCheck("a", "", 0.0, True), ScalarCheck("b", "", 1.0, False)],
        )
        assert report.passed is False
        assert report.failures() == ["b"]
        assert report.check_count == 2
        assert report.to_dict()["scalar_checks"][1]["pass"] is False


class TestVerifyArctanTail:
    """Test the arctan tail constant check."""

    def test_passes(self):
        """Test x (1 - u(x)) -> 2/pi within 1e-6."""
        report = verify_arctan_tail(VerifyConfig())
        assert report.passed is True
        assert report.estimate.extrapolated == pytest.approx(2.0 / math.pi, rel=1e-6)


class TestVerifyFraclapDecay:
    """Test |x|^{2s} L_s phi -> -+1/s."""

    def test_unit_layer(self, unit_layer, quad):
        """Test both sides of the unit layer."""
        minus, plus = verify_fraclap_decay(unit_layer, quad, VerifyConfig(samples=5))
        assert minus.passed and plus.passed
        assert minus.target == 2.0
        assert plus.target == -2.0

    def test_symmetric_sides_mirror(self, unit_layer, quad):
        """Test the two extrapolants of the symmetric layer are negatives of each other."""
        minus, plus = verify_fraclap_decay(unit_layer, quad, VerifyConfig(samples=5))
        assert minus.estimate.extrapolated == pytest.approx(-plus.estimate.extrapolated, abs=1e-8)

    def test_skew_layer(self, skew_layer, quad):
        """Test the skew layer reaches +-2.5 within 2e-2."""
        minus, plus = verify_fraclap_decay(skew_layer, quad, VerifyConfig())
        assert minus.passed and plus.passed
        assert minus.estimate.extrapolated == pytest.approx(2.5, rel=2e-2)
        assert plus.estimate.extrapolated == pytest.approx(-2.5, rel=2e-2)
        assert all(minus.sample_converged + plus.sample_converged)


class TestVerifyDerivativeDecay:
    """Test |x|^{i+2s} L_s phi^(i) limits."""

    def test_rejects_order(self, unit_layer, quad):
        """Test i outside 1..3."""
        for i in (0, 4):
            with pytest.raises(DomainError):
                verify_derivative_decay(unit_layer, i, quad, VerifyConfig())
            with pytest.raises(DomainError):
                verify_higher_limits(unit_layer, i, quad, VerifyConfig())

    def test_first_derivative(self, unit_layer, quad):
        """Test i = 1 on the unit layer."""
        minus, plus = verify_derivative_decay(unit_layer, 1, quad, VerifyConfig(samples=5))
        assert minus.passed and plus.passed
        assert minus.tolerance == 3e-2

    def test_unit_second_derivative(self, unit_layer, quad):
        """Test i = 2 reaches -4 at +inf."""
        _, plus = verify_derivative_decay(unit_layer, 2, quad, VerifyConfig(), tolerance=5e-2)
        assert plus.passed
        assert plus.estimate.extrapolated == pytest.approx(-4.0, rel=5e-2)

    def test_unit_third_derivative_converges(self, unit_layer, quad):
        """Test every i = 3 sample converges on the unit layer."""
        minus, plus = verify_derivative_decay(unit_layer, 3, quad, VerifyConfig(), tolerance=5e-2)
        assert all(minus.sample_converged + plus.sample_converged)
        assert minus.passed and plus.passed

    def test_skew_first_derivative(self, skew_layer, quad):
        """Test i = 1 reaches +2 on both sides within 3%."""
        minus, plus = verify_derivative_decay(skew_layer, 1, quad, VerifyConfig())
        assert minus.passed and plus.passed
        assert minus.estimate.extrapolated == pytest.approx(2.0, rel=3e-2)
        assert plus.estimate.extrapolated == pytest.approx(2.0, rel=3e-2)

    def test_skew_second_derivative(self, skew_layer, quad):
        """Test i = 2 reaches -3.6 at +inf within 5%."""
        _, plus = verify_derivative_decay(skew_layer, 2, quad, VerifyConfig(), tolerance=5e-2)
        assert plus.target == pytest.approx(-3.6, rel=1e-12)
        assert plus.passed


class TestVerifyPotentialLimits:
    """Test the well limits read from the potential model."""

    def test_unit_layer(self, unit_layer, unit_model, quad):
        """Test V'/(1+r) -> 2 and V/(1+r)^2 -> 1 at -1+ within 2e-2."""
        reports = verify_potential_limits(unit_layer, unit_model, quad, VerifyConfig())
        assert all(r.passed for r in reports), [r.to_dict() for r in reports if not r.passed]
        by_key = {(r.name, r.side): r for r in reports}
        assert by_key[("potential well value", "-1+")].estimate.extrapolated == pytest.approx(1.0, rel=2e-2)
        assert by_key[("potential well slope", "-1+")].estimate.extrapolated == pytest.approx(2.0, rel=2e-2)
        assert reports[0].note.startswith("model V(1) = ")

    def test_reads_the_model(self, unit_layer, unit_model, quad):
        """Test a corrupted model fails the limits."""
        broken = dataclasses.replace(
            unit_model, v_values=unit_model.v_values * 10.0 + 5.0, vprime_values=-unit_model.vprime_values
        )
        reports = verify_potential_limits(unit_layer, broken, quad, VerifyConfig(samples=5))
        assert not any(r.passed for r in reports)

    @pytest.mark.slow
    def test_scaling_covariance(self, quad):
        """Test doubling C2 scales the 1- slope limit by 2^{-2s/beta}."""
        grid = GridConfig(potential_x_far=1e3, potential_nodes=401)
        slopes = []
        for c2 in (1.0, 2.0):
            layer = new_layer(LayerParams(s=0.5, alpha=1.0, beta=1.0, kappa=4.0, c1=1.0, c2=c2))
            model = build_potential(layer, grid, quad)
            reports = verify_potential_limits(layer, model, quad, VerifyConfig())
            slopes.append(next(r for r in reports if r.name == "potential well slope" and r.side == "+1-"))
        assert slopes[1].target == pytest.approx(0.5 * slopes[0].target, rel=1e-14)
        ratio = slopes[1].estimate.extrapolated / slopes[0].estimate.extrapolated
        assert ratio == pytest.approx(0.5, rel=3e-2)


class TestVerifyHigherLimits:
    """Test V^(i+1) well limits."""

    def test_nondegenerate_unit_layer(self, unit_layer, quad):
        """Test V'' -> 2 at -1+ within 3% when alpha = 2s."""
        left, _ = verify_higher_limits(unit_layer, 1, quad, VerifyConfig(), tolerance=3e-2)
        assert left.target == 2.0
        assert left.passed

    def test_degenerate_left_well(self, quad):
        """Test V''/(1+r) -> 4 at -1+ within 5% for alpha = beta = 1/2."""
        layer = new_layer(LayerParams(s=0.5, alpha=0.5, beta=0.5, kappa=4.0, c1=1.0, c2=1.0))
        left, _ = verify_higher_limits(layer, 1, quad, VerifyConfig())
        assert left.target == 4.0
        assert left.passed


@pytest.mark.slow
class TestVerifyAll:
    """Test the full harness on the unit layer."""

    def test_all_checks_pass(self, unit_layer, unit_model, quad):
        """Test every check passes on the default grid and the report is ordered."""
        report = verify_all(unit_layer, unit_model, quad, VerifyConfig(), RunConfig().tolerances)
        assert report.check_count >= 12
        assert report.passed, report.failures()
        keys = [(r.name, r.side) for r in report.limits]
        assert keys == sorted(keys)
        assert all(r.claim for r in report.limits)
        assert all(c.claim for c in report.scalars)
