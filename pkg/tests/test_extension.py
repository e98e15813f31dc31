"""Tests for the half-plane extension."""

import math
from types import SimpleNamespace

import numpy as np
import pytest

from src.core.errors import DomainError
from src.core.extension import (
    extend,
    extension_constants,
    extension_samples,
    hamiltonian_check,
    kernel_H,
    kernel_normalization,
    maximum_principle_check,
    poisson_average,
    trace_check,
    ubar_x,
    ubar_y,
    w_eval,
)


def constant_profile(level=1.0):
    """A flat profile with s = 1/2."""
    return SimpleNamespace(
        s=0.5,
        value=lambda z: np.full_like(np.asarray(z, dtype=float), level),
        derivative=lambda z, order: np.zeros_like(np.asarray(z, dtype=float)),
    )


def arctan_extension(x, y):
    """Closed-form extension of (2/pi) arctan."""
    return 2.0 / math.pi * math.atan(x / (1.0 + y))


def arctan_w(x, y):
    """Closed-form d_y of the arctan extension."""
    return -2.0 / math.pi * x / ((1.0 + y) ** 2 + x * x)


class TestExtensionConstants:
    """Test p_s, q_s, d_s."""

    def test_half(self):
        """Test s = 1/2: p_s = q_s = 1/pi, no closed form."""
        consts = extension_constants(0.5)
        assert consts.p_s == pytest.approx(1.0 / math.pi, rel=1e-13)
        assert consts.q_s == pytest.approx(1.0 / math.pi, rel=1e-13)
        assert consts.d_s == 0.0
        assert consts.ds_over_qs == pytest.approx(math.pi, rel=1e-13)
        assert consts.p_s_closed_form is None

    def test_closed_form_reported(self):
        """Test the closed form is reported away from s = 1/2."""
        consts = extension_constants(0.25)
        assert consts.p_s_closed_form is not None
        assert consts.to_dict()["p_s_closed_form"] == consts.p_s_closed_form

    def test_rejects_s(self):
        """Test s outside (0, 1)."""
        for s in (0.0, 1.0, -0.2):
            with pytest.raises(DomainError):
                extension_constants(s)


class TestKernel:
    """Test the Poisson kernel."""

    def test_normalization(self):
        """Test integral of H_s is 1."""
        for s in (0.25, 0.5, 0.75):
            assert kernel_normalization(s) == pytest.approx(1.0, abs=1e-10)

    def test_values(self):
        """Test H_{1/2}(0) = 1/pi and evenness."""
        xi = np.array([-2.0, 0.0, 2.0])
        h = kernel_H(0.5, xi)
        assert h[1] == pytest.approx(1.0 / math.pi, rel=1e-13)
        assert h[0] == h[2]


class TestPoissonAverage:
    """Test the kernel average."""

    def test_constant(self, quad):
        """Test the average of 1 is 1."""
        value = poisson_average(np.ones_like, 0.3, 0.7, 0.5, quad)
        assert value == pytest.approx(1.0, abs=1e-9)

    def test_first_moment_of_constant(self, quad):
        """Test the first moment of a constant vanishes."""
        value = poisson_average(np.ones_like, 0.3, 0.7, 0.5, quad, first_moment=True)
        assert value == pytest.approx(0.0, abs=1e-9)

    def test_rejects_y(self, quad):
        """Test y <= 0."""
        with pytest.raises(DomainError):
            poisson_average(np.ones_like, 0.0, 0.0, 0.5, quad)


class TestExtend:
    """Test u_bar."""

    def test_constant_profile(self, quad):
        """Test a constant extends to itself."""
        assert extend(constant_profile(), 1.5, 2.0, quad) == pytest.approx(1.0, abs=1e-9)

    def test_arctan_closed_form(self, arctan, quad):
        """Test against (2/pi) arctan(x / (1 + y))."""
        for x, y in ((0.0, 0.5), (1.0, 0.5), (-2.0, 1.0), (3.0, 0.1)):
            assert extend(arctan, x, y, quad) == pytest.approx(arctan_extension(x, y), abs=1e-9)

    def test_trace(self, arctan, quad):
        """Test u_bar(x, y) -> v(x) as y -> 0."""
        assert extend(arctan, 1.0, 1e-4, quad) == pytest.approx(0.5, abs=1e-3)

    def test_gradient(self, arctan, quad):
        """Test d_x and d_y against the closed form."""
        x, y = 0.8, 0.6
        assert ubar_x(arctan, x, y, quad) == pytest.approx(2.0 / math.pi * (1.0 + y) / ((1.0 + y) ** 2 + x * x), abs=1e-9)
        assert ubar_y(arctan, x, y, quad) == pytest.approx(arctan_w(x, y), abs=1e-9)

    def test_maximum_principle(self, arctan, quad):
        """Test -1 <= u_bar <= 1 for the arctan profile and a violation above."""
        points = [(-50.0, 0.01), (0.0, 1.0), (50.0, 0.01), (3.0, 10.0)]
        assert maximum_principle_check(arctan, points, quad) is True
        assert maximum_principle_check(constant_profile(2.0), [(0.0, 1.0)], quad) is False


class TestWEval:
    """Test both routes of w."""

    def test_constant_profile(self, quad):
        """Test w vanishes for a constant profile."""
        assert w_eval(constant_profile(), None, 0.0, 0.5, quad) == pytest.approx(0.0, abs=1e-8)

    def test_finite_difference(self, arctan, quad):
        """Test the Richardson difference against the closed form."""
        assert w_eval(arctan, None, 1.0, 0.5, quad) == pytest.approx(arctan_w(1.0, 0.5), abs=1e-8)

    def test_representation(self, arctan, quad):
        """Test 2s p_s H_{1-s} * L_s v against the closed form."""
        value = w_eval(arctan, arctan.exact_fraclap, 1.0, 0.5, quad, method="representation")
        assert value == pytest.approx(arctan_w(1.0, 0.5), abs=1e-8)

    def test_cross_method(self, arctan, quad):
        """Test both routes agree."""
        for x, y in ((-2.0, 0.25), (0.5, 1.0)):
            fd = w_eval(arctan, arctan.exact_fraclap, x, y, quad)
            rep = w_eval(arctan, arctan.exact_fraclap, x, y, quad, method="representation")
            assert abs(fd - rep) <= 1e-6

    def test_unknown_method(self, arctan, quad):
        """Test method name validation."""
        with pytest.raises(DomainError):
            w_eval(arctan, arctan.exact_fraclap, 0.0, 1.0, quad, method="spectral")

    def test_representation_needs_evaluator(self, arctan, quad):
        """Test lsv is required."""
        with pytest.raises(DomainError):
            w_eval(arctan, None, 0.0, 1.0, quad, method="representation")


class TestExtensionSamples:
    """Test the sample grid."""

    def test_grid(self, arctan, quad):
        """Test one sample per (x, y) pair, y outer."""
        samples = extension_samples(arctan, None, [-1.0, 1.0], [0.5, 1.0], quad)
        assert [(p.x, p.y) for p in samples] == [(-1.0, 0.5), (1.0, 0.5), (-1.0, 1.0), (1.0, 1.0)]
        assert all(math.isnan(p.w_repr) for p in samples)
        assert samples[1].to_dict()["u_bar"] == pytest.approx(arctan_extension(1.0, 0.5), abs=1e-9)


class TestTraceCheck:
    """Test w(x, y) -> 2s p_s L_s v(x)."""

    def test_arctan(self, arctan, quad):
        """Test the deviation at y = 1e-3 is below 1e-3."""
        worst, rows = trace_check(arctan, arctan.exact_fraclap, np.linspace(-5.0, 5.0, 11), 1e-3, quad)
        assert worst <= 1e-3
        assert len(rows) == 11
        assert rows[5][2] == 0.0


class TestHamiltonianCheck:
    """Test the Hamiltonian inequality."""

    def test_rhs_at_origin(self, arctan, quad):
        """Test G(0) - G(1) = 2/pi and the closed-form left side."""
        sample = hamiltonian_check(arctan, arctan.potential, 0.0, 1.0, quad)
        assert sample.rhs == pytest.approx(2.0 / math.pi, abs=1e-6)
        assert sample.lhs == pytest.approx(1.0 / math.pi, abs=1e-6)
        assert sample.holds is True

    def test_off_centre(self, arctan, quad):
        """Test the inequality at a point off the axis."""
        sample = hamiltonian_check(arctan, arctan.potential, 1.5, 0.5, quad)
        assert sample.holds is True
        assert sample.to_dict()["x"] == 1.5
