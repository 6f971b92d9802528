import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from besselindex.quad import (
    DEFAULT_CONFIG,
    EvalReport,
    QuadConfig,
    integrate_expdecay,
    integrate_finite,
    integrate_oscillatory_improper,
)


class TestQuadConfig:
    def test_defaults(self):
        assert DEFAULT_CONFIG.abs_tol == 1e-9 and DEFAULT_CONFIG.rel_tol == 1e-8

    @pytest.mark.parametrize("kwargs", [
        {"abs_tol": 0.0}, {"rel_tol": -1.0}, {"max_panels": 0}, {"osc_max_lobes": 0},
        {"accel_order": 0}, {"accel_order": 10, "osc_max_lobes": 5},
    ])
    def test_rejects_invalid(self, kwargs):
        with pytest.raises(ValueError):
            QuadConfig(**kwargs)

    def test_target_and_with_tol(self):
        cfg = QuadConfig(abs_tol=1e-6, rel_tol=1e-3)
        assert cfg.target(0.0) == 1e-6
        assert cfg.target(10.0) == pytest.approx(1e-2)
        assert cfg.with_tol(1e-4) == QuadConfig(abs_tol=1e-4, rel_tol=1e-4)

    def test_report_float(self):
        assert float(EvalReport(1.5, 0.0)) == 1.5


class TestFinite:
    @pytest.mark.parametrize("f, a, b, exact", [
        (np.sin, 0.0, math.pi, 2.0),
        (np.exp, -1.0, 2.0, math.exp(2) - math.exp(-1)),
        (lambda x: 1.0 / (1.0 + x * x), -5.0, 5.0, 2 * math.atan(5.0)),
        (np.sqrt, 0.0, 1.0, 2.0 / 3.0),
        (lambda x: np.abs(x - 0.3), 0.0, 1.0, 0.29),
    ])
    def test_known_integrals(self, f, a, b, exact):
        rep = integrate_finite(f, a, b, QuadConfig(1e-12, 1e-12))
        assert rep.converged
        assert rep.value == pytest.approx(exact, abs=1e-10)
        assert abs(rep.value - exact) <= max(rep.err_est, 1e-14)

    def test_scalar_integrand_is_wrapped(self):
        rep = integrate_finite(lambda x: math.cos(x), 0.0, 1.0)
        assert rep.value == pytest.approx(math.sin(1.0), abs=1e-10)

    def test_breakpoints_outside_interval_are_ignored(self):
        rep = integrate_finite(np.cos, 0.0, 1.0, breakpoints=[-3.0, 0.5, 7.0])
        assert rep.value == pytest.approx(math.sin(1.0), abs=1e-10)

    def test_rejects_empty_interval(self):
        with pytest.raises(ValueError):
            integrate_finite(np.sin, 1.0, 1.0)

    def test_panel_budget_flags_nonconvergence(self):
        rep = integrate_finite(lambda x: np.sin(1.0 / x), 1e-9, 1.0, QuadConfig(1e-14, 1e-14, max_panels=50))
        assert not rep.converged

    def test_non_finite_integrand_raises(self):
        with pytest.raises(FloatingPointError):
            integrate_finite(lambda x: np.full_like(x, np.nan), 0.0, 1.0)

    @given(st.integers(0, 6), st.integers(0, 6))
    def test_fourier_orthogonality(self, n, m):
        rep = integrate_finite(lambda u: np.cos(n * u) * np.cos(m * u), 0.0, math.pi, QuadConfig(1e-13, 1e-13))
        exact = (math.pi if n == 0 else math.pi / 2) if n == m else 0.0
        assert abs(rep.value - exact) <= 1e-10

    @given(st.floats(-3, 3), st.floats(0.1, 4), st.floats(0.1, 4))
    def test_additivity(self, a, w1, w2):
        f = lambda x: np.exp(-x * x) * np.cos(3 * x)
        whole = integrate_finite(f, a, a + w1 + w2, QuadConfig(1e-12, 1e-12)).value
        parts = (integrate_finite(f, a, a + w1, QuadConfig(1e-12, 1e-12)).value
                 + integrate_finite(f, a + w1, a + w1 + w2, QuadConfig(1e-12, 1e-12)).value)
        assert whole == pytest.approx(parts, abs=1e-10)

    @given(st.floats(-2, 2), st.floats(-2, 2))
    def test_linearity(self, alpha, beta):
        cfg = QuadConfig(1e-12, 1e-12)
        f, g = np.sin, lambda x: x ** 3
        lhs = integrate_finite(lambda x: alpha * f(x) + beta * g(x), 0.0, 2.0, cfg).value
        rhs = alpha * integrate_finite(f, 0.0, 2.0, cfg).value + beta * integrate_finite(g, 0.0, 2.0, cfg).value
        assert lhs == pytest.approx(rhs, abs=1e-10)


class TestExpDecay:
    @pytest.mark.parametrize("rate", [0.1, 1.0, 7.0])
    def test_exponential(self, rate):
        rep = integrate_expdecay(lambda x: np.exp(-rate * x), QuadConfig(1e-12, 1e-12), rate=rate)
        assert rep.value == pytest.approx(1.0 / rate, rel=1e-10)

    def test_start_offset(self):
        rep = integrate_expdecay(lambda x: np.exp(-x) * np.cos(x), rate=1.0, start=1.0)
        exact = math.exp(-1.0) * (math.cos(1.0) - math.sin(1.0)) / 2
        assert rep.value == pytest.approx(exact, abs=1e-9)

    def test_rejects_nonpositive_rate(self):
        with pytest.raises(ValueError):
            integrate_expdecay(np.exp, rate=0.0)

    @given(st.floats(0.2, 5.0))
    def test_laplace_of_cosine(self, s):
        rep = integrate_expdecay(lambda x: np.exp(-s * x) * np.cos(2 * x), QuadConfig(1e-11, 1e-11), rate=s)
        assert rep.value == pytest.approx(s / (s * s + 4), abs=1e-9)


class TestOscillatory:
    def test_dirichlet(self):
        rep = integrate_oscillatory_improper(lambda t: np.sinc(t / np.pi), lambda k: (k + 1) * np.pi,
                                             QuadConfig(1e-10, 1e-10))
        assert rep.converged
        assert rep.value == pytest.approx(math.pi / 2, abs=1e-9)

    def test_finite_hint_sequence_is_extended(self):
        hints = np.arange(1, 10) * np.pi
        rep = integrate_oscillatory_improper(lambda t: np.sinc(t / np.pi), hints, QuadConfig(1e-9, 1e-9))
        assert rep.value == pytest.approx(math.pi / 2, abs=1e-8)

    @pytest.mark.parametrize("omega", [0.5, 1.0, 3.0])
    def test_fresnel_type(self, omega):
        # int_0^inf sin(omega t) / sqrt(t) dt = sqrt(pi / (2 omega))
        f = lambda t: np.where(t > 0, np.sin(omega * t) / np.sqrt(np.maximum(t, 1e-300)), 0.0)
        rep = integrate_oscillatory_improper(f, lambda k: (k + 1) * np.pi / omega, QuadConfig(1e-9, 1e-9),
                                             start=0.0)
        assert rep.value == pytest.approx(math.sqrt(math.pi / (2 * omega)), abs=1e-7)

    def test_drift_extrapolation(self):
        # int_1^inf (sin t / t + t**-2) dt: the second term leaves a 1/T drift
        exact = math.pi / 2 - 0.9460830703671830 + 1.0
        f = lambda t: np.sin(t) / t + t ** -2.0
        rep = integrate_oscillatory_improper(f, lambda k: (k + 1) * np.pi, QuadConfig(1e-9, 1e-9),
                                             drift_exponent=1.0, start=1.0)
        assert rep.value == pytest.approx(exact, abs=1e-7)

    def test_lobe_budget_flags_nonconvergence(self):
        rep = integrate_oscillatory_improper(lambda t: np.sin(t) / np.sqrt(t + 1), lambda k: (k + 1) * np.pi,
                                             QuadConfig(1e-14, 1e-14, osc_max_lobes=30))
        assert not rep.converged

    @given(st.floats(0.3, 4.0))
    def test_sine_integral_scaling(self, a):
        # int_0^inf sin(a t) / t dt = pi/2 for every a > 0
        rep = integrate_oscillatory_improper(lambda t: a * np.sinc(a * t / np.pi), lambda k: (k + 1) * np.pi / a,
                                             QuadConfig(1e-9, 1e-9))
        assert rep.value == pytest.approx(math.pi / 2, abs=1e-8)
