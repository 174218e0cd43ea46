"""Predicted exponents, oracles and the experiment drivers on small problems."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dampwave.config import RunConfig
from dampwave.experiments import testfunction as tf
from dampwave.experiments.decay import effective_r, judge
from dampwave.experiments.fractional import fractional_check, fractional_constant
from dampwave.experiments.lifespan import SweepError, lifespan_sweep
from dampwave.experiments.ode import blowup_constant, ode_blowup_time, ode_oracle
from dampwave.experiments.profile import d_minus_g_check, diffusion_profile_experiment, heat_kernel, mass_tail
from dampwave.experiments.theory import format_rates, m_range, regime, theory_rates
from dampwave.initial_data import DataProfile, make_data
from dampwave.integrator import LINEAR, NonlinearitySpec, StepControls, evolve, make_state
from dampwave.norms import lp_norm
from dampwave.spectral import Field, make_grid


class TestTheory:
    def test_quadratic_line(self):
        t = theory_rates(1, 2.0, 1.0, 0.5, 0.6, lam=1.8)
        assert t.omega == pytest.approx(0.5)
        assert t.lifespan_lower_slope == pytest.approx(-2.0)
        assert t.kappa == pytest.approx(0.1)
        assert t.lifespan_upper_slope == pytest.approx(-10.0)
        assert (t.l2, t.hs, t.weighted) == pytest.approx((-0.25, -0.5, 0.05))
        assert t.regime == "sdbu" and t.lower_case == 1

    def test_two_dimensional_decay(self):
        t = theory_rates(2, 3.0, 1.0, 1.0, 1.2)
        assert t.l2 == pytest.approx(-0.5) and t.hs == pytest.approx(-1.0)
        assert t.weighted == pytest.approx(0.1)
        assert t.critical_p == 2.0
        assert t.regime == "sdge" and t.lifespan_lower_slope is None

    def test_mass_profile_exponent(self):
        # n = 1, r = 1, p = 4: selector min(alpha/2 - 1/4, 1/2, 1/2) = 1/4 at alpha = 1
        t = theory_rates(1, 4.0, 1.0, 0.5, 1.0, m=2.0)
        assert t.profile_kind == "mass"
        assert t.profile == pytest.approx(-0.25 - 0.25)

    def test_heat_data_profile(self):
        t = theory_rates(1, 6.0, 1.5, 0.5, 0.6)
        assert t.profile_kind == "heat_data"

    def test_slack_shifts_profile_only(self):
        a = theory_rates(1, 4.0, 1.0, 0.5, 1.0)
        b = theory_rates(1, 4.0, 1.0, 0.5, 1.0, slack=0.1)
        assert b.profile == pytest.approx(a.profile + 0.1) and b.l2 == a.l2

    def test_m_range(self):
        assert m_range(1, 0.3, 1.0) == pytest.approx((1.0, 5.0, True))
        assert m_range(1, 0.5, 1.0) == (1.0, math.inf, False)
        with pytest.raises(ValueError):
            theory_rates(1, 2.0, 1.0, 0.5, 0.6, m=0.9)
        with pytest.raises(ValueError):
            theory_rates(1, 2.0, 1.0, 0.3, 0.6, m=6.0)

    def test_regime(self):
        assert regime(1, 2.0, 1.0) == "sdbu"
        assert regime(1, 3.0, 1.0) == "sdbu_critical"
        assert regime(1, 5.0, 2.0) == "sdge"
        assert regime(1, 4.0, 1.0) == "sdge"

    def test_format(self):
        text = format_rates(theory_rates(1, 2.0, 1.0, 0.5, 0.6, lam=1.8))
        assert "omega = 0.5" in text and "lifespan slope lower-bound law = -2" in text
        assert "kappa = 0.1" in text

    @settings(max_examples=40, deadline=None)
    @given(st.floats(1.1, 2.9), st.floats(0.65, 2.0))
    def test_pure_and_consistent(self, p, alpha):
        a = theory_rates(1, p, 1.0, 0.5, alpha)
        b = theory_rates(1, p, 1.0, 0.5, alpha)
        assert a == b
        assert a.lifespan_lower_slope == pytest.approx(-1 / (1 / (p - 1) - 0.5))


class TestOde:
    def test_zero_data(self):
        assert not ode_oracle(0.0, 2.0).blows_up

    def test_negative_data_decays(self):
        res = ode_oracle(-0.5, 2.0, t_max=200.0)
        assert not res.blows_up and -0.5 < res.u_final < 0

    @pytest.mark.parametrize("c, ref", [(0.5, 5.326611542475323), (1.0, 3.5128420301040393),
                                        (2.0, 2.3646436638843205)])
    def test_frozen_values(self, c, ref):
        assert ode_blowup_time(c) == pytest.approx(ref, rel=1e-9)

    def test_tolerance_independent(self):
        a = ode_oracle(1.0, 2.0).blowup_time
        b = ode_oracle(1.0, 2.0, rtol=1e-10, atol=1e-10, u_event=1e7).blowup_time
        assert a == pytest.approx(b, rel=1e-7)

    def test_large_data_asymptotics(self):
        # for c >> 1 damping is negligible: T ~ int_c^inf du / sqrt(2 (u^3 - c^3) / 3)
        from scipy import integrate

        c = 1e4
        ref, _ = integrate.quad(lambda w: 1 / math.sqrt(2 * (w**3 - 1) / 3), 1, np.inf)
        assert ode_blowup_time(c) == pytest.approx(ref / math.sqrt(c), rel=2e-3)

    def test_blowup_constant(self):
        assert blowup_constant(2.0) == pytest.approx(6.0)

    @settings(max_examples=10, deadline=None)
    @given(st.floats(0.3, 5.0))
    def test_monotone(self, c):
        assert ode_blowup_time(1.2 * c) < ode_blowup_time(c)


class TestFractional:
    @pytest.mark.parametrize("omega", [0.3, 0.5, 0.7])
    def test_constant_against_gamma(self, omega):
        closed = 2 * math.gamma(-omega) * math.cos(math.pi * omega / 2)
        assert fractional_constant(omega) == pytest.approx(closed, rel=1e-9)

    def test_frozen_constants(self):
        assert fractional_constant(0.5) == pytest.approx(-5.0132565492620010048, rel=1e-9)
        assert fractional_constant(0.3) == pytest.approx(-7.7105051343098405863, rel=1e-9)

    def test_small_grid_check(self):
        res = fractional_check(make_grid(1, 128, 30.0), 0.5)
        assert res["relative_l2_error"] < 1e-8

    def test_two_dimensional_rejected(self):
        with pytest.raises(ValueError):
            fractional_check(make_grid(2, 16, 10.0), 0.5)


class TestTestFunction:
    def test_cutoff_values(self):
        eta, d1, d2 = tf.cutoff(np.array([0.0, 0.25, 0.5, 1.0, 2.0]))
        assert np.array_equal(eta, [1, 1, 1, 0, 0]) and not np.any(d1) and not np.any(d2)

    def test_cutoff_derivatives(self):
        t = np.linspace(0.52, 0.98, 47)
        h = 1e-6
        eta, d1, d2 = tf.cutoff(t)
        ep, em = tf.cutoff(t + h)[0], tf.cutoff(t - h)[0]
        assert np.allclose((ep - em) / (2 * h), d1, atol=1e-7)
        ep1, em1 = tf.cutoff(t + h)[1], tf.cutoff(t - h)[1]
        assert np.allclose((ep1 - em1) / (2 * h), d2, atol=1e-5)
        assert np.all(np.diff(eta) < 0)

    def _trajectory(self, spec, eps=1.0, T=8.0):
        g = make_grid(1, 2048, 100.0)
        u0, u1 = make_data(DataProfile(u1_weight=0.5), g)
        sched = np.round(np.arange(0, T + 1e-9, 0.05), 10)
        out = evolve(make_state(u0, u1, eps), T, spec, StepControls(dt_max=0.05, tol=1e-9),
                     schedule=sched, store_fields=True)
        return out, u0, u1

    def test_zero_solution(self):
        g = make_grid(1, 256, 40.0)
        z = Field(g, np.zeros(g.shape))
        times = np.linspace(0, 4, 41)
        rep = tf.testfunction_bound(times, np.zeros((41, 256)), z, z, 1.0, NonlinearitySpec(), 4.0)
        assert rep.I == rep.J == rep.K1 == rep.K2 == rep.K3 == rep.residual == 0.0

    def test_linear_identity(self):
        out, u0, u1 = self._trajectory(LINEAR)
        rep = tf.testfunction_bound(out.times, out.fields, u0, u1, 1.0, LINEAR, 8.0)
        assert rep.I == 0.0 and rep.J > 0
        assert rep.relative_residual < 1e-4

    def test_nonlinear_identity(self):
        spec = NonlinearitySpec("abs_power", 2.0)
        out, u0, u1 = self._trajectory(spec, eps=0.3)
        rep = tf.testfunction_bound(out.times, out.fields, u0, u1, 0.3, spec, 8.0, lam=1.8)
        assert rep.I > 0 and rep.relative_residual < 1e-4
        assert rep.eps_tau_kappa == pytest.approx(0.3 * 8.0**0.1)

    def test_input_checks(self):
        g = make_grid(1, 64, 10.0)
        z = Field(g, np.zeros(g.shape))
        fields = np.zeros((11, 64))
        with pytest.raises(ValueError):
            tf.testfunction_bound(np.linspace(1, 2, 11), fields, z, z, 1.0, LINEAR, 1.5)
        with pytest.raises(ValueError):
            tf.testfunction_bound(np.linspace(0, 2, 11), fields, z, z, 1.0, LINEAR, 3.0)
        with pytest.raises(ValueError):
            tf.testfunction_bound(np.linspace(0, 200, 11), fields, z, z, 1.0, LINEAR, 100.0)


class TestProfileHelpers:
    def test_heat_kernel_mass(self):
        g = make_grid(1, 512, 80.0)
        k = heat_kernel(g, 3.0)
        assert lp_norm(k, 1) == pytest.approx(1.0, rel=1e-12)
        x = g.x_axis
        assert np.allclose(k.values, np.exp(-x * x / 12.0) / math.sqrt(12 * math.pi), atol=1e-14)

    def test_heat_kernel_needs_positive_time(self):
        with pytest.raises(ValueError):
            heat_kernel(make_grid(1, 16, 5.0), 0.0)

    def test_mass_tail(self):
        t = np.geomspace(10, 100, 50)
        tail = mass_tail(t, 2.0 * t**-3.0, 100.0)
        assert tail.exponent == pytest.approx(3.0)
        assert tail.value == pytest.approx(2.0 * 100.0**-2 / 2, rel=1e-10)

    def test_mass_tail_not_integrable(self):
        t = np.geomspace(10, 100, 50)
        assert math.isinf(mass_tail(t, t**-0.5, 100.0).value)

    def test_mass_tail_empty(self):
        assert mass_tail([], [], 10.0).value == 0.0

    def test_d_minus_g_rate(self):
        fit, target = d_minus_g_check(make_grid(1, 2048, 800.0))
        assert target == -1.25 and abs(fit.slope - target) <= 0.1

    def test_degenerate_zero_data(self):
        cfg = RunConfig()
        cfg = cfg.replace("data", amplitude=0.0).replace("experiment", kind="profile", T=50.0)
        cfg = cfg.replace("problem", p=4.0, alpha=1.0).replace("grid", N=256, L=100.0)
        rep = diffusion_profile_experiment(cfg)
        assert rep.degenerate and rep.theta == 0.0 and not rep.passed


class TestDecayHelpers:
    def test_judge(self):
        assert judge(-0.26, -0.25, 0.05) == ("PASS", None)
        assert judge(-0.5, -0.25, 0.05)[0] == "PASS"
        assert judge(0.0, -0.25, 0.05)[0] == "FAIL"

    def test_effective_r_of_gaussian_is_one(self):
        g = make_grid(1, 4096, 800.0)
        u0, _ = make_data(DataProfile(), g)
        r, fit = effective_r(u0, (20.0, 2000.0))
        assert r == pytest.approx(1.0, abs=0.02)


class TestLifespanSweep:
    def test_needs_three_amplitudes(self):
        with pytest.raises(SweepError):
            lifespan_sweep(RunConfig(), eps_list=[0.5])

    def test_distinct_amplitudes(self):
        with pytest.raises(SweepError):
            lifespan_sweep(RunConfig(), eps_list=[0.5, 0.5, 0.25])
