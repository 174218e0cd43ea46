"""Kernel branches, propagator structure and operator limits.

Reference values come from 50-digit mpmath evaluations of the closed forms.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dampwave.propagators import (
    SERIES_THRESHOLD,
    apply_D,
    apply_Dtilde,
    apply_G,
    d_minus_g_multiplier,
    damped_kernel,
    dtilde_multiplier,
    eval_L,
    heat_multiplier,
    propagate_coeffs,
    state_propagator,
)
from dampwave.spectral import Field, fft_values, make_grid


def series_L(t, z, terms=10):
    w = t * t * z
    return t * sum(w**m / math.factorial(2 * m + 1) for m in range(terms))


class TestKernel:
    def test_oscillatory_value(self):
        # sin(sqrt(3/4)) / sqrt(3/4)
        assert eval_L(1.0, 1.0) == pytest.approx(0.87960466065715781404, rel=1e-15)

    def test_growing_value(self):
        assert eval_L(2.0, 0.1) == pytest.approx(2.2060864324825603915, rel=1e-15)

    def test_branch_point_value_is_t(self):
        assert eval_L(3.0, 0.25) == 3.0

    @pytest.mark.parametrize("t", [15.0, 40.0, 200.0])
    @pytest.mark.parametrize("z", [1e-6, -1e-6])
    def test_direct_branch_meets_series(self, t, z):
        assert abs(t * t * z) >= SERIES_THRESHOLD
        got = float(eval_L(t, 0.25 - z))
        assert got == pytest.approx(series_L(t, z), rel=1e-12)

    @pytest.mark.parametrize("k2", [0.25 + 1e-9, 0.25 - 1e-9])
    def test_series_branch_meets_series(self, k2):
        t = 5.0
        assert abs(t * t * (0.25 - k2)) < SERIES_THRESHOLD
        assert eval_L(t, k2) == pytest.approx(series_L(t, 0.25 - k2), rel=1e-15)

    def test_array_and_scalar_forms_agree(self):
        k2 = np.array([0.0, 0.1, 0.25, 1.0, 10.0])
        arr = eval_L(2.0, k2)
        assert arr.shape == (5,)
        for k, v in zip(k2, arr):
            assert eval_L(2.0, float(k)) == v

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            eval_L(-1.0, 0.0)

    def test_negative_k2_rejected(self):
        with pytest.raises(ValueError):
            damped_kernel(1.0, -0.1)

    @pytest.mark.parametrize("t", [0.1, 1.0, 10.0, 100.0, 1000.0, 5000.0])
    def test_zero_mode_damped_kernel(self, t):
        assert damped_kernel(t, 0.0)[0] == pytest.approx(-math.expm1(-t), abs=1e-14)

    def test_damped_kernel_finite_where_undamped_overflows(self):
        with np.errstate(over="ignore"):
            assert not np.isfinite(eval_L(3000.0, 0.0))
        assert np.isfinite(damped_kernel(3000.0, np.array([0.0, 1e-8, 0.2]))).all()


class TestDtilde:
    def test_growing_value(self):
        assert dtilde_multiplier(1.0, 0.1)[0] == pytest.approx(0.96349596128040999628, rel=1e-14)

    def test_oscillatory_value(self):
        assert dtilde_multiplier(3.0, 2.0)[0] == pytest.approx(-0.21313736387641969657, rel=1e-13)

    @pytest.mark.parametrize("t", [0.5, 20.0, 2000.0])
    def test_zero_mode_is_conserved(self, t):
        assert dtilde_multiplier(t, 0.0)[0] == pytest.approx(1.0, abs=1e-14)


class TestDMinusG:
    @pytest.mark.parametrize(
        "t, k2, ref",
        [
            (400.0, 1e-3, 0.0010755248400188819265),
            (1000.0, 1e-4, 0.00017196984233644158114),
            (50.0, 0.01, 0.0093564628035797218897),
            (400.0, 0.2, -1.8048513878451988666e-35),
        ],
    )
    def test_against_high_precision(self, t, k2, ref):
        assert d_minus_g_multiplier(t, k2)[0] == pytest.approx(ref, rel=1e-13)

    def test_zero_mode(self):
        for t in (3.0, 30.0, 300.0):
            assert d_minus_g_multiplier(t, 0.0)[0] == pytest.approx(-math.exp(-t), rel=1e-12)

    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.01, 500.0), st.floats(0.0, 5.0))
    def test_consistent_with_difference(self, t, k2):
        fused = d_minus_g_multiplier(t, k2)[0]
        direct = damped_kernel(t, k2)[0] - heat_multiplier(t, k2)[0]
        assert fused == pytest.approx(direct, abs=1e-13)


class TestStatePropagator:
    @settings(max_examples=50, deadline=None)
    @given(st.floats(0.0, 300.0), st.floats(0.0, 100.0))
    def test_determinant(self, t, k2):
        a, b, c, d = (e[0] for e in state_propagator(t, k2))
        assert a * d - b * c == pytest.approx(math.exp(-t), abs=1e-12)

    def test_identity_at_zero(self):
        k2 = np.linspace(0, 20, 41)
        a, b, c, d = state_propagator(0.0, k2)
        assert np.all(a == 1) and np.all(b == 0) and np.all(c == 0) and np.all(d == 1)

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.0, 40.0), st.floats(0.0, 40.0), st.integers(0, 2**32 - 1))
    def test_semigroup(self, s, t, seed):
        rng = np.random.default_rng(seed)
        g = make_grid(1, 32, 15.0)
        U = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
        V = rng.standard_normal(g.shape) + 1j * rng.standard_normal(g.shape)
        U1, V1 = propagate_coeffs(t, g, *propagate_coeffs(s, g, U, V))
        U2, V2 = propagate_coeffs(s + t, g, U, V)
        assert np.max(np.abs(U1 - U2)) < 1e-10 and np.max(np.abs(V1 - V2)) < 1e-10

    def test_velocity_row_is_time_derivative(self):
        k2 = np.array([0.01, 0.2, 0.26, 3.0])
        t, h = 2.0, 1e-6
        a_p, b_p = state_propagator(t + h, k2)[:2]
        a_m, b_m = state_propagator(t - h, k2)[:2]
        _, _, c, d = state_propagator(t, k2)
        assert np.allclose((a_p - a_m) / (2 * h), c, atol=1e-8)
        assert np.allclose((b_p - b_m) / (2 * h), d, atol=1e-8)


class TestFieldOperators:
    def test_D_zero_and_Dtilde_identity_at_zero_time(self):
        rng = np.random.default_rng(0)
        g = make_grid(1, 64, 10.0)
        f = Field(g, rng.standard_normal(g.shape))
        assert np.max(np.abs(apply_D(0.0, f).values)) == 0.0
        assert np.max(np.abs(apply_Dtilde(0.0, f).values - f.values)) < 1e-14

    def test_heat_mass_conservation(self):
        g = make_grid(1, 256, 100.0)
        f = Field(g, np.exp(-g.r2))
        assert apply_G(7.0, f).values.sum() == pytest.approx(f.values.sum(), rel=1e-13)

    def test_D_solves_zero_mode_ode(self):
        g = make_grid(1, 16, 5.0)
        f = Field(g, np.full(g.shape, 2.0))
        assert np.allclose(apply_D(1.5, f).values, 2.0 * (1 - math.exp(-1.5)), atol=1e-14)
        coeffs = fft_values(g, apply_D(1.5, f).values)
        assert np.max(np.abs(coeffs.reshape(-1)[1:])) < 1e-14
