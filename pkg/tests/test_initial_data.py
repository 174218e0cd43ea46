"""Data profiles and the box-based class diagnostics."""

import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dampwave.initial_data import DataProfile, class_report, make_data, power_core_coefficients, radial_shape
from dampwave.spectral import Field, make_grid

GRID = make_grid(1, 1024, 60.0)


def power_data(lam, grid, **kw):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return make_data(DataProfile("power_decay", lam=lam, **kw), grid)


class TestProfiles:
    def test_gaussian(self):
        u0, u1 = make_data(DataProfile("gaussian", sigma=2.0, amplitude=3.0), GRID)
        assert np.allclose(u0.values, 3.0 * np.exp(-GRID.r2 / 8.0), rtol=1e-15)
        assert not np.any(u1.values)

    def test_weights_split_slots(self):
        u0, u1 = make_data(DataProfile(u0_weight=0.0, u1_weight=2.0), GRID)
        assert not np.any(u0.values) and np.max(u1.values) == pytest.approx(2.0)

    def test_uniform(self):
        u0, _ = make_data(DataProfile("uniform", c=0.7), GRID)
        assert np.all(u0.values == 0.7)

    def test_bump_support(self):
        u0, _ = make_data(DataProfile("bump", radius=2.0), GRID)
        r = np.sqrt(GRID.r2)
        assert np.all(u0.values[r >= 2.0] == 0) and u0.values[GRID.N // 2] == pytest.approx(1.0)

    def test_gaussian_too_wide_for_box(self):
        with pytest.raises(ValueError, match="enlarge L"):
            make_data(DataProfile("gaussian", sigma=10.0), GRID)

    def test_power_decay_warns(self):
        with pytest.warns(UserWarning, match="truncated"):
            make_data(DataProfile("power_decay", lam=1.8), GRID)

    def test_power_decay_tail_exact(self):
        u0, _ = power_data(1.8, GRID)
        r = np.sqrt(GRID.r2)
        out = r > 1.0
        assert np.allclose(u0.values[out], r[out] ** -1.8, rtol=1e-14)

    @pytest.mark.parametrize("kw", [dict(kind="ring"), dict(sigma=0.0), dict(kind="power_decay", lam=0.0),
                                    dict(kind="bump", radius=-1.0), dict(mollify=-0.1)])
    def test_invalid(self, kw):
        with pytest.raises(ValueError):
            DataProfile(**kw)

    def test_mollifier_smooths(self):
        from dampwave.spectral import fft_values

        raw, _ = power_data(1.8, GRID)
        smooth, _ = power_data(1.8, GRID, mollify=0.5)
        expected = fft_values(GRID, raw.values) * np.exp(-0.125 * GRID.k2)
        assert np.max(np.abs(fft_values(GRID, smooth.values) - expected)) < 1e-14

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.2, 6.0))
    def test_core_matching(self, lam):
        a, b, c = power_core_coefficients(lam)
        assert a + b + c == pytest.approx(1.0, rel=1e-13)
        # first and second derivatives in rho of rho^{-lam} at rho = 1
        assert 2 * b + 4 * c == pytest.approx(-lam, rel=1e-12)
        assert 2 * b + 12 * c == pytest.approx(lam * (lam + 1), rel=1e-12)
        rho = np.linspace(0, 1, 201)
        core = a + b * rho**2 + c * rho**4
        assert np.all(core > 0) and np.all(np.diff(core) < 0)

    @settings(max_examples=20, deadline=None)
    @given(st.sampled_from(["gaussian", "power_decay", "bump"]), st.floats(0.5, 3.0))
    def test_profiles_are_radial_and_even(self, kind, width):
        prof = DataProfile(kind, sigma=width, radius=width, core=width, lam=1.5)
        x = np.linspace(0, 5, 31)
        assert np.array_equal(radial_shape(prof, x), radial_shape(prof, np.abs(-x)))
        g = make_grid(2, 64, 60.0)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            u0, _ = make_data(prof, g)
        v = u0.values
        # the box-centred grid is symmetric about index N//2
        inner = v[1:, 1:]
        assert np.allclose(inner, inner[::-1, :], rtol=0, atol=0)
        assert np.allclose(inner, inner.T, rtol=0, atol=0)


class TestClassReport:
    def test_slow_tail_is_divergent_in_l1(self):
        g = make_grid(1, 8192, 4000.0)
        u0, u1 = power_data(0.8, g)
        rep = class_report(u0, u1, s=0.5, alpha=0.6, r=1.0)
        assert rep.slots["u0"].lr_divergent and rep.divergent
        assert rep.slots["u0"].lr_box_ratio > 1.1
        assert rep.slots["u0"].lr_exponent == pytest.approx(0.2, abs=0.02)

    def test_fast_tail_is_finite(self):
        g = make_grid(1, 8192, 4000.0)
        u0, u1 = power_data(1.8, g)
        rep = class_report(u0, u1, s=0.5, alpha=0.6, r=1.0)
        assert not rep.divergent
        assert list(rep.slots) == ["u0"]
        assert rep.slots["u0"].weighted_exponent == pytest.approx(1 + 1.2 - 3.6, abs=0.02)

    @pytest.mark.parametrize("lam", [0.9, 1.2, 1.6, 1.8, 2.4])
    @pytest.mark.parametrize("alpha", [0.6, 1.0, 1.4])
    def test_weighted_flag_matches_threshold(self, lam, alpha):
        # <x>^alpha |x|^{-lam} is square integrable on the line iff lam > 1/2 + alpha
        g = make_grid(1, 8192, 8000.0)
        u0, u1 = power_data(lam, g)
        margin = 0.05
        gap = 1 + 2 * alpha - 2 * lam
        assert abs(gap) >= margin
        rep = class_report(u0, u1, s=0.5, alpha=alpha, r=1.0, margin=margin)
        assert rep.slots["u0"].weighted_divergent == (lam <= 0.5 + alpha)

    def test_gaussian_not_divergent(self):
        u0, u1 = make_data(DataProfile(), GRID)
        rep = class_report(u0, u1, 0.5, 0.6, 1.0, grid=GRID)
        assert not rep.divergent
        assert rep.slots["u0"].lr_norm == pytest.approx(np.sqrt(2 * np.pi), rel=1e-12)

    def test_wrong_grid(self):
        u0, u1 = make_data(DataProfile(), GRID)
        with pytest.raises(ValueError):
            class_report(u0, u1, 0.5, 0.6, 1.0, grid=make_grid(1, 512, 60.0))

    def test_zero_data_reports_nothing(self):
        z = Field(GRID, np.zeros(GRID.shape))
        assert class_report(z, z, 0.5, 0.6, 1.0).slots == {}
