"""Grid construction, transforms and multiplier algebra."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dampwave.norms import lp_norm
from dampwave.spectral import (
    Field,
    SpectralField,
    apply_multiplier,
    boundary_ratio,
    dealias,
    directional_fractional,
    filter_field,
    forward_transform,
    fractional_laplacian_power,
    inverse_transform,
    make_grid,
    multiplier_array,
    weight_multiply,
)


class TestGrid:
    def test_origin_is_center_sample(self):
        g = make_grid(1, 64, 10.0)
        assert g.x_axis[32] == 0.0
        assert g.x_axis[0] == -5.0

    def test_shapes_and_spacing(self):
        g = make_grid(2, 32, 8.0)
        assert g.shape == (32, 32)
        assert g.k2.shape == (32, 32)
        assert g.dx == pytest.approx(0.25)
        assert g.dxi == pytest.approx(2 * np.pi / 8.0)

    def test_arrays_are_read_only(self):
        g = make_grid(1, 16, 1.0)
        with pytest.raises(ValueError):
            g.k2[0] = 1.0

    @pytest.mark.parametrize("args", [(4, 16, 1.0), (1, 15, 1.0), (1, 6, 1.0), (1, 16, 0.0)])
    def test_invalid_arguments(self, args):
        with pytest.raises(ValueError):
            make_grid(*args)

    def test_dealias_mask_keeps_two_thirds(self):
        g = make_grid(1, 96, 1.0)
        assert g.dealias_mask.sum() == 2 * 32 + 1

    def test_field_shape_checked(self):
        g = make_grid(1, 16, 1.0)
        with pytest.raises(ValueError, match="does not match"):
            Field(g, np.zeros(8))


class TestTransforms:
    def test_gaussian_transform_matches_unitary_formula(self):
        g = make_grid(1, 256, 40.0)
        f = Field(g, np.exp(-0.5 * g.r2))
        F = forward_transform(f).coeffs
        assert np.max(np.abs(F - np.exp(-0.5 * g.k2))) < 1e-13

    def test_round_trip(self):
        rng = np.random.default_rng(1)
        g = make_grid(2, 16, 3.0)
        f = Field(g, rng.standard_normal(g.shape))
        back = inverse_transform(forward_transform(f))
        assert np.max(np.abs(back.values - f.values)) < 1e-14

    def test_real_field_is_hermitian(self):
        rng = np.random.default_rng(2)
        g = make_grid(2, 16, 3.0)
        F = forward_transform(Field(g, rng.standard_normal(g.shape)))
        assert F.hermitian_defect() < 1e-14

    def test_grid_mismatch_rejected(self):
        g1, g2 = make_grid(1, 16, 1.0), make_grid(1, 16, 2.0)
        with pytest.raises(ValueError, match="grid mismatch"):
            forward_transform(Field.zeros(g1), g2)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(min_value=0, max_value=2**32 - 1))
    def test_parseval(self, seed):
        rng = np.random.default_rng(seed)
        g = make_grid(1, 64, 7.0)
        f = Field(g, rng.standard_normal(g.shape))
        F = forward_transform(f).coeffs
        spectral = math.sqrt(np.sum(np.abs(F) ** 2) * g.dxi)
        assert spectral == pytest.approx(lp_norm(f, 2), rel=1e-12)


class TestMultipliers:
    def test_callable_multiplier_with_parameters(self):
        g = make_grid(1, 32, 2 * np.pi)
        m = multiplier_array(g, lambda k, a: k**a, a=2.0)
        assert np.allclose(m, g.k2)

    def test_nonfinite_multiplier_rejected(self):
        g = make_grid(1, 32, 2 * np.pi)
        with pytest.raises(ValueError, match="not finite"):
            multiplier_array(g, np.where(g.kabs > 0, 1.0, np.inf))

    def test_apply_multiplier_scales_coefficients(self):
        g = make_grid(1, 32, 2 * np.pi)
        F = SpectralField(g, np.ones(g.shape))
        assert np.allclose(apply_multiplier(F, 3.0).coeffs, 3.0)

    def test_laplacian_power_one_on_sine(self):
        g = make_grid(1, 64, 2 * np.pi)
        f = Field(g, np.sin(3 * g.x_axis))
        out = fractional_laplacian_power(f, 2.0)
        assert np.max(np.abs(out.values - 9 * f.values)) < 1e-12

    def test_laplacian_power_zero_is_identity_copy(self):
        g = make_grid(1, 16, 1.0)
        f = Field(g, np.arange(16.0))
        out = fractional_laplacian_power(f, 0.0)
        assert out is not f and np.array_equal(out.values, f.values)

    def test_negative_order_rejected(self):
        g = make_grid(1, 16, 1.0)
        with pytest.raises(ValueError):
            fractional_laplacian_power(Field.zeros(g), -0.5)

    def test_directional_acts_on_one_axis(self):
        g = make_grid(2, 32, 2 * np.pi)
        f = Field(g, np.cos(2 * g.x[0]) * np.cos(g.x[1]))
        out = directional_fractional(f, 0, 0.5)
        assert np.max(np.abs(out.values - math.sqrt(2) * f.values)) < 1e-12

    @pytest.mark.parametrize("omega", [0.0, 1.0])
    def test_directional_order_range(self, omega):
        g = make_grid(1, 16, 1.0)
        with pytest.raises(ValueError):
            directional_fractional(Field.zeros(g), 0, omega)

    def test_semigroup_of_powers(self):
        rng = np.random.default_rng(4)
        g = make_grid(1, 64, 10.0)
        f = filter_field(Field(g, rng.standard_normal(g.shape)), np.exp(-g.k2))
        a = fractional_laplacian_power(fractional_laplacian_power(f, 0.3), 0.4)
        b = fractional_laplacian_power(f, 0.7)
        assert np.max(np.abs(a.values - b.values)) < 1e-12

    def test_dealias_zeroes_high_band(self):
        g = make_grid(1, 48, 1.0)
        out = dealias(np.ones(g.shape, dtype=complex), g)
        assert np.all(out[~g.dealias_mask] == 0) and np.all(out[g.dealias_mask] == 1)


class TestWeights:
    def test_inhomogeneous_weight(self):
        g = make_grid(1, 16, 4.0)
        f = Field(g, np.ones(g.shape))
        out = weight_multiply(f, 2.0)
        assert np.allclose(out.values, 1 + g.r2)

    def test_homogeneous_weight_vanishes_at_origin(self):
        g = make_grid(1, 16, 4.0)
        out = weight_multiply(Field(g, np.ones(g.shape)), 1.0, homogeneous=True)
        assert out.values[8] == 0.0

    def test_boundary_ratio(self):
        g = make_grid(1, 64, 40.0)
        assert boundary_ratio(Field(g, np.exp(-g.r2))) < 1e-100
        assert boundary_ratio(Field(g, np.ones(g.shape))) == 1.0
