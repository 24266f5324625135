import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from shelab import kernel
from shelab.errors import DomainError

mpmath.mp.dps = 50


def mp_kernel(t, x):
    t, x = mpmath.mpf(t), mpmath.mpf(x)
    return mpmath.exp(-x * x / (2 * t)) / mpmath.sqrt(2 * mpmath.pi * t)


class TestHeatKernel:
    def test_value_t1_x0(self):
        assert kernel.heat_kernel(1.0, 0.0) == pytest.approx(1.0 / math.sqrt(2 * math.pi), abs=1e-15)
        assert kernel.heat_kernel(1.0, 0.0) == pytest.approx(0.398942, abs=1e-6)

    def test_value_t2_x0(self):
        assert kernel.heat_kernel(2.0, 0.0) == pytest.approx(1.0 / (2 * math.sqrt(math.pi)), abs=1e-15)
        assert kernel.heat_kernel(2.0, 0.0) == pytest.approx(0.282095, abs=1e-6)

    def test_even_in_x(self):
        assert kernel.heat_kernel(0.5, 1.3) == kernel.heat_kernel(0.5, -1.3)

    def test_matches_high_precision(self):
        for t, x in [(0.3, 0.7), (4.0, -2.0), (1e-3, 0.05)]:
            ref = float(mp_kernel(t, x))
            assert kernel.heat_kernel(t, x) == pytest.approx(ref, rel=1e-14)

    def test_rejects_nonpositive_t(self):
        with pytest.raises(DomainError):
            kernel.heat_kernel(0.0, 1.0)
        with pytest.raises(DomainError):
            kernel.heat_kernel(-1.0, 1.0)

    def test_normalization(self):
        for t in [0.01, 0.5, 1.0, 7.0]:
            assert abs(kernel.integral_normalization_residual(t)) < 1e-8

    @given(st.floats(1e-3, 50.0), st.floats(-8.0, 8.0))
    @settings(max_examples=200, deadline=None)
    def test_positive_and_symmetric(self, t, sigmas):
        # Positivity is checked within 8 standard deviations; far tails
        # underflow to exactly 0.0 in float64, which is the correct rounding.
        x = sigmas * math.sqrt(t)
        v = kernel.heat_kernel(t, x)
        assert v > 0.0
        assert v == kernel.heat_kernel(t, -x)


class TestSquareIdentity:
    def test_at_origin(self):
        # Both sides equal 1/(2*pi) at t=1, x=0.
        assert kernel.heat_kernel(1.0, 0.0) ** 2 == pytest.approx(1.0 / (2 * math.pi), abs=1e-15)
        assert kernel.square_identity_residual(1.0, 0.0) == pytest.approx(0.0, abs=1e-16)

    @pytest.mark.parametrize("t,x", [(0.3, 0.7), (4.0, -2.0)])
    def test_relative_residual(self, t, x):
        # Oracle: in 50-digit arithmetic the identity is exact to ~1e-45.
        lhs = mp_kernel(t, x) ** 2
        rhs = mp_kernel(t / 2, x) / mpmath.sqrt(4 * mpmath.pi * t)
        assert abs(float((lhs - rhs) / lhs)) < 1e-40
        res = kernel.square_identity_residual(t, x)
        assert abs(res) / kernel.heat_kernel(t, x) ** 2 < 1e-12

    def test_random_sweep(self):
        rng = np.random.default_rng(7)
        t = np.exp(rng.uniform(np.log(1e-3), np.log(10.0), size=10_000))
        x = rng.uniform(-6.0, 6.0, size=10_000) * np.sqrt(t)
        rel = np.abs(kernel.square_identity_residual(t, x)) / kernel.heat_kernel(t, x) ** 2
        assert float(np.max(rel)) < 1e-12


class TestProductDecomposition:
    def test_symmetric_point(self):
        # lhs = G_1(0)^2 = 1/(2*pi).
        lhs = kernel.heat_kernel(1.0, 0.0) * kernel.heat_kernel(1.0, 0.0)
        assert lhs == pytest.approx(1.0 / (2 * math.pi), abs=1e-15)
        assert kernel.product_decomposition_residual(1.0, 1.0, 0.0, 0.0) == pytest.approx(0.0, abs=1e-16)

    @pytest.mark.parametrize("t,s,x,y", [(0.2, 0.8, 1.0, -0.5), (3.0, 0.1, -2.0, 2.0)])
    def test_relative_residual(self, t, s, x, y):
        # Oracle: evaluate both sides entirely in 50-digit arithmetic.
        T, S, X, Y = (mpmath.mpf(v) for v in (t, s, x, y))
        lhs = mp_kernel(T, X) * mp_kernel(S, Y)
        rhs = mp_kernel(T + S, X - Y) * mp_kernel(T * S / (T + S), (S * X + T * Y) / (T + S))
        assert abs(float((lhs - rhs) / lhs)) < 1e-40
        res = kernel.product_decomposition_residual(t, s, x, y)
        denom = kernel.heat_kernel(t, x) * kernel.heat_kernel(s, y)
        assert abs(res) / denom < 1e-12

    def test_random_sweep(self):
        rng = np.random.default_rng(11)
        t = np.exp(rng.uniform(np.log(1e-3), np.log(10.0), size=10_000))
        s = np.exp(rng.uniform(np.log(1e-3), np.log(10.0), size=10_000))
        x = rng.uniform(-6.0, 6.0, size=10_000) * np.sqrt(t)
        y = rng.uniform(-6.0, 6.0, size=10_000) * np.sqrt(s)
        denom = kernel.heat_kernel(t, x) * kernel.heat_kernel(s, y)
        rel = np.abs(kernel.product_decomposition_residual(t, s, x, y)) / denom
        assert float(np.max(rel)) < 1e-12


class TestSemigroup:
    def test_through_origin(self):
        res = kernel.semigroup_residual(1.0, 0.5, 0.0, 0.0, 0.0)
        assert abs(res) < 1e-8
        assert kernel.heat_kernel(1.0, 0.0) == pytest.approx(0.398942, abs=1e-6)

    def test_offset_points(self):
        assert abs(kernel.semigroup_residual(2.0, 1.0, 0.0, 1.0, -1.0)) < 1e-8

    def test_degenerate_limit(self):
        assert kernel.semigroup_residual(1.0, 1e-14, 0.0, 0.3, -0.2) == 0.0

    def test_ordering_enforced(self):
        with pytest.raises(DomainError):
            kernel.semigroup_residual(1.0, 1.5, 0.0, 0.0, 0.0)

    def test_random_instances(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            times = np.sort(rng.uniform(1e-2, 3.0, size=3))
            r, s, t = times
            x, z = rng.uniform(-3.0, 3.0, size=2)
            rel = abs(kernel.semigroup_residual(t, s, r, x, z)) / kernel.heat_kernel(t - r, x - z)
            assert rel < 1e-6


class TestSquaredKernelIntegral:
    def test_coincident_points(self):
        # Closed form sqrt(pi/4) * G_1(0)^2 at t=1, r=0, x=z.
        closed = math.sqrt(math.pi / 4.0) * kernel.heat_kernel(1.0, 0.0) ** 2
        assert closed == pytest.approx(0.14105, abs=1e-5)
        res = kernel.squared_kernel_integral_residual(1.0, 0.0, 0.4, 0.4)
        assert abs(res) / closed < 1e-6

    def test_offset_points(self):
        closed = math.sqrt(math.pi / 4.0) * kernel.heat_kernel(1.0, 1.0) ** 2
        res = kernel.squared_kernel_integral_residual(2.0, 1.0, 1.0, 0.0)
        assert abs(res) / closed < 1e-6

    def test_half_beta_integral(self):
        assert kernel.half_beta_integral() == pytest.approx(math.pi, rel=1e-10)


class TestProductBound:
    def test_reference_instance(self):
        inst = kernel.ProductBoundInstance(theta=0.1, r=0.2, t=0.5, T=1.0, x=0.0, z=0.0, w=0.0)
        lhs, rhs = kernel.product_bound_pair(inst)
        assert lhs == pytest.approx(0.4596, abs=2e-4)
        assert rhs == pytest.approx(13.18, abs=0.05)
        assert lhs <= rhs

    def test_far_tail_vanishes(self):
        inst = kernel.ProductBoundInstance(theta=0.1, r=0.2, t=0.5, T=1.0, x=40.0, z=0.0, w=0.5)
        lhs, rhs = kernel.product_bound_pair(inst)
        assert lhs < 1e-200
        assert lhs <= rhs

    def test_ordering_violations(self):
        with pytest.raises(DomainError):
            kernel.ProductBoundInstance(theta=0.3, r=0.2, t=0.5, T=1.0, x=0.0, z=0.0, w=0.0)
        with pytest.raises(DomainError):
            kernel.ProductBoundInstance(theta=0.2, r=0.2 + 1e-14, t=0.5, T=1.0, x=0.0, z=0.0, w=0.0)

    @pytest.mark.parametrize("T", [0.5, 1.0, 4.0])
    def test_sweep_no_violations(self, T):
        theta, r, t, x, z, w = kernel.sample_product_bound_instances(20_000, T, seed=42)
        lhs, rhs = kernel.product_bound_sides(theta, r, t, T, x, z, w)
        assert np.all(lhs <= rhs)


class TestSingularityIntegrals:
    def test_midpoint_closed_form(self):
        t = 1.0
        r = t / 2.0
        int1, bound1, _, _ = kernel.singularity_integral_bounds(r, 0.75, t)
        assert int1 == pytest.approx(2.0 * math.sqrt(2.0 * t), rel=1e-12)
        assert int1 <= bound1

    def test_reference_instance(self):
        int1, bound1, int2, bound2 = kernel.singularity_integral_bounds(0.2, 0.6, 1.0)
        assert bound2 == pytest.approx(8.0 / math.sqrt(0.4), rel=1e-12)
        assert bound2 == pytest.approx(12.649, abs=1e-3)
        assert int1 <= bound1
        assert int2 <= bound2

    def test_near_degenerate_gap_sweep(self):
        # As s -> r+ the integral grows without bound while the bound grows
        # like (s-r)^(-1/2), so the ratio stays <= 1 across the sweep.
        t = 1.0
        r = 0.3
        previous = 0.0
        for gap in [1e-1, 1e-2, 1e-3, 1e-4]:
            _, _, int2, bound2 = kernel.singularity_integral_bounds(r, r + gap, t)
            assert int2 <= bound2
            assert int2 > previous
            previous = int2

    def test_random_sweep(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            times = np.sort(rng.uniform(1e-3, 4.0, size=3))
            r, s, t = times
            if s - r < 1e-9:
                continue
            int1, bound1, int2, bound2 = kernel.singularity_integral_bounds(r, s, t)
            assert int1 <= bound1
            assert int2 <= bound2


class TestMonotonicity:
    def test_equal_times(self):
        assert kernel.monotonicity_check(0.7, 0.7, 1.3)

    def test_spec_point(self):
        # At x=0 the inequality is an equality: G_s(0) = sqrt(t/s) G_t(0).
        assert kernel.heat_kernel(0.1, 0.0) == pytest.approx(1.26157, abs=1e-5)
        assert kernel.heat_kernel(0.1, 0.0) == pytest.approx(
            math.sqrt(10.0) * kernel.heat_kernel(1.0, 0.0), rel=1e-14)
        assert kernel.monotonicity_check(0.1, 1.0, 0.0)

    @given(st.floats(1e-3, 5.0), st.floats(1e-3, 5.0), st.floats(-10.0, 10.0))
    @settings(max_examples=300, deadline=None)
    def test_property_sweep(self, a, b, x):
        s, t = min(a, b), max(a, b)
        assert kernel.monotonicity_check(s, t, x)
