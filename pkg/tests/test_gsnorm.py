import math

import numpy as np
import pytest

from awsym import (WeightParams, e_space_norm, gaussian_1d,
                   gevrey_order_estimate, gs_constant, hermite_bound_margin,
                   hermite_l2_log_margin, hermite_sup, holo_bound_check,
                   phi_weight, psi_weight)
from awsym.gaussians import AnalyticGaussianSum, GaussFactor
from awsym.gsnorm import e_space_divergent


def grower():
    """e^{+z^2}: entire, but blows up along the real axis."""
    return AnalyticGaussianSum(1, ((GaussFactor(1.0, 0, -1.0, 0.0),),))


def constant_one():
    return AnalyticGaussianSum(1, ((GaussFactor(1.0, 0, 0.0, 0.0),),))


class TestWeights:
    def test_phi_value(self):
        # (lambda/2) |x/A|^{1/lambda} at lambda=1/2, A=1, x=1: 0.25 * 1^2
        w = WeightParams(0.5, 0.25, 1.0)
        assert phi_weight(1.0, w) == pytest.approx(0.25)

    def test_psi_value(self):
        # 2 (1-mu) |A y|^{1/(1-mu)} at mu=1/4, A=1, y=1: 1.5
        w = WeightParams(0.5, 0.25, 1.0)
        assert psi_weight(1.0, w) == pytest.approx(1.5)

    def test_phi_at_origin(self):
        w = WeightParams(1.7, 0.45, 2.3)
        assert phi_weight(0.0, w) == 0.0

    def test_param_validation(self):
        with pytest.raises(ValueError):
            WeightParams(0.0, 0.25, 1.0)
        with pytest.raises(ValueError):
            WeightParams(0.5, 1.0, 1.0)
        with pytest.raises(ValueError):
            WeightParams(0.5, 0.25, 0.0)


class TestGSConstant:
    def test_gaussian_is_finite_and_stabilizes(self):
        u = gaussian_1d(math.pi)
        est10 = gs_constant(u, 0.5, 0.5, 10, 10)
        est20 = gs_constant(u, 0.5, 0.5, 20, 20)
        assert np.isfinite(est10.a_est)
        assert est20.a_est <= 1.25 * est10.a_est

    def test_constant_reports_unbounded(self):
        est = gs_constant(constant_one(), 0.5, 0.5, 6, 6)
        assert est.unbounded
        assert est.a_est == math.inf

    def test_monotone_in_exponents(self):
        u = gaussian_1d(math.pi)
        tight = gs_constant(u, 0.5, 0.5, 10, 10)
        loose = gs_constant(u, 1.0, 1.0, 10, 10)
        assert loose.a_est <= tight.a_est

    def test_cumulative_record_nondecreasing(self):
        est = gs_constant(gaussian_1d(math.pi), 0.5, 0.5, 8, 8)
        rec = np.asarray(est.a_by_total_order)
        assert np.all(np.diff(rec) >= 0.0)

    def test_derivative_sups_against_hermite_recurrence(self):
        # independent oracle: sup |d^m e^{-pi x^2}| = (2 pi)^{m/2} sup|f_m|
        from awsym.gaussians import sum_derivative_values
        u = gaussian_1d(math.pi)
        xs = np.linspace(-6, 6, 20001)
        for m in (3, 7, 12):
            mine = np.max(np.abs(sum_derivative_values(u, [m], [xs])))
            oracle = (2 * math.pi) ** (m / 2.0) * hermite_sup(m)
            assert mine == pytest.approx(oracle, rel=1e-5)

    def test_order_cap(self):
        with pytest.raises(ValueError):
            gs_constant(gaussian_1d(1.0), 0.5, 0.5, 50, 10)


class TestHoloBound:
    def test_member_passes(self):
        u = gaussian_1d(math.pi)
        est = gs_constant(u, 0.5, 0.45, 16, 16)
        res = holo_bound_check(u, WeightParams(0.5, 0.45, est.a_est),
                               4.0, 2.5)
        assert res.ok
        assert res.k_est >= 1.0

    def test_grower_fails(self):
        res = holo_bound_check(grower(), WeightParams(0.5, 0.45, 1.0),
                               4.0, 2.5)
        assert not res.ok

    def test_real_axis_slice_matches_scan(self):
        # y -> 0 reduces the check to sup e^{phi(x)} |u(x)|
        u = gaussian_1d(math.pi)
        w = WeightParams(0.5, 0.45, 2.0)
        res = holo_bound_check(u, w, 4.0, 1e-9)
        xs = np.linspace(-4, 4, 201)
        scan = np.max(np.exp(phi_weight(xs[None, :], w))
                      * np.abs(u(xs.astype(complex))))
        assert res.k_est == pytest.approx(scan, rel=1e-6)


class TestESpace:
    def test_standard_gaussian_value_and_stability(self):
        # analytically: int e^{-2 pi y^2} e^{-pi(x^2 - y^2)} dx dy = 1
        r3 = e_space_norm(gaussian_1d(math.pi), 0, 3.0)
        r4 = e_space_norm(gaussian_1d(math.pi), 0, 4.0)
        assert not r3.divergent
        assert r3.value == pytest.approx(1.0, abs=1e-10)
        assert abs(r4.value - r3.value) <= 0.01 * r3.value

    def test_divergence_flag_above_two_pi(self):
        r = e_space_norm(gaussian_1d(2 * math.pi + 0.1), 0, 3.0)
        assert r.divergent
        assert r.value == math.inf
        assert e_space_divergent(gaussian_1d(2 * math.pi + 0.1))

    def test_zero_function(self):
        u = 0.0 * gaussian_1d(1.0)
        r = e_space_norm(u, 0, 3.0)
        assert r.value == pytest.approx(0.0, abs=1e-14)

    def test_moment_weight_and_cap(self):
        r0 = e_space_norm(gaussian_1d(1.0), 0, 3.0)
        r2 = e_space_norm(gaussian_1d(1.0), 2, 3.0)
        assert r2.value > r0.value
        with pytest.raises(ValueError):
            e_space_norm(gaussian_1d(1.0), 17, 3.0)


class TestHermite:
    def test_order_zero(self):
        assert hermite_sup(0) == pytest.approx(1.0, abs=1e-12)
        bound = math.sqrt(2.0) * (2 * math.pi) ** 0.25
        assert hermite_bound_margin(0) == pytest.approx(bound, rel=1e-12)

    def test_order_one(self):
        # sup |x e^{-x^2/2}| = e^{-1/2} at x = 1
        assert hermite_sup(1) == pytest.approx(math.exp(-0.5), rel=1e-6)
        assert hermite_bound_margin(1) > 1.0

    def test_margins_up_to_sixty(self):
        assert all(hermite_bound_margin(m) >= 1.0 for m in range(61))

    def test_l2_margin_nonnegative(self):
        assert all(hermite_l2_log_margin(m) >= 0.0 for m in (0, 1, 5, 20, 60))

    def test_l2_margin_order_zero_value(self):
        # ||e^{-x^2/2}||^2 = sqrt(pi); margin log(sqrt(2 pi)/sqrt(pi))
        assert hermite_l2_log_margin(0) == pytest.approx(
            0.5 * math.log(2.0), abs=1e-10)

    def test_order_cap(self):
        with pytest.raises(ValueError):
            hermite_sup(201)


class TestGevrey:
    def test_gaussian_order_half(self):
        fit = gevrey_order_estimate(gaussian_1d(0.25), 40)
        assert fit.s_est <= 0.6
        assert fit.fit_residual < 0.05
        assert not fit.degenerate

    def test_smoothed_sum(self):
        f = gaussian_1d(1.5, center=0.3) + gaussian_1d(3.0, power=1,
                                                       coeff=0.5)
        fit = gevrey_order_estimate(f.smoothed(), 40)
        assert fit.s_est <= 0.6
        assert fit.fit_residual < 0.05

    def test_scale_invariance(self):
        f1 = gevrey_order_estimate(gaussian_1d(0.25), 30)
        f2 = gevrey_order_estimate(7.3 * gaussian_1d(0.25), 30)
        assert f1.s_est == pytest.approx(f2.s_est, abs=1e-9)

    def test_degenerate_flag(self):
        assert gevrey_order_estimate(constant_one(), 30).degenerate

    def test_m_max_cap(self):
        with pytest.raises(ValueError):
            gevrey_order_estimate(gaussian_1d(1.0), 61)


class TestProofChainInequalities:
    """The scalar bounds used to derive the strip estimate."""

    def test_sup_power_over_factorial(self):
        # sup_k x^k / k! >= e^{x/2} / 2 for x > 0
        ks = np.arange(0, 400)
        log_fact = np.cumsum(np.log(np.maximum(ks, 1)))
        for x in np.logspace(-2, 2, 41):
            sup_log = np.max(ks * math.log(x) - log_fact)
            assert sup_log >= 0.5 * x - math.log(2.0) - 1e-12

    def test_power_series_bound(self):
        # sum_k (x^k/k!)^nu <= C e^{2 nu x}, C = 1/(1 - 2^{-nu})
        ks = np.arange(0, 400)
        log_fact = np.cumsum(np.log(np.maximum(ks, 1)))
        for nu in (0.55, 1.0):
            c = 1.0 / (1.0 - 2.0**-nu)
            for x in np.logspace(-2, 2, 41):
                total = np.sum(np.exp(nu * (ks * math.log(x) - log_fact)))
                assert total <= c * math.exp(2 * nu * x) * (1 + 1e-12)
