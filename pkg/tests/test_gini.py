"""Correlation-core tests: estimator identities, closed forms, the
regression route, lambda_w, and the BVP3 convention resolution."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ginicorr.distributions import (
    BVP1,
    BVP2,
    BVP3,
    EllipticalT,
    Normal,
    PairedSample,
    ParetoIIMargin,
    sample,
)
from ginicorr.errors import (
    DegenerateSampleError,
    MomentError,
    NoLinearRegressionError,
    UnsupportedPairError,
)
from ginicorr.gini import (
    closed_cw,
    cov_x_weighted,
    cw_via_regression,
    empirical_cw,
    empirical_pearson,
    lambda_w,
    lambda_w_empirical,
    lambda_w_margin,
    resolve_bvp3_convention,
)
from ginicorr.oracle import mc_reference, quad2_bvp3_moment, quad_cov_margin
from ginicorr.weights import WeightFunction

W_ID = WeightFunction.identity()
W_POW2 = WeightFunction.power(2.0)
W_BETA = WeightFunction.beta_cdf(2.0, 2.0)


def _random_sample(rng, n=200):
    return PairedSample(rng.standard_normal(n), rng.standard_normal(n))


class TestEmpiricalCw:
    def test_self_correlation_is_exactly_one(self):
        rng = np.random.default_rng(0)
        xs = rng.standard_gamma(1.5, 500)
        for w in (W_ID, W_POW2, W_BETA):
            s = PairedSample(xs, xs.copy())
            assert empirical_cw(s, w, n_boot=0).value == 1.0

    def test_antithetic_is_minus_one_for_identity(self):
        rng = np.random.default_rng(1)
        xs = rng.standard_exponential(401)
        got = empirical_cw(PairedSample(xs, -xs), W_ID, n_boot=0).value
        assert got == pytest.approx(-1.0, abs=1e-12)

    def test_antithetic_equals_minus_lambda_bitwise(self):
        rng = np.random.default_rng(2)
        xs = rng.standard_gamma(2.0, 350)
        for w in (W_ID, W_POW2, W_BETA):
            c = empirical_cw(PairedSample(xs, -xs), w, n_boot=0).value
            assert c == -lambda_w_empirical(xs, w)

    def test_independent_within_se(self):
        rng = np.random.default_rng(3)
        xs = rng.standard_normal(100_000)
        ys = rng.permutation(rng.standard_normal(100_000))
        rep = empirical_cw(PairedSample(xs, ys), W_POW2, n_boot=100, seed=7)
        assert rep.std_error is not None
        assert abs(rep.value) < 3.0 * rep.std_error

    def test_rank_invariance_bitwise(self):
        rng = np.random.default_rng(4)
        s = _random_sample(rng)
        base = empirical_cw(s, W_BETA, n_boot=0).value
        warped = PairedSample(s.xs, np.exp(s.ys))
        assert empirical_cw(warped, W_BETA, n_boot=0).value == base

    def test_affine_invariance_power_of_two_exact(self):
        # b a power of two and a = 0 keeps every float op exact
        rng = np.random.default_rng(5)
        s = _random_sample(rng)
        base = empirical_cw(s, W_POW2, n_boot=0).value
        scaled = PairedSample(4.0 * s.xs, s.ys)
        assert empirical_cw(scaled, W_POW2, n_boot=0).value == base

    @given(a=st.floats(-5.0, 5.0), b=st.floats(0.1, 10.0))
    @settings(max_examples=40, deadline=None)
    def test_affine_invariance_general(self, a, b):
        rng = np.random.default_rng(6)
        s = _random_sample(rng, n=100)
        base = empirical_cw(s, W_ID, n_boot=0).value
        moved = PairedSample(a + b * s.xs, s.ys)
        assert empirical_cw(moved, W_ID, n_boot=0).value == pytest.approx(base, rel=1e-11)

    @given(cube=st.floats(0.01, 3.0), lin=st.floats(0.01, 3.0),
           shift=st.floats(-4.0, 4.0))
    @settings(max_examples=40, deadline=None)
    def test_monotone_transform_invariance_bitwise(self, cube, lin, shift):
        # h(y) = cube y^3 + lin y + shift is strictly increasing
        rng = np.random.default_rng(8)
        s = _random_sample(rng, n=120)
        base = empirical_cw(s, W_POW2, n_boot=0).value
        warped = PairedSample(s.xs, cube * s.ys ** 3 + lin * s.ys + shift)
        assert empirical_cw(warped, W_POW2, n_boot=0).value == base

    def test_bounds_hold(self):
        rng = np.random.default_rng(7)
        for _ in range(200):
            s = _random_sample(rng, n=60)
            for w in (W_ID, W_POW2, W_BETA):
                c = empirical_cw(s, w, n_boot=0).value
                lam = lambda_w_empirical(s.xs, w)
                assert -lam - 1e-12 <= c <= 1.0 + 1e-12

    def test_comonotone_sign(self):
        rng = np.random.default_rng(8)
        xs = rng.standard_normal(300)
        s_up = PairedSample(xs, np.exp(xs))       # comonotone -> C_w >= 0
        s_dn = PairedSample(xs, -np.exp(xs))      # antimonotone -> C_w <= 0
        for w in (W_ID, W_POW2, W_BETA):
            assert empirical_cw(s_up, w, n_boot=0).value >= 0.0
            assert empirical_cw(s_dn, w, n_boot=0).value <= 0.0

    def test_exchangeable_symmetry(self):
        s = sample(Normal(rho=0.6), 150_000, seed=12)
        a = empirical_cw(s, W_POW2, n_boot=0).value
        b = empirical_cw(s.swapped(), W_POW2, n_boot=0).value
        assert a == pytest.approx(b, abs=0.02)
        s1 = sample(BVP1(delta=3.0), 150_000, seed=13)
        a = empirical_cw(s1, W_BETA, n_boot=0).value
        b = empirical_cw(s1.swapped(), W_BETA, n_boot=0).value
        assert a == pytest.approx(b, abs=0.02)

    def test_degenerate_raises(self):
        s = PairedSample(np.ones(10), np.arange(10.0))
        with pytest.raises(DegenerateSampleError):
            empirical_cw(s, W_ID, n_boot=0)

    def test_bootstrap_se_present_and_stable(self):
        rng = np.random.default_rng(9)
        s = _random_sample(rng, n=500)
        r1 = empirical_cw(s, W_ID, n_boot=50, seed=3)
        r2 = empirical_cw(s, W_ID, n_boot=50, seed=3)
        assert r1.std_error == r2.std_error and r1.std_error > 0.0


class TestEmpiricalPearson:
    def test_perfect_linearity(self):
        xs = np.linspace(0.0, 1.0, 50)
        assert empirical_pearson(PairedSample(xs, 2 * xs + 1), n_boot=0).value \
            == pytest.approx(1.0, abs=1e-12)
        assert empirical_pearson(PairedSample(xs, -xs), n_boot=0).value \
            == pytest.approx(-1.0, abs=1e-12)

    def test_normal_sample(self):
        s = sample(Normal(rho=0.5), 200_000, seed=20)
        assert empirical_pearson(s, n_boot=0).value == pytest.approx(0.5, abs=0.01)

    def test_degenerate(self):
        with pytest.raises(DegenerateSampleError):
            empirical_pearson(PairedSample(np.ones(5), np.arange(5.0)), n_boot=0)


class TestCovXWeighted:
    def test_delta2_power1(self):
        got = cov_x_weighted(ParetoIIMargin(0.0, 1.0, 2.0), W_ID)
        assert got == pytest.approx(-1.0 / 3.0, rel=1e-14)

    def test_tiny_gamma_vanishes(self):
        got = cov_x_weighted(ParetoIIMargin(0.0, 1.0, 3.0), WeightFunction.power(1e-12))
        assert abs(got) < 1e-11

    def test_beta_b1_equals_power(self):
        m = ParetoIIMargin(0.0, 2.0, 3.0)
        for a in (0.5, 1.0, 2.0, 4.0):
            closed_power = cov_x_weighted(m, WeightFunction.power(a))
            closed_beta = cov_x_weighted(m, WeightFunction.beta_cdf(a, 1.0))
            assert closed_beta == pytest.approx(closed_power, abs=1e-10)

    def test_against_quadrature_grid(self):
        # criterion-10 style: closed forms vs the quadrature oracle
        for d in (1.3, 1.8, 2.5, 4.0):
            m = ParetoIIMargin(0.0, 1.0, d)
            for g in (0.5, 1.0, 2.0, 5.0):
                assert cov_x_weighted(m, WeightFunction.power(g)) == pytest.approx(
                    quad_cov_margin(m, WeightFunction.power(g)), abs=1e-7)
            for a, b in ((2.0, 2.0), (0.7, 3.0), (4.0, 0.6)):
                w = WeightFunction.beta_cdf(a, b)
                assert cov_x_weighted(m, w) == pytest.approx(
                    quad_cov_margin(m, w), abs=1e-7)

    def test_negative_for_increasing_weights(self):
        m = ParetoIIMargin(1.0, 2.0, 2.2)
        for w in (W_ID, W_POW2, W_BETA):
            assert cov_x_weighted(m, w) < 0.0

    def test_table_routes_to_quadrature(self):
        m = ParetoIIMargin(0.0, 1.0, 3.0)
        w = WeightFunction.table([0.0, 0.5, 1.0], [0.0, 0.4, 1.0])
        assert cov_x_weighted(m, w) == pytest.approx(quad_cov_margin(m, w), rel=1e-9)

    def test_moment_error(self):
        with pytest.raises(MomentError):
            cov_x_weighted(ParetoIIMargin(0.0, 1.0, 1.0), W_ID)


class TestLambdaW:
    def test_identity_weight_is_one_margin(self):
        got = lambda_w_margin(ParetoIIMargin(0.0, 1.0, 3.0), W_ID)
        assert got == pytest.approx(1.0, abs=1e-8)

    def test_identity_weight_is_one_empirical(self):
        rng = np.random.default_rng(10)
        xs = rng.standard_gamma(2.0, 2000)
        assert lambda_w_empirical(xs, W_ID) == pytest.approx(1.0, abs=1e-12)

    def test_pareto_power2_frozen_value(self):
        # frozen pre-build: exact beta-integral arithmetic gives 1.4
        got = lambda_w_margin(ParetoIIMargin(0.0, 1.0, 3.0), W_POW2)
        assert got == pytest.approx(1.4, abs=1e-8)

    def test_dispatch(self):
        rng = np.random.default_rng(11)
        xs = rng.standard_normal(500)
        s = PairedSample(xs, xs)
        assert lambda_w(s, W_POW2) == lambda_w_empirical(xs, W_POW2)
        assert lambda_w(xs, W_POW2) == lambda_w_empirical(xs, W_POW2)
        m = ParetoIIMargin(0.0, 1.0, 3.0)
        assert lambda_w(m, W_POW2) == pytest.approx(1.4, abs=1e-8)

    def test_empirical_converges_to_margin_value(self):
        m = ParetoIIMargin(0.0, 1.0, 3.0)
        u = (np.arange(50_000) + 0.5) / 50_000
        xs = m.quantile(u)  # deterministic stratified sample
        assert lambda_w_empirical(xs, W_POW2) == pytest.approx(1.4, abs=2e-3)


class TestClosedCw:
    def test_normal_any_weight(self):
        f = Normal(rho=0.37)
        for w in (W_ID, W_POW2, W_BETA, WeightFunction.beta_cdf(2.0, 3.0)):
            rep = closed_cw(f, w)
            assert rep.value == 0.37
            assert rep.method == "closed_form" and rep.std_error is None

    def test_elliptical_t(self):
        f = EllipticalT(sigma_x=2.0, sigma_y=0.5, sigma_xy=0.3, nu=1.5)
        assert closed_cw(f, W_BETA).value == pytest.approx(0.3 / (2.0 * 0.5))

    def test_bvp1_every_weight_and_gamma(self):
        for g in (0.5, 1.0, 2.0):
            got = closed_cw(BVP1(delta=5.87), WeightFunction.power(g)).value
            assert got == pytest.approx(1.0 / 5.87, rel=1e-14)
            assert got == pytest.approx(0.17036, abs=1e-5)

    def test_bvp2_power_example(self):
        got = closed_cw(BVP2(delta=2.1, delta_y=0.5254), W_ID).value
        assert got == pytest.approx((1 / 2.1) * (3.2 / 4.2508), rel=1e-12)

    def test_bvp2_beta_reduction_to_power(self):
        f = BVP2(delta=2.1, delta_y=0.5254)
        for a in (0.5, 1.0, 2.0, 3.7):
            pw = closed_cw(f, WeightFunction.power(a)).value
            bt = closed_cw(f, WeightFunction.beta_cdf(a, 1.0)).value
            assert bt == pytest.approx(pw, abs=1e-10)

    def test_bvp2_table_unsupported_names_route(self):
        w = WeightFunction.table([0.0, 1.0], [0.0, 1.0])
        with pytest.raises(UnsupportedPairError) as err:
            closed_cw(BVP2(delta=2.1, delta_y=0.5254), w)
        assert "regression" in err.value.suggestion or "empirical" in err.value.suggestion

    def test_bvp1_moment_error(self):
        with pytest.raises(MomentError):
            closed_cw(BVP1(delta=1.0), W_ID)

    def test_bvp3_convention_resolution(self):
        assert resolve_bvp3_convention() == "mixed_partial"
        rep = closed_cw(BVP3(delta=1.8, delta_x=1.2, delta_y=0.7), W_ID)
        assert rep.detail["di_convention"] == "mixed_partial"

    def test_bvp3_matches_quadrature_oracle(self):
        f = BVP3(delta=1.8, delta_x=1.2, delta_y=0.7)
        got = closed_cw(f, WeightFunction.power(1.5)).value
        assert got == pytest.approx(quad2_bvp3_moment(f, 1.5), abs=1e-6)

    def test_bvp3_mc_cross_check(self):
        f = BVP3(delta=1.8, delta_x=1.2, delta_y=0.7)
        mean, se = mc_reference(f, "cw", 50_000, seed=31, replications=12,
                                weight=W_ID)
        assert abs(mean - closed_cw(f, W_ID).value) < 4 * se

    def test_bvp3_beta_weight_unsupported(self):
        with pytest.raises(UnsupportedPairError):
            closed_cw(BVP3(delta=1.8, delta_x=1.2, delta_y=0.7), W_BETA)

    def test_bvp3_moment_error_precedes_margin(self):
        # delta_x* > 1 forces h = delta_x + (gamma+1) delta_y* - 1
        #   > gamma delta + (gamma+1) delta_y > 0,
        # so the moment check is the only reachable gate for valid families
        f = BVP3(delta=0.2, delta_x=0.5, delta_y=0.05)
        with pytest.raises(MomentError):
            closed_cw(f, WeightFunction.power(0.1))

    @given(delta=st.floats(0.05, 5.0), dx=st.floats(0.01, 5.0),
           dy=st.floats(0.01, 5.0), gamma=st.floats(0.01, 10.0))
    @settings(max_examples=100, deadline=None)
    def test_bvp3_margin_positive_whenever_mean_finite(self, delta, dx, dy, gamma):
        if delta + dx > 1.0:
            h = dx + (gamma + 1.0) * (delta + dy) - 1.0
            assert h > 0.0


class TestRegressionRoute:
    def test_bvp1_collapses_to_1_over_delta(self):
        for w in (W_ID, W_POW2, W_BETA):
            got = cw_via_regression(BVP1(mu_x=1.0, mu_y=-2.0, sigma_x=2.0,
                                         sigma_y=0.7, delta=2.5), w).value
            assert got == pytest.approx(1.0 / 2.5, rel=1e-12)

    def test_normal_gives_rho(self):
        got = cw_via_regression(Normal(rho=0.5), WeightFunction.power(3.0)).value
        assert got == pytest.approx(0.5, rel=1e-8)

    def test_elliptical_t_gives_dispersion_correlation(self):
        f = EllipticalT(sigma_x=1.5, sigma_y=0.8, sigma_xy=0.6, nu=2.5)
        got = cw_via_regression(f, W_POW2).value
        assert got == pytest.approx(0.6 / (1.5 * 0.8), rel=1e-8)

    def test_consistency_triangle_bvp2(self):
        f = BVP2(delta=2.1, delta_y=0.5254)
        for w in (W_ID, W_POW2, W_BETA, WeightFunction.beta_cdf(2.0, 3.0)):
            closed = closed_cw(f, w).value
            regress = cw_via_regression(f, w).value
            assert regress == pytest.approx(closed, abs=1e-9)

    def test_triangle_empirical_leg(self):
        f = BVP2(delta=2.1, delta_y=0.5254)
        w = W_BETA
        closed = closed_cw(f, w).value
        mean, se = mc_reference(f, "cw", 100_000, seed=44, replications=10, weight=w)
        assert abs(mean - closed) < 3 * se

    def test_bvp2_table_weight_via_quadrature(self):
        # the route closed_cw points to for unsupported pairs
        f = BVP2(delta=2.1, delta_y=0.5254)
        w = WeightFunction.table([0.0, 0.5, 1.0], [0.0, 0.2, 1.0])
        got = cw_via_regression(f, w).value
        mean, se = mc_reference(f, "cw", 100_000, seed=45, replications=10, weight=w)
        assert abs(mean - got) < 3 * se

    def test_bvp3_propagates(self):
        with pytest.raises(NoLinearRegressionError):
            cw_via_regression(BVP3(delta=2.0, delta_x=1.0, delta_y=0.5), W_ID)
