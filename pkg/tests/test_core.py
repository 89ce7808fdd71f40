import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate

from cwlab.core import (
    CenteredNormal,
    DiracZero,
    ModelParams,
    NoPositiveRootError,
    QuarticTilt,
    TwoPointMix,
    double_factorial,
    f_beta,
    f_beta_derivatives,
    limit_law_for,
    limit_moment,
    spontaneous_magnetization,
)

# Frozen oracle values. The root was produced by plain interval bisection on
# x - tanh(beta*x) run at 30-digit precision; the quartic moment comes from
# quadrature of the moment ratio (reproduced below at float precision).
M_OF_2 = 0.95750402407726874
QUARTIC_M2 = 1.1708286566075289
QUARTIC_NORMALIZER = 3.3740101978000252


def bisect_root(f, lo, hi, steps=200):
    """Plain bisection, independent of the package's solver."""
    assert f(lo) < 0 <= f(hi)
    for _ in range(steps):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def quartic_moment_by_quadrature(k):
    density = lambda t: math.exp(-(t**4) / 12.0)
    num, _ = integrate.quad(lambda t: t**k * density(t), -30, 30, limit=200)
    den, _ = integrate.quad(density, -30, 30, limit=200)
    return num / den


class TestModelParams:
    def test_valid(self):
        p = ModelParams(0.0, 1)
        assert p.beta == 0.0 and p.n == 1

    @pytest.mark.parametrize("beta,n", [(-0.1, 5), (float("nan"), 5), (1.0, 0), (1.0, -3)])
    def test_invalid(self, beta, n):
        with pytest.raises(ValueError):
            ModelParams(beta, n)


class TestFBeta:
    def test_zero(self):
        assert f_beta(1.0, 0.0) == 0.0

    def test_frozen_value(self):
        # oracle: 1 - ln cosh 1, evaluated directly
        assert f_beta(0.5, 1.0) == pytest.approx(1.0 - math.log(math.cosh(1.0)), rel=1e-14)
        assert f_beta(0.5, 1.0) == pytest.approx(0.56621916951697281, rel=1e-14)

    @pytest.mark.parametrize("t", [0.5, 1.0, 3.0])
    def test_even(self, t):
        assert f_beta(2.0, t) == f_beta(2.0, -t)

    def test_no_overflow_at_huge_argument(self):
        value = f_beta(1.0, 700.0)
        assert math.isfinite(value)
        # ln cosh(t) ~ |t| - ln 2 far out
        assert value == pytest.approx(700.0**2 / 2.0 - 700.0 + math.log(2.0), rel=1e-12)

    def test_rejects_beta_zero(self):
        with pytest.raises(ValueError):
            f_beta(0.0, 1.0)


class TestFBetaDerivatives:
    def test_critical_flatness(self):
        assert f_beta_derivatives(1.0, 0.0, 2) == 0.0
        assert f_beta_derivatives(1.0, 0.0, 3) == 0.0
        assert f_beta_derivatives(1.0, 0.0, 4) == 2.0

    def test_second_derivative_subcritical(self):
        assert f_beta_derivatives(0.5, 0.0, 2) == 1.0

    @pytest.mark.parametrize("order", [0, 5, -1])
    def test_order_validation(self, order):
        with pytest.raises(ValueError):
            f_beta_derivatives(1.0, 0.0, order)

    @pytest.mark.parametrize("beta", [0.5, 1.0, 2.0])
    @pytest.mark.parametrize("t", [-1.0, 0.3, 2.0])
    def test_matches_finite_differences(self, beta, t):
        h1 = 1e-6
        fd1 = (f_beta(beta, t + h1) - f_beta(beta, t - h1)) / (2 * h1)
        d1 = f_beta_derivatives(beta, t, 1)
        assert d1 == pytest.approx(fd1, rel=1e-6, abs=1e-9)
        h2 = 1e-4
        fd2 = (f_beta(beta, t + h2) - 2 * f_beta(beta, t) + f_beta(beta, t - h2)) / h2**2
        assert f_beta_derivatives(beta, t, 2) == pytest.approx(fd2, rel=1e-6, abs=1e-7)

    @pytest.mark.parametrize("order", [3, 4])
    @pytest.mark.parametrize("t", [-1.0, 0.3, 2.0])
    def test_higher_orders_differentiate_lower(self, order, t):
        h = 1e-6
        fd = (
            f_beta_derivatives(1.5, t + h, order - 1) - f_beta_derivatives(1.5, t - h, order - 1)
        ) / (2 * h)
        assert f_beta_derivatives(1.5, t, order) == pytest.approx(fd, rel=1e-5, abs=1e-8)


class TestSpontaneousMagnetization:
    def test_frozen_value(self):
        oracle = bisect_root(lambda x: x - math.tanh(2.0 * x), 1e-12, 1.0)
        assert oracle == pytest.approx(M_OF_2, abs=1e-12)
        assert spontaneous_magnetization(2.0) == pytest.approx(M_OF_2, abs=1e-12)

    @pytest.mark.parametrize("beta", [1.0, 0.3, 0.0])
    def test_no_root_at_or_below_one(self, beta):
        with pytest.raises(NoPositiveRootError):
            spontaneous_magnetization(beta)

    def test_saturates_at_strong_coupling(self):
        assert spontaneous_magnetization(50.0) == pytest.approx(1.0, abs=1e-12)

    @pytest.mark.parametrize("beta", [1.1, 1.5, 2.0, 3.0, 5.0])
    def test_fixed_point_residual(self, beta):
        m = spontaneous_magnetization(beta)
        assert 0.0 < m < 1.0 + 1e-15
        assert abs(m - math.tanh(beta * m)) <= 1e-14

    def test_increasing_in_beta(self):
        grid = [1.1, 1.5, 2.0, 3.0, 5.0]
        values = [spontaneous_magnetization(b) for b in grid]
        assert all(a < b for a, b in zip(values, values[1:]))

    def test_near_critical(self):
        m = spontaneous_magnetization(1.0001)
        assert 0.0 < m < 0.05
        assert abs(m - math.tanh(1.0001 * m)) <= 1e-14


class TestLimitMoments:
    def test_dirac(self):
        law = DiracZero()
        assert limit_moment(law, 0) == 1.0
        assert limit_moment(law, 1) == 0.0
        assert limit_moment(law, 8) == 0.0

    def test_two_point(self):
        law = TwoPointMix(0.5)
        assert limit_moment(law, 3) == 0.0
        assert limit_moment(law, 2) == 0.25
        assert limit_moment(law, 0) == 1.0

    def test_normal_example(self):
        assert limit_moment(CenteredNormal(2.0), 2) == 2.0

    def test_normal_matches_recursion(self):
        variance = 1.7
        law = CenteredNormal(variance)
        values = {0: 1.0, 1: 0.0}
        for k in range(2, 13):
            values[k] = (k - 1) * variance * values[k - 2]
        for k in range(13):
            assert limit_moment(law, k) == pytest.approx(values[k], rel=1e-12)

    @pytest.mark.parametrize("k", [0, 2, 4, 6, 8])
    def test_quartic_matches_quadrature(self, k):
        assert limit_moment(QuarticTilt(), k) == pytest.approx(
            quartic_moment_by_quadrature(k), rel=1e-8
        )

    def test_quartic_frozen_second_moment(self):
        assert limit_moment(QuarticTilt(), 2) == pytest.approx(QUARTIC_M2, rel=1e-12)

    def test_quartic_normalizer(self):
        law = QuarticTilt()
        oracle, _ = integrate.quad(lambda t: math.exp(-(t**4) / 12.0), -30, 30, limit=200)
        assert law.normalizer == pytest.approx(oracle, rel=1e-10)
        assert law.normalizer == pytest.approx(QUARTIC_NORMALIZER, rel=1e-12)

    @pytest.mark.parametrize(
        "law",
        [DiracZero(), TwoPointMix(0.3), CenteredNormal(1.5), QuarticTilt()],
        ids=["dirac", "two-point", "normal", "quartic"],
    )
    def test_unit_mass_and_odd_symmetry(self, law):
        assert limit_moment(law, 0) == 1.0
        for k in (1, 3, 5, 7):
            assert limit_moment(law, k) == 0.0
        for k in range(0, 12):
            assert math.isfinite(limit_moment(law, k))

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            limit_moment(DiracZero(), -1)

    @pytest.mark.parametrize("m", [0.0, 1.0, -0.2, 1.5])
    def test_two_point_location_validated(self, m):
        with pytest.raises(ValueError):
            TwoPointMix(m)

    @pytest.mark.parametrize("variance", [0.0, -1.0])
    def test_normal_variance_validated(self, variance):
        with pytest.raises(ValueError):
            CenteredNormal(variance)


class TestDoubleFactorial:
    @pytest.mark.parametrize("k,expected", [(-1, 1), (0, 1), (1, 1), (3, 3), (5, 15), (7, 105)])
    def test_values(self, k, expected):
        assert double_factorial(k) == expected

    def test_rejects_below_minus_one(self):
        with pytest.raises(ValueError):
            double_factorial(-2)

    @given(st.integers(min_value=2, max_value=40))
    @settings(max_examples=30)
    def test_recurrence(self, k):
        assert double_factorial(k) == k * double_factorial(k - 2)


class TestLimitLawFor:
    def test_mean_scaling(self):
        assert isinstance(limit_law_for(0.7, 1.0), DiracZero)
        assert isinstance(limit_law_for(1.0, 1.0), DiracZero)
        law = limit_law_for(2.0, 1.0)
        assert isinstance(law, TwoPointMix)
        assert law.m == pytest.approx(M_OF_2, abs=1e-12)

    def test_sqrt_scaling(self):
        law = limit_law_for(0.5, 0.5)
        assert isinstance(law, CenteredNormal)
        assert law.variance == pytest.approx(2.0)
        with pytest.raises(ValueError):
            limit_law_for(1.0, 0.5)

    def test_critical_scaling(self):
        assert isinstance(limit_law_for(1.0, 0.75), QuarticTilt)
        with pytest.raises(ValueError):
            limit_law_for(0.5, 0.75)

    def test_unknown_exponent(self):
        with pytest.raises(ValueError):
            limit_law_for(0.5, 0.6)
