from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from genairy import (
    PrecisionContext,
    compare_asymptotics,
    lagrange_multiplier,
    log_gamma,
    series_largeN,
    series_longtime,
    solve_endpoints,
    weight_params,
)
from genairy.asymptotics import fit_exponent


def test_lambda0_closed_form(ctx30):
    params = weight_params(0, 0)
    for n in (1, 7, 100):
        sup = solve_endpoints(n, params, ctx30)
        with mp.workdps(ctx30.working_digits):
            exact = (32 * mpf(n) / 5) ** (mpf(1) / 3)
            assert sup.Y == 0
            assert abs(sup.X - exact) / exact < mpf(10) ** -(ctx30.working_digits - 5)
            assert sup.a == 0


def test_solver_residuals_small(ctx30):
    sup = solve_endpoints(100, weight_params(1, 0), ctx30)
    with mp.workdps(ctx30.working_digits):
        assert abs(sup.res1) < mpf(10) ** -(30 + 5)
        assert abs(sup.res2) < mpf(10) ** -(30 + 5)
        assert 0 < sup.a < sup.b


def test_solver_matches_series(ctx30):
    params = weight_params(1, 0)
    sup = solve_endpoints(100, params, ctx30)
    sx = series_largeN("X", 100, params, ctx=ctx30)
    sy = series_largeN("Y", 100, params, ctx=ctx30)
    with mp.workdps(ctx30.working_digits):
        # first dropped X term is O(n^{-8/3}) ~ 4.6e-6 at n=100
        assert abs(sup.X - sx.value) < mpf(10) ** -4
        assert abs(sup.Y - sy.value) < mpf(10) ** -4


def test_multiplier_matches_series(ctx30):
    params = weight_params("0.5", 1)
    sup = solve_endpoints(200, params, ctx30)
    sa = series_largeN("A", 200, params, ctx=ctx30)
    with mp.workdps(ctx30.working_digits):
        assert abs(sup.A_mult - sa.value) < mpf(10) ** -4  # O(n^-2) remainder
        assert abs(lagrange_multiplier(sup) - sup.A_mult) == 0


def test_multiplier_decreasing_in_n(ctx30):
    params = weight_params("0.5", 0)
    a100 = solve_endpoints(100, params, ctx30).A_mult
    a200 = solve_endpoints(200, params, ctx30).A_mult
    assert a200 < a100


def test_solver_validation(ctx30):
    with pytest.raises(ValueError):
        solve_endpoints(100, weight_params("-0.5", 0), ctx30)
    with pytest.raises(ValueError):
        solve_endpoints("0.5", weight_params(1, 0), ctx30)


def test_alpha_series_leading_term(ctx30):
    params = weight_params(0, 0)
    sv = series_largeN("alpha", 64, params, order=1, ctx=ctx30)
    with ctx30.workdps():
        kappa = mpf(10) ** (mpf(1) / 3)
        assert abs(sv.value - 2 * mpf(64) ** (mpf(1) / 3) / kappa) < mpf(10) ** -30
        assert sv.truncation_order == Fraction(-1, 3)


def test_beta_series_two_terms(ctx30):
    params = weight_params(0, 0)
    sv = series_largeN("beta", 27, params, order=2, ctx=ctx30)
    with ctx30.workdps():
        kappa2 = mpf(10) ** (mpf(2) / 3)
        # the t/15 term is printed but vanishes at t = 0
        assert abs(sv.value - mpf(27) ** (mpf(2) / 3) / kappa2) < mpf(10) ** -30


def test_lnD_constant_term_frozen(ctx30):
    # c0 at lam = 0, t = 0 equals 2 zeta'(-1) - ln(3)/24 + ln(5/3)/8;
    # frozen via the Glaisher-limit oracle for zeta'(-1)
    params = weight_params(0, 0)
    nine = series_largeN("lnD", 50, params, order=9, ctx=ctx30)
    eight = series_largeN("lnD", 50, params, order=8, ctx=ctx30)
    with ctx30.workdps():
        c0 = nine.value - eight.value
        assert abs(c0 - mpf("-0.3127645964579909268352853")) < mpf(10) ** -24


def test_series_orders_and_validation(ctx30):
    params = weight_params("0.5", 1)
    full = series_largeN("alpha", 10, params, ctx=ctx30)
    assert full.order == 7
    assert full.truncation_order == Fraction(-3)
    with pytest.raises(ValueError):
        series_largeN("alpha", 10, params, order=8, ctx=ctx30)
    with pytest.raises(ValueError):
        series_largeN("nope", 10, params, ctx=ctx30)
    with pytest.raises(ValueError):
        series_largeN("alpha", "0.5", params, ctx=ctx30)


def test_adjacent_orders_differ_by_one_term(ctx30):
    params = weight_params("0.7", "-1.1")
    for order in range(1, 9):
        lo = series_largeN("beta", 40, params, order=order, ctx=ctx30)
        hi = series_largeN("beta", 40, params, order=order + 1, ctx=ctx30)
        with ctx30.workdps():
            diff = hi.value - lo.value
            n = mpf(40)
            bound = n ** fraction_to_mpf_local(lo.truncation_order)
            # the retained step is exactly the first previously dropped term
            assert abs(diff) <= 10 * bound


def fraction_to_mpf_local(fr):
    return mpf(fr.numerator) / mpf(fr.denominator)


def test_longtime_leading_terms(ctx30):
    plus = weight_params("0.5", 25)
    sv = series_longtime("beta", 3, plus, "plus", order=1, ctx=ctx30)
    with ctx30.workdps():
        assert abs(sv.value - mpf(3) / (2 * mpmath.sqrt(mpf(25)))) < mpf(10) ** -28
    minus = weight_params("0.5", -25)
    sv = series_longtime("alpha", 3, minus, "minus", order=1, ctx=ctx30)
    with ctx30.workdps():
        lam = mpf("0.5")
        assert abs(sv.value - (-(2 * 3 + lam + 1) / mpf(-25))) < mpf(10) ** -28


def test_longtime_constant_C1_at_n1(ctx30):
    # constant of ln D_1 as t -> +inf is (1/2) ln pi
    params = weight_params("0.5", 30)
    three = series_longtime("lnD", 1, params, "plus", order=3, ctx=ctx30)
    two = series_longtime("lnD", 1, params, "plus", order=2, ctx=ctx30)
    with ctx30.workdps():
        c1 = three.value - two.value
        assert abs(c1 - mpmath.log(mpmath.pi) / 2) < mpf(10) ** -28


def test_longtime_constants_via_factorial_chain(ctx30):
    # integer-argument Barnes G values reduce to factorial products:
    # C2(3) = ln[G(4) G(4.5)/G(1.5)] with G(4) = 1! 2!
    params = weight_params("1.5", -40)
    three = series_longtime("lnD", 3, params, "minus", order=2, ctx=ctx30)
    two = series_longtime("lnD", 3, params, "minus", order=1, ctx=ctx30)
    with ctx30.workdps():
        c2 = three.value - two.value
        lam = mpf("1.5")
        # ln G(n+lam+1) - ln G(lam+1) = sum_{k=0}^{n-1} ln Gamma(lam+1+k)
        chain = sum(log_gamma(lam + 1 + k, ctx30) for k in range(3))
        expect = mpmath.log(2) + chain  # ln G(4) = ln(1! 2!) = ln 2
        assert abs(c2 - expect) < mpf(10) ** -26


def test_longtime_validation(ctx30):
    params = weight_params("0.5", 25)
    with pytest.raises(ValueError):
        series_longtime("beta", 3, params, "minus", ctx=ctx30)  # t > 0
    with pytest.raises(ValueError):
        series_longtime("beta", -1, params, "plus", ctx=ctx30)
    with pytest.raises(ValueError):
        series_longtime("X", 3, params, "plus", ctx=ctx30)


def test_series_consistency_lnh_vs_lnD_difference(ctx30):
    # ln h_n = ln D_{n+1} - ln D_n holds term-by-term to the printed order
    params = weight_params("0.7", "0.9")
    n = 10**4
    lnh = series_largeN("lnh", n, params, ctx=ctx30)
    d_hi = series_largeN("lnD", n + 1, params, ctx=ctx30)
    d_lo = series_largeN("lnD", n, params, ctx=ctx30)
    with ctx30.workdps():
        diff = abs(lnh.value - (d_hi.value - d_lo.value))
        # both sides carry O(n^-2) remainders ~ 1e-8 at n = 1e4
        assert diff < mpf(10) ** -6


def test_toda_consistency_of_series_at_infinity(ctx30):
    # d/dt of the lnD series equals -(p series) to the printed order
    n = 10**4
    lam = Fraction(1, 2)
    h = Fraction(1, 10**6)
    t = Fraction(9, 10)
    hi = series_largeN("lnD", n, weight_params(lam, t + h), ctx=ctx30)
    lo = series_largeN("lnD", n, weight_params(lam, t - h), ctx=ctx30)
    pseries = series_largeN("p", n, weight_params(lam, t), ctx=ctx30)
    with ctx30.workdps():
        fd = (hi.value - lo.value) / (2 * mpf(10) ** -6)
        assert abs(fd + pseries.value) < mpf(10) ** -6


def test_compare_large_n_alpha_exponent(ctx30):
    comp = compare_asymptotics(
        "alpha", weight_params("0.5", 1), ctx30, n_values=[8, 16, 32]
    )
    assert comp.regime == "large_n"
    assert abs(comp.fitted_exponent + 3) < 0.7
    assert not comp.outside_regime


def test_compare_solver_exponent(ctx30):
    comp = compare_asymptotics(
        "X", weight_params(1, 0), ctx30, n_values=[25, 50, 100]
    )
    assert abs(comp.fitted_exponent + 8.0 / 3.0) < 0.7
    assert comp.expected_exponent == pytest.approx(-8.0 / 3.0)


def test_compare_flags_negative_lambda(ctx30):
    comp = compare_asymptotics(
        "beta", weight_params("-0.5", 0), ctx30, n_values=[4, 6, 8]
    )
    assert comp.outside_regime


def test_compare_validation(ctx30):
    params = weight_params("0.5", 1)
    with pytest.raises(ValueError):
        compare_asymptotics("alpha", params, ctx30)
    with pytest.raises(ValueError):
        compare_asymptotics(
            "alpha", params, ctx30, n_values=[8], t_values=[25]
        )
    with pytest.raises(ValueError):
        compare_asymptotics(
            "alpha", params, ctx30, t_values=[25, -50, 100], n_fixed=2
        )
    with pytest.raises(ValueError):
        fit_exponent([(1.0, 1.0), (2.0, 0.5)])
