from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from genairy import (
    PrecisionContext,
    hankel_logderiv,
    hankel_logderiv_representations,
    recurrence_pipeline,
    toda_residuals,
    toda_residuals_range,
    toda_richardson,
    weight_params,
)


def test_base_case_n0(ctx30):
    report = toda_residuals(weight_params("0.5", "0.7"), 0, ctx=ctx30)
    with mp.workdps(80):
        h2 = mpf(report.h_step.numerator) / mpf(report.h_step.denominator)
        h2 = h2**2
        # d alpha_0/dt follows beta_1 - beta_0 with beta_0 = 0
        assert abs(report.residual_toda_alpha) < 100 * h2
        assert abs(report.residual_toda_beta) < 100 * h2
        assert abs(report.residual_Hn) < 100 * h2


def test_n1_hankel_logderiv_is_alpha0(ctx30):
    params = weight_params("0.5", "0.7")
    value = hankel_logderiv(params, 1, ctx30)
    pipe = recurrence_pipeline(params, 2, ctx30)
    with mp.workdps(pipe.recurrence.working_digits):
        assert abs(value - pipe.recurrence.alpha[0]) < mpf(10) ** -25
        assert abs(value + pipe.recurrence.p[1]) < mpf(10) ** -25


def test_residuals_order_h_squared(ctx30):
    params = weight_params("0.5", "0.7")
    h = Fraction(1, 10**7)
    report = toda_residuals(params, 3, h, ctx30)
    with mp.workdps(80):
        h2 = mpf(1) / 10**14
        for name, value in report.residuals().items():
            assert abs(value) < 100 * h2, name
            assert abs(value) > h2 / 10**6, name  # not spuriously zero


def test_richardson_factors_near_four(ctx30):
    params = weight_params("0.5", "0.7")
    factors = toda_richardson(params, 2, Fraction(1, 10**7), ctx30)
    for name, (_, _, factor) in factors.items():
        assert 3.5 <= float(factor) <= 4.5, name


def test_range_runner_matches_single(ctx30):
    params = weight_params("-0.5", "-0.4")
    h = Fraction(1, 10**7)
    reports = toda_residuals_range(params, [1, 2], h, ctx30)
    single = toda_residuals(params, 2, h, ctx30)
    with mp.workdps(80):
        # same nmax means identical pipelines, so identical residuals
        assert reports[1].residuals().keys() == single.residuals().keys()
        for name, value in reports[1].residuals().items():
            assert abs(value - getattr(single, name)) < mpf(10) ** -20


def test_representations_agree(ctx30):
    first, second = hankel_logderiv_representations(weight_params("1.5", "-1"), 3, ctx30)
    with mp.workdps(80):
        assert abs(first - second) < mpf(10) ** -(30 - 10)


def test_h_step_validation(ctx30):
    with pytest.raises(ValueError):
        toda_residuals(weight_params("0.5", "0"), 2, Fraction(1, 10), ctx30)
    with pytest.raises(ValueError):
        toda_residuals(weight_params("0.5", "0"), 2, Fraction(0), ctx30)


def test_integral_of_logderiv_recovers_logD():
    # fundamental-theorem cross-check: int_0^1 H_2(s) ds = ln D_2(1) - ln D_2(0)
    ctx = PrecisionContext(target_digits=20)
    lam = "0.5"

    def H2(s):
        with mp.workdps(40):
            sf = Fraction(mpmath.nstr(s, 30))
        return hankel_logderiv(weight_params(lam, sf), 2, ctx)

    with mp.workdps(40):
        integral = mpmath.quad(H2, [0, 1], method="gauss-legendre", maxdegree=3)
        d1 = recurrence_pipeline(weight_params(lam, 1), 2, ctx)
        d0 = recurrence_pipeline(weight_params(lam, 0), 2, ctx)
        diff = d1.log_D(2) - d0.log_D(2)
        assert abs(integral - diff) < mpf(10) ** -10
