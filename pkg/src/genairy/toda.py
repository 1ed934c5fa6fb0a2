"""Verification of the t-evolution (Toda) structure by central differences.

The exact pipeline is rebuilt at t - h, t, t + h and the finite-difference
derivatives of alpha_n, beta_n, ln h_n, p(n) and ln D_n are compared with
the closed-form flow:

    d alpha_n / dt = beta_{n+1} - beta_n
    d beta_n  / dt = beta_n (alpha_n - alpha_{n-1})
    d ln h_n  / dt = alpha_n
    d p(n)    / dt = -beta_n
    d ln D_n  / dt = -p(n)

Derivatives are verified by differencing rather than by integrating the flow:
the pipeline at each t is the source of truth and central differences are
unconditionally stable, O(h^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp, mpf

from .moments import WeightParams
from .precision import PrecisionContext, as_fraction
from .recurrence import Pipeline, recurrence_pipeline

#: field order of the residuals in a TodaCheckReport
TODA_RESIDUAL_NAMES = (
    "residual_toda_alpha",
    "residual_toda_beta",
    "residual_hna",
    "residual_dpn",
    "residual_Hn",
)


@dataclass(frozen=True)
class TodaCheckReport:
    n: int
    t: Fraction
    h_step: Fraction
    residual_toda_alpha: mpf
    residual_toda_beta: mpf
    residual_hna: mpf
    residual_dpn: mpf
    residual_Hn: mpf

    def residuals(self) -> dict:
        return {name: getattr(self, name) for name in TODA_RESIDUAL_NAMES}


def _toda_context(ctx: PrecisionContext, nmax: int) -> PrecisionContext:
    # cancellation in the h-difference eats ~target/4 digits per spec'd h;
    # working >= 2x target keeps the floor far below the O(h^2) truncation
    return ctx.with_working(max(ctx.working_digits, 2 * ctx.target_digits)).scaled_for(
        nmax
    )


def _default_h(ctx: PrecisionContext) -> Fraction:
    return Fraction(1, 10 ** (ctx.target_digits // 4))


def _report_from_pipelines(
    lo: Pipeline,
    mid: Pipeline,
    hi: Pipeline,
    params: WeightParams,
    n: int,
    h: Fraction,
    working_digits: int,
) -> TodaCheckReport:
    with mp.workdps(working_digits):
        two_h = 2 * (mpf(h.numerator) / mpf(h.denominator))
        rl, rm, rh = lo.recurrence, mid.recurrence, hi.recurrence
        fd_alpha = (rh.alpha[n] - rl.alpha[n]) / two_h
        fd_beta = (rh.beta[n] - rl.beta[n]) / two_h
        fd_lnh = (hi.log_h(n) - lo.log_h(n)) / two_h
        fd_p = (rh.p[n] - rl.p[n]) / two_h
        fd_lnD = (hi.log_D(n) - lo.log_D(n)) / two_h
        beta_np1 = rm.beta[n + 1]
        alpha_prev = rm.alpha[n - 1] if n >= 1 else mpf(0)
        return TodaCheckReport(
            n=n,
            t=params.t,
            h_step=h,
            residual_toda_alpha=fd_alpha - (beta_np1 - rm.beta[n]),
            residual_toda_beta=fd_beta - rm.beta[n] * (rm.alpha[n] - alpha_prev),
            residual_hna=fd_lnh - rm.alpha[n],
            residual_dpn=fd_p - (-rm.beta[n]),
            residual_Hn=fd_lnD - (-rm.p[n]),
        )


def toda_residuals(
    params: WeightParams,
    n: int,
    h_step=None,
    ctx: PrecisionContext = None,
    _cache: dict = None,
) -> TodaCheckReport:
    """Central-difference residuals of the five t-derivative identities at n."""
    if ctx is None:
        ctx = PrecisionContext(target_digits=30)
    h = _default_h(ctx) if h_step is None else as_fraction(h_step)
    if h <= 0 or Fraction(1, 10 ** (ctx.target_digits // 4)) < h:
        raise ValueError("h_step must satisfy 0 < h <= 10**(-target_digits/4)")
    nmax = n + 1
    level = _toda_context(ctx, nmax)

    def pipe(t_shift: Fraction) -> Pipeline:
        key = (params.t + t_shift, nmax, level.working_digits)
        if _cache is not None and key in _cache:
            return _cache[key]
        result = recurrence_pipeline(params.shifted_t(t_shift), nmax, level)
        if _cache is not None:
            _cache[key] = result
        return result

    lo, mid, hi = pipe(-h), pipe(Fraction(0)), pipe(h)
    return _report_from_pipelines(lo, mid, hi, params, n, h, level.working_digits)


def toda_residuals_range(
    params: WeightParams,
    ns,
    h_step=None,
    ctx: PrecisionContext = None,
) -> list:
    """Reports for several n from one shared trio of pipelines."""
    if ctx is None:
        ctx = PrecisionContext(target_digits=30)
    h = _default_h(ctx) if h_step is None else as_fraction(h_step)
    ns = sorted(set(int(n) for n in ns))
    nmax = max(ns) + 1
    level = _toda_context(ctx, nmax)
    lo = recurrence_pipeline(params.shifted_t(-h), nmax, level)
    mid = recurrence_pipeline(params, nmax, level)
    hi = recurrence_pipeline(params.shifted_t(h), nmax, level)
    return [
        _report_from_pipelines(lo, mid, hi, params, n, h, level.working_digits)
        for n in ns
    ]


def toda_richardson(
    params: WeightParams, n: int, h_step, ctx: PrecisionContext
) -> dict:
    """Residual ratios when halving h; O(h^2) differencing gives ~4.

    Returns {name: (residual_h, residual_h_half, factor)}.
    """
    h = as_fraction(h_step)
    cache: dict = {}
    full = toda_residuals(params, n, h, ctx, _cache=cache)
    half = toda_residuals(params, n, h / 2, ctx, _cache=cache)
    out = {}
    for name in TODA_RESIDUAL_NAMES:
        rf, rh = getattr(full, name), getattr(half, name)
        factor = abs(rf) / abs(rh) if rh != 0 else mpf("inf")
        out[name] = (rf, rh, factor)
    return out


def hankel_logderiv_representations(
    params: WeightParams, n: int, ctx: PrecisionContext
):
    """H_n(t) both ways: as -p(n) and as the beta_n bracket form."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pipe = recurrence_pipeline(params, n + 1, ctx)
    rec = pipe.recurrence
    with mp.workdps(rec.working_digits):
        t = params.t_mp()
        al, be = rec.alpha, rec.beta
        first = -rec.p[n]
        second = be[n] * (
            al[n - 1] ** 2
            + al[n - 1] * al[n]
            + al[n] ** 2
            + be[n - 1]
            + be[n]
            + be[n + 1]
            - t
        )
    return first, second


def hankel_logderiv(params: WeightParams, n: int, ctx: PrecisionContext) -> mpf:
    """d/dt ln D_n(t) = -p(n, t), asserting both representations agree."""
    first, second = hankel_logderiv_representations(params, n, ctx)
    with mp.workdps(ctx.working_digits):
        tol = mpf(10) ** (-(ctx.target_digits - 10))
        scale = max(abs(first), mpf(1))
        if abs(first - second) > tol * scale:
            raise ValueError(
                "the two representations of the Hankel log-derivative disagree"
            )
    return first
