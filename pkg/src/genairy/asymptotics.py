"""Coulomb-fluid endpoints and the large-n / long-time expansions.

The support endpoints a < b of the equilibrium density enter through
X = a + b and Y = sqrt(a*b), which solve

    3 X^2 - 4 Y^2 - 8 t - 8 lam / Y = 0
    X (5 X^2 - 12 Y^2 - 8 t) = 16 (2 n + lam)

(for lam = 0 the support touches the origin: Y = 0 exactly and X solves the
remaining cubic).  All series below are transcribed with exact rational
coefficients times powers of kappa = 10**(1/3); evaluation substitutes kappa
at the context precision, so the tables stay auditable term by term.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp, mpf

from .errors import ConvergenceError
from .moments import WeightParams
from .precision import Numeric, PrecisionContext, as_fraction, fraction_to_mpf
from .recurrence import recurrence_pipeline
from .special import kappa as kappa_const
from .special import log_barnes_g, log_gamma, zeta_prime_minus_one

LARGE_N_QUANTITIES = ("alpha", "beta", "p", "lnD", "lnh", "A", "X", "Y")
LONGTIME_QUANTITIES = ("alpha", "beta", "p", "lnD", "lnh")

#: power of n (or of |t|) of the first term beyond the transcribed ones
REMAINDER_LARGE_N = {
    "alpha": Fraction(-3),
    "beta": Fraction(-3),
    "p": Fraction(-2),
    "lnD": Fraction(-2),
    "lnh": Fraction(-2),
    "A": Fraction(-2),
    "X": Fraction(-8, 3),
    "Y": Fraction(-10, 3),
}
REMAINDER_LONGTIME = {
    ("alpha", "plus"): Fraction(-4),
    ("beta", "plus"): Fraction(-5),
    ("p", "plus"): Fraction(-4),
    ("lnD", "plus"): Fraction(-3),
    ("lnh", "plus"): Fraction(-3),
    ("alpha", "minus"): Fraction(-7),
    ("beta", "minus"): Fraction(-8),
    ("p", "minus"): Fraction(-7),
    ("lnD", "minus"): Fraction(-6),
    ("lnh", "minus"): Fraction(-6),
}


# ---------------------------------------------------------------------------
# equilibrium endpoints
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class EquilibriumSupport:
    """Endpoint combination X = a+b, Y = sqrt(ab) and the multiplier A."""

    n: Fraction
    params: WeightParams
    X: mpf
    Y: mpf
    A_mult: mpf
    res1: mpf
    res2: mpf
    working_digits: int

    @property
    def a(self) -> mpf:
        return (self.X - mpmath.sqrt(self.X**2 - 4 * self.Y**2)) / 2

    @property
    def b(self) -> mpf:
        return (self.X + mpmath.sqrt(self.X**2 - 4 * self.Y**2)) / 2


def _newton_lambda0(n: mpf, t: mpf, tol: mpf) -> mpf:
    # unique positive root of X (5 X^2 - 8 t) = 32 n
    X = max((32 * n / 5) ** (mpf(1) / 3), mpmath.sqrt(8 * abs(t) / 5) + 1)
    for _ in range(200):
        F = X * (5 * X**2 - 8 * t) - 32 * n
        dF = 15 * X**2 - 8 * t
        step = F / dF
        X -= step
        if abs(step) <= tol * abs(X):
            return X
    raise ConvergenceError("endpoint cubic did not converge", last_iterate=X)


def solve_endpoints(
    n: Numeric, params: WeightParams, ctx: PrecisionContext
) -> EquilibriumSupport:
    """Newton iteration on (X, ln Y), seeded by the series expansions.

    Working in ln Y keeps Y > 0 where the 8*lam/Y term is singular; for
    lam = 0 the Y = 0 branch is taken exactly.
    """
    nf = as_fraction(n)
    if nf < 1:
        raise ValueError("n must be >= 1")
    if params.lam < 0:
        raise ValueError("equilibrium solver requires lam >= 0")
    with ctx.workdps():
        nm = fraction_to_mpf(nf)
        lam = params.lam_mp()
        t = params.t_mp()
        tol = mpf(10) ** (-(ctx.working_digits - 5))
        if params.lam == 0:
            X = _newton_lambda0(nm, t, tol)
            Y = mpf(0)
        else:
            k = kappa_const(ctx)
            third = mpf(1) / 3
            X = (
                4 * nm**third / k
                + 4 * t / (3 * k**2 * nm**third)
                + 2 * lam / (3 * k * nm ** (2 * third))
            )
            Y = 5 * lam / (3 * k * nm ** (2 * third)) * (1 + t / (k * nm ** (2 * third)))
            u = mpmath.log(Y)
            converged = False
            for _ in range(300):
                Y = mpmath.exp(u)
                F1 = 3 * X**2 - 4 * Y**2 - 8 * t - 8 * lam / Y
                F2 = X * (5 * X**2 - 12 * Y**2 - 8 * t) - 16 * (2 * nm + lam)
                J11 = 6 * X
                J12 = -8 * Y**2 + 8 * lam / Y
                J21 = 15 * X**2 - 12 * Y**2 - 8 * t
                J22 = -24 * X * Y**2
                det = J11 * J22 - J12 * J21
                dX = (F1 * J22 - F2 * J12) / det
                du = (J11 * F2 - J21 * F1) / det
                # damping keeps the iteration in the basin for small n
                dX = mpmath.sign(dX) * min(abs(dX), abs(X) / 2)
                du = mpmath.sign(du) * min(abs(du), mpf(2))
                X -= dX
                u -= du
                if abs(dX) <= tol * abs(X) and abs(du) <= tol:
                    converged = True
                    break
            if not converged:
                raise ConvergenceError(
                    "endpoint Newton iteration did not converge",
                    last_iterate=(X, mpmath.exp(u)),
                )
            Y = mpmath.exp(u)
        res1 = 3 * X**2 - 4 * Y**2 - 8 * t - (8 * lam / Y if lam > 0 else mpf(0))
        res2 = X * (5 * X**2 - 12 * Y**2 - 8 * t) - 16 * (2 * nm + lam)
        support = EquilibriumSupport(
            n=nf,
            params=params,
            X=X,
            Y=Y,
            A_mult=mpf(0),
            res1=res1,
            res2=res2,
            working_digits=ctx.working_digits,
        )
        A = lagrange_multiplier(support)
        object.__setattr__(support, "A_mult", A)
        return support


def lagrange_multiplier(support: EquilibriumSupport) -> mpf:
    """Closed-form multiplier A enforcing the density normalization."""
    with mp.workdps(support.working_digits):
        X, Y = support.X, support.Y
        if X <= 2 * Y:
            raise ValueError("invalid support: need X > 2Y")
        lam = support.params.lam_mp()
        t = support.params.t_mp()
        nm = fraction_to_mpf(support.n)
        return (
            X * (5 * X**2 - 12 * Y**2 - 24 * t) / 48
            - lam * mpmath.log((X + 2 * Y) / 4)
            - nm * mpmath.log((X**2 - 4 * Y**2) / 16)
        )


# ---------------------------------------------------------------------------
# series tables
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SeriesTerm:
    """coeff * u**exp * (ln u)**log_power, u = n (large-n) or |t| (long-time)."""

    exp: Fraction
    log_power: int
    coeff: mpf

    def eval(self, u: mpf) -> mpf:
        value = self.coeff * u ** fraction_to_mpf(self.exp)
        if self.log_power:
            value *= mpmath.log(u) ** self.log_power
        return value


@dataclass(frozen=True)
class SeriesValue:
    quantity: str
    n: Fraction
    params: WeightParams
    order: int
    value: mpf
    truncation_order: Fraction


def _frac(p: int, q: int = 1) -> Fraction:
    return Fraction(p, q)


def _largeN_terms(
    quantity: str, params: WeightParams, ctx: PrecisionContext
) -> List[SeriesTerm]:
    """Exact-rational coefficient tables of the large-n expansions."""
    with ctx.workdps():
        lam = params.lam_mp()
        t = params.t_mp()
        k = kappa_const(ctx)
        ln10 = mpmath.log(10)
        T = SeriesTerm
        if quantity == "X":
            return [
                T(_frac(1, 3), 0, 4 / k),
                T(_frac(-1, 3), 0, 4 * t / (3 * k**2)),
                T(_frac(-2, 3), 0, 2 * lam / (3 * k)),
                T(_frac(-4, 3), 0, -2 * lam * t / (9 * k**2)),
                T(_frac(-5, 3), 0, -2 * (t**3 - 90 * lam**2) / (405 * k)),
                T(_frac(-7, 3), 0, 2 * t * (t**3 + 720 * lam**2) / (1215 * k**2)),
            ]
        if quantity == "Y":
            return [
                T(_frac(-2, 3), 0, 5 * lam / (3 * k)),
                T(_frac(-4, 3), 0, 5 * lam * t / (3 * k**2)),
                T(_frac(-5, 3), 0, -5 * lam**2 / (9 * k)),
                T(_frac(-2), 0, 4 * lam * t**2 / 27),
                T(_frac(-7, 3), 0, -10 * lam**2 * t / (9 * k**2)),
                T(_frac(-8, 3), 0, 5 * lam * (13 * t**3 + 15 * lam**2) / (486 * k)),
                T(_frac(-3), 0, -4 * lam**2 * t**2 / 27),
            ]
        if quantity == "A":
            return [
                T(_frac(1), 1, mpf(-2) / 3),
                T(_frac(1), 0, mpf(2) / 3 * (1 + ln10)),
                T(_frac(1, 3), 0, -2 * t / k),
                T(_frac(0), 1, -lam / 3),
                T(_frac(0), 0, lam * mpmath.log(k)),
                T(_frac(-1, 3), 0, -(t**2) / (3 * k**2)),
                T(_frac(-2, 3), 0, -lam * t / (3 * k)),
                T(_frac(-1), 0, -(lam**2) / 2),
                T(_frac(-4, 3), 0, lam * t**2 / (18 * k**2)),
                T(_frac(-5, 3), 0, t * (t**3 - 360 * lam**2) / (1620 * k)),
            ]
        if quantity == "alpha":
            return [
                T(_frac(1, 3), 0, 2 / k),
                T(_frac(-1, 3), 0, 2 * t / (3 * k**2)),
                T(_frac(-2, 3), 0, (lam + 1) / (3 * k)),
                T(_frac(-4, 3), 0, -(lam + 1) * t / (9 * k**2)),
                T(
                    _frac(-5, 3),
                    0,
                    -(t**3 - 45 * (lam - 1) * (2 * lam + 1)) / (405 * k),
                ),
                T(
                    _frac(-7, 3),
                    0,
                    t * (t**3 + 30 * (24 * lam**2 + 3 * lam - 4)) / (1215 * k**2),
                ),
                T(
                    _frac(-8, 3),
                    0,
                    (lam + 1) * (t**3 - 15 * (7 * lam**2 - lam - 2)) / (486 * k),
                ),
            ]
        if quantity == "beta":
            return [
                T(_frac(2, 3), 0, 1 / k**2),
                T(_frac(0), 0, t / 15),
                T(_frac(-1, 3), 0, lam / (3 * k**2)),
                T(_frac(-2, 3), 0, t**2 / (90 * k)),
                T(_frac(-4, 3), 0, -(t**3 + 180 * lam**2 - 45) / (405 * k**2)),
                T(_frac(-5, 3), 0, -lam * t**2 / (270 * k)),
                T(_frac(-2), 0, -2 * t * (15 * lam**2 - 4) / 405),
                T(_frac(-7, 3), 0, lam * (2 * t**3 + 345 * lam**2 - 90) / (1215 * k**2)),
                T(
                    _frac(-8, 3),
                    0,
                    t**2 * (t**3 - 3600 * lam**2 + 870) / (36450 * k),
                ),
            ]
        if quantity == "p":
            return [
                T(_frac(4, 3), 0, mpf(-3) / (2 * k)),
                T(_frac(2, 3), 0, -t / k**2),
                T(_frac(1, 3), 0, -lam / k),
                T(_frac(0), 0, -(t**2) / 30),
                T(_frac(-1, 3), 0, -lam * t / (3 * k**2)),
                T(_frac(-2, 3), 0, -(t**3 - 90 * lam**2 + 15) / (270 * k)),
                T(_frac(-4, 3), 0, t * (t**3 + 720 * lam**2 - 180) / (1620 * k**2)),
                T(_frac(-5, 3), 0, lam * (t**3 - 105 * lam**2 + 15) / (810 * k)),
            ]
        if quantity == "lnD":
            c0 = (
                t**3 / 90
                + 2 * zeta_prime_minus_one(ctx)
                - log_barnes_g(lam + 1, ctx)
                + lam / 2 * mpmath.log(2 * mpmath.pi)
                - mpmath.log(3) / 24
                - (4 * lam**2 - 1) / 8 * mpmath.log(mpf(5) / 3)
            )
            return [
                T(_frac(2), 1, mpf(1) / 3),
                T(_frac(2), 0, -(mpf(1) / 2 + ln10 / 3)),
                T(_frac(4, 3), 0, 3 * t / (2 * k)),
                T(_frac(1), 1, lam / 3),
                T(_frac(1), 0, mpmath.log(2 * mpmath.pi) - lam / 3 * (1 + ln10)),
                T(_frac(2, 3), 0, t**2 / (2 * k**2)),
                T(_frac(1, 3), 0, lam * t / k),
                T(_frac(0), 1, (3 * lam**2 - 1) / 6),
                T(_frac(0), 0, c0),
                T(_frac(-1, 3), 0, lam * t**2 / (6 * k**2)),
                T(_frac(-2, 3), 0, t * (t**3 - 360 * lam**2 + 60) / (1080 * k)),
                T(_frac(-1), 0, lam * (8 * lam**2 - 3) / 36),
                T(
                    _frac(-4, 3),
                    0,
                    -(t**2) * (t**3 + 1800 * lam**2 - 450) / (8100 * k**2),
                ),
                T(
                    _frac(-5, 3),
                    0,
                    -lam * t * (t**3 - 420 * lam**2 + 60) / (3240 * k),
                ),
            ]
        if quantity == "lnh":
            return [
                T(_frac(1), 1, mpf(2) / 3),
                T(_frac(1), 0, -(mpf(2) / 3) * (1 + ln10)),
                T(_frac(1, 3), 0, 2 * t / k),
                T(_frac(0), 1, (lam + 1) / 3),
                T(_frac(0), 0, mpmath.log(2 * mpmath.pi) - (lam + 1) * mpmath.log(k)),
                T(_frac(-1, 3), 0, t**2 / (3 * k**2)),
                T(_frac(-2, 3), 0, (lam + 1) * t / (3 * k)),
                T(_frac(-1), 0, (9 * lam**2 + 3 * lam - 1) / 18),
                T(_frac(-4, 3), 0, -(lam + 1) * t**2 / (18 * k**2)),
                T(
                    _frac(-5, 3),
                    0,
                    -(t**4 - 180 * (lam - 1) * (2 * lam + 1) * t) / (1620 * k),
                ),
            ]
    raise ValueError(f"unknown large-n quantity {quantity!r}")


def _longtime_terms(
    quantity: str,
    n: int,
    params: WeightParams,
    direction: str,
    ctx: PrecisionContext,
) -> List[SeriesTerm]:
    """Long-time expansions in u = |t|; signs folded into the coefficients."""
    with ctx.workdps():
        lam = params.lam_mp()
        nm = mpf(n)
        T = SeriesTerm
        if direction == "plus":
            if quantity == "alpha":
                return [
                    T(_frac(1, 2), 0, mpf(1)),
                    T(_frac(-1), 0, -(2 * nm - 2 * lam + 1) / 4),
                    T(
                        _frac(-5, 2),
                        0,
                        -(
                            12 * nm**2
                            + 12 * nm * (1 - 4 * lam)
                            + 12 * lam**2
                            - 24 * lam
                            + 5
                        )
                        / 32,
                    ),
                ]
            if quantity == "beta":
                return [
                    T(_frac(-1, 2), 0, nm / 2),
                    T(_frac(-2), 0, nm * (nm - 2 * lam) / 4),
                    T(
                        _frac(-7, 2),
                        0,
                        5
                        * nm
                        * (4 * nm**2 - 24 * nm * lam + 12 * lam**2 + 1)
                        / 64,
                    ),
                ]
            if quantity == "p":
                return [
                    T(_frac(1, 2), 0, -nm),
                    T(_frac(-1), 0, nm * (nm - 2 * lam) / 4),
                    T(
                        _frac(-5, 2),
                        0,
                        nm * (4 * nm**2 - 24 * nm * lam + 12 * lam**2 + 1) / 32,
                    ),
                ]
            if quantity == "lnD":
                c1 = (
                    nm / 2 * mpmath.log(mpmath.pi)
                    - nm * (nm - 1) / 2 * mpmath.log(2)
                    + log_barnes_g(n + 1, ctx)
                )
                return [
                    T(_frac(3, 2), 0, 2 * nm / 3),
                    T(_frac(0), 1, -nm * (nm - 2 * lam) / 4),
                    T(_frac(0), 0, c1),
                    T(
                        _frac(-3, 2),
                        0,
                        nm * (4 * nm**2 - 24 * nm * lam + 12 * lam**2 + 1) / 48,
                    ),
                ]
            if quantity == "lnh":
                c1 = (
                    mpmath.log(mpmath.pi) / 2
                    - nm * mpmath.log(2)
                    + log_gamma(n + 1, ctx)
                )
                return [
                    T(_frac(3, 2), 0, mpf(2) / 3),
                    T(_frac(0), 1, -(2 * nm - 2 * lam + 1) / 4),
                    T(_frac(0), 0, c1),
                    T(
                        _frac(-3, 2),
                        0,
                        (
                            12 * nm**2
                            + 12 * nm * (1 - 4 * lam)
                            + 12 * lam**2
                            - 24 * lam
                            + 5
                        )
                        / 48,
                    ),
                ]
        if direction == "minus":
            big = 10 * nm**2 + 10 * nm * (lam + 1) + (lam + 2) * (lam + 3)
            quartic = 5 * nm**2 + 5 * nm * lam + lam**2 + 1
            if quantity == "alpha":
                return [
                    T(_frac(-1), 0, 2 * nm + lam + 1),
                    T(_frac(-4), 0, -(2 * nm + lam + 1) * big),
                ]
            if quantity == "beta":
                return [
                    T(_frac(-2), 0, nm * (nm + lam)),
                    T(_frac(-5), 0, -4 * nm * (nm + lam) * quartic),
                ]
            if quantity == "p":
                return [
                    T(_frac(-1), 0, -nm * (nm + lam)),
                    T(_frac(-4), 0, nm * (nm + lam) * quartic),
                ]
            if quantity == "lnD":
                c2 = (
                    log_barnes_g(n + 1, ctx)
                    + log_barnes_g(nm + lam + 1, ctx)
                    - log_barnes_g(lam + 1, ctx)
                )
                return [
                    T(_frac(0), 1, -nm * (nm + lam)),
                    T(_frac(0), 0, c2),
                    T(_frac(-3), 0, -nm * (nm + lam) * quartic / 3),
                ]
            if quantity == "lnh":
                c2 = log_gamma(n + 1, ctx) + log_gamma(nm + lam + 1, ctx)
                return [
                    T(_frac(0), 1, -(2 * nm + lam + 1)),
                    T(_frac(0), 0, c2),
                    T(_frac(-3), 0, -(2 * nm + lam + 1) * big / 3),
                ]
    raise ValueError(f"unknown long-time quantity/direction {quantity!r}/{direction!r}")


def _evaluate(terms: List[SeriesTerm], u: mpf, order: Optional[int], remainder):
    if order is None:
        order = len(terms)
    if not 1 <= order <= len(terms):
        raise ValueError(f"order must be in [1, {len(terms)}]")
    value = mpf(0)
    for term in terms[:order]:
        value += term.eval(u)
    truncation = terms[order].exp if order < len(terms) else remainder
    return value, order, truncation


def series_largeN(
    quantity: str,
    n: Numeric,
    params: WeightParams,
    order: Optional[int] = None,
    ctx: Optional[PrecisionContext] = None,
) -> SeriesValue:
    """Truncated large-n expansion of the requested quantity."""
    if quantity not in LARGE_N_QUANTITIES:
        raise ValueError(f"quantity must be one of {LARGE_N_QUANTITIES}")
    if ctx is None:
        ctx = PrecisionContext(target_digits=30)
    nf = as_fraction(n)
    if nf < 1:
        raise ValueError("n must be >= 1")
    terms = _largeN_terms(quantity, params, ctx)
    with ctx.workdps():
        value, order, truncation = _evaluate(
            terms, fraction_to_mpf(nf), order, REMAINDER_LARGE_N[quantity]
        )
    return SeriesValue(
        quantity=quantity,
        n=nf,
        params=params,
        order=order,
        value=value,
        truncation_order=truncation,
    )


def series_longtime(
    quantity: str,
    n: int,
    params: WeightParams,
    direction: str,
    order: Optional[int] = None,
    ctx: Optional[PrecisionContext] = None,
) -> SeriesValue:
    """Truncated expansion as t -> +inf ('plus') or t -> -inf ('minus')."""
    if quantity not in LONGTIME_QUANTITIES:
        raise ValueError(f"quantity must be one of {LONGTIME_QUANTITIES}")
    if direction not in ("plus", "minus"):
        raise ValueError("direction must be 'plus' or 'minus'")
    if n < 0 or n != int(n):
        raise ValueError("n must be a nonnegative integer")
    if (direction == "plus") != (params.t > 0):
        raise ValueError(f"direction {direction!r} inconsistent with t = {params.t}")
    if ctx is None:
        ctx = PrecisionContext(target_digits=30)
    terms = _longtime_terms(quantity, int(n), params, direction, ctx)
    with ctx.workdps():
        u = abs(params.t_mp())
        value, order, truncation = _evaluate(
            terms, u, order, REMAINDER_LONGTIME[(quantity, direction)]
        )
    return SeriesValue(
        quantity=quantity,
        n=as_fraction(n),
        params=params,
        order=order,
        value=value,
        truncation_order=truncation,
    )


# ---------------------------------------------------------------------------
# exact-vs-series diagnostics
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    grid: Fraction
    exact: mpf
    series: mpf

    @property
    def abs_error(self) -> mpf:
        return abs(self.exact - self.series)


@dataclass(frozen=True)
class AsymptoticComparison:
    quantity: str
    params: WeightParams
    regime: str  # "large_n" | "t_plus" | "t_minus"
    order: int
    rows: Tuple[ComparisonRow, ...]
    fitted_exponent: float
    expected_exponent: float
    outside_regime: bool

    @property
    def matches_expected(self) -> bool:
        return abs(self.fitted_exponent - self.expected_exponent) <= 0.5


def fit_exponent(points: Sequence[Tuple[float, float]]) -> float:
    """Least-squares slope of log(err) against log(grid); needs >= 3 points."""
    if len(points) < 3:
        raise ValueError("exponent fit requires at least 3 grid points")
    xs = [math.log(g) for g, _ in points]
    ys = [math.log(e) for _, e in points]
    xbar = sum(xs) / len(xs)
    ybar = sum(ys) / len(ys)
    num = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    den = sum((x - xbar) ** 2 for x in xs)
    return num / den


def _exact_large_n(quantity, params, n_values, ctx):
    if quantity in ("X", "Y", "A"):
        out = {}
        for n in n_values:
            sup = solve_endpoints(n, params, ctx)
            out[n] = {"X": sup.X, "Y": sup.Y, "A": sup.A_mult}[quantity]
        return out
    nmax = max(int(n) for n in n_values) + 1
    pipe = recurrence_pipeline(params, nmax, ctx)
    rec = pipe.recurrence
    pick: Callable[[int], mpf] = {
        "alpha": lambda n: rec.alpha[n],
        "beta": lambda n: rec.beta[n],
        "p": lambda n: rec.p[n],
        "lnh": pipe.log_h,
        "lnD": pipe.log_D,
    }[quantity]
    return {n: pick(int(n)) for n in n_values}


def compare_asymptotics(
    quantity: str,
    params: WeightParams,
    ctx: PrecisionContext,
    n_values: Optional[Sequence[Numeric]] = None,
    t_values: Optional[Sequence[Numeric]] = None,
    n_fixed: Optional[int] = None,
    order: Optional[int] = None,
) -> AsymptoticComparison:
    """Exact pipeline vs truncated series on a grid, with an exponent fit.

    Exactly one of ``n_values`` (large-n regime) and ``t_values`` (long-time
    regime, requires ``n_fixed``) must be given.  The fitted local error
    exponent should match the series' first dropped power once the grid is
    inside the asymptotic regime.
    """
    if (n_values is None) == (t_values is None):
        raise ValueError("give exactly one of n_values / t_values")
    rows = []
    order_used = 0
    if n_values is not None:
        grid = [as_fraction(n) for n in n_values]
        if any(g < 1 for g in grid):
            raise ValueError("n grid must be >= 1")
        exact = _exact_large_n(quantity, params, grid, ctx)
        for g in grid:
            sv = series_largeN(quantity, g, params, order=order, ctx=ctx)
            rows.append(ComparisonRow(grid=g, exact=exact[g], series=sv.value))
        expected = sv.truncation_order
        order_used = sv.order
        regime = "large_n"
        outside = params.lam < 0
    else:
        if n_fixed is None:
            raise ValueError("long-time comparison needs n_fixed")
        grid = [as_fraction(t) for t in t_values]
        signs = {g > 0 for g in grid}
        if len(signs) != 1:
            raise ValueError("t grid must not mix signs")
        direction = "plus" if signs.pop() else "minus"
        for g in grid:
            p_at = WeightParams(params.lam, g)
            pipe = recurrence_pipeline(p_at, n_fixed + 1, ctx)
            rec = pipe.recurrence
            exact_val = {
                "alpha": rec.alpha[n_fixed],
                "beta": rec.beta[n_fixed],
                "p": rec.p[n_fixed],
                "lnh": pipe.log_h(n_fixed),
                "lnD": pipe.log_D(n_fixed),
            }[quantity]
            sv = series_longtime(quantity, n_fixed, p_at, direction, order=order, ctx=ctx)
            rows.append(ComparisonRow(grid=g, exact=exact_val, series=sv.value))
        expected = sv.truncation_order
        order_used = sv.order
        regime = f"t_{direction}"
        outside = False

    floor = 10.0 ** (-2 * ctx.target_digits)
    points = [(abs(float(r.grid)), max(float(r.abs_error), floor)) for r in rows]
    fitted = fit_exponent(points)
    return AsymptoticComparison(
        quantity=quantity,
        params=params,
        regime=regime,
        order=order_used,
        rows=tuple(rows),
        fitted_exponent=fitted,
        expected_exponent=float(expected),
        outside_regime=outside,
    )
