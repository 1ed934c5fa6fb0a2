"""Monic orthogonal polynomials, recurrence coefficients and Hankel data.

Two independent routes are built from the same moment table:

* the Stieltjes procedure with exact coefficient vectors (inner products
  expanded through the moments), giving alpha_n, beta_n, h_n and the
  sub-leading coefficients p(n);
* an LDL factorization of the Hankel moment matrix, whose pivots equal h_n
  and whose log-product gives ln D_n.

Moment pipelines are catastrophically ill-conditioned in fixed precision, so
agreement of the two routes to ``target_digits - 5`` is the acceptance
certificate of the escalation ladder in :func:`recurrence_pipeline`.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional

import mpmath
from mpmath import mp, mpf

from .errors import EscalationError, NotPositiveDefiniteError
from .moments import MomentTable, WeightParams, moment_table, weight_params
from .precision import PrecisionContext, fraction_str


@dataclass(frozen=True)
class RecurrenceTable:
    """Per-n data of the monic orthogonal polynomials.

    ``alpha[n]``, ``beta[n]`` (beta[0] = 0), ``h[n]`` for n <= nmax and
    ``p[n]`` for n <= nmax + 1 (p[0] = 0).  ``coeffs[n]`` is the monic
    coefficient vector of P_n, constant term first; it extends one step past
    nmax so p(nmax+1) is available to the ladder identities.
    """

    params: WeightParams
    nmax: int
    digits: int
    working_digits: int
    alpha: tuple
    beta: tuple
    h: tuple
    p: tuple
    coeffs: tuple

    def to_rows(self, digits: Optional[int] = None):
        """Rows (n, alpha, beta, h, p) as decimal strings."""
        d = digits or self.digits
        for n in range(self.nmax + 1):
            yield {
                "n": n,
                "alpha": mpmath.nstr(self.alpha[n], d),
                "beta": mpmath.nstr(self.beta[n], d),
                "h": mpmath.nstr(self.h[n], d),
                "p": mpmath.nstr(self.p[n], d),
            }

    def to_csv(self, digits: Optional[int] = None) -> str:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["n", "alpha", "beta", "h", "p"])
        writer.writeheader()
        for row in self.to_rows(digits):
            writer.writerow(row)
        return buf.getvalue()

    def to_json(self, digits: Optional[int] = None) -> str:
        payload = {
            "lambda": fraction_str(self.params.lam),
            "t": fraction_str(self.params.t),
            "nmax": self.nmax,
            "digits": digits or self.digits,
            "rows": list(self.to_rows(digits)),
        }
        return json.dumps(payload, indent=1)


@dataclass(frozen=True)
class HankelSequence:
    """ln D_0 .. ln D_{nmax+1} plus the LDL pivots d_0 .. d_nmax."""

    logD: tuple
    pivots: tuple

    def beta_from_logD(self, n: int) -> mpf:
        """beta_n recovered as exp of the second difference of ln D."""
        return mpmath.exp(self.logD[n + 1] + self.logD[n - 1] - 2 * self.logD[n])


def build_recurrence(
    moments: MomentTable, nmax: int, ctx: PrecisionContext
) -> RecurrenceTable:
    """Stieltjes procedure with inner products expanded through the moments."""
    if moments.jmax < 2 * nmax + 2:
        raise ValueError("moment table too short: need jmax >= 2*nmax + 2")
    mu = moments.mu
    with mp.workdps(moments.working_digits):

        def inner(ca, cb, shift=0):
            total = mpf(0)
            for i, a in enumerate(ca):
                for k, b in enumerate(cb):
                    total += a * b * mu[i + k + shift]
            return total

        alpha, beta, h, p = [], [mpf(0)], [], [mpf(0)]
        coeffs = [[mpf(1)]]
        prev, cur = None, coeffs[0]
        for n in range(nmax + 1):
            hn = inner(cur, cur)
            if hn <= 0:
                raise NotPositiveDefiniteError(
                    f"moment table not positive definite at this precision (h_{n} <= 0)"
                )
            an = inner(cur, cur, 1) / hn
            h.append(hn)
            alpha.append(an)
            if n > 0:
                beta.append(h[n] / h[n - 1])
            nxt = [mpf(0)] * (n + 2)
            for i, c in enumerate(cur):
                nxt[i + 1] += c
                nxt[i] -= an * c
            if n > 0:
                for i, c in enumerate(prev):
                    nxt[i] -= beta[n] * c
            prev, cur = cur, nxt
            coeffs.append(cur)
            p.append(cur[n])  # x^n coefficient of P_{n+1}
    return RecurrenceTable(
        params=moments.params,
        nmax=nmax,
        digits=ctx.target_digits,
        working_digits=moments.working_digits,
        alpha=tuple(alpha),
        beta=tuple(beta),
        h=tuple(h),
        p=tuple(p),
        coeffs=tuple(tuple(c) for c in coeffs),
    )


def hankel_determinants_direct(
    moments: MomentTable, nmax: int, ctx: PrecisionContext
) -> HankelSequence:
    """ln D_n via LDL pivots of the (nmax+1) x (nmax+1) Hankel matrix."""
    if moments.jmax < 2 * nmax:
        raise ValueError("moment table too short for the Hankel matrix")
    mu = moments.mu
    size = nmax + 1
    with mp.workdps(moments.working_digits):
        L = [[mpf(0)] * size for _ in range(size)]
        d = [mpf(0)] * size
        for j in range(size):
            s = mu[2 * j]
            for k in range(j):
                s -= L[j][k] * L[j][k] * d[k]
            if s <= 0:
                raise NotPositiveDefiniteError(
                    f"moment table not positive definite at this precision "
                    f"(pivot {j} <= 0)"
                )
            d[j] = s
            for i in range(j + 1, size):
                s2 = mu[i + j]
                for k in range(j):
                    s2 -= L[i][k] * L[j][k] * d[k]
                L[i][j] = s2 / d[j]
        logD = [mpf(0)]
        for j in range(size):
            logD.append(logD[-1] + mpmath.log(d[j]))
    return HankelSequence(logD=tuple(logD), pivots=tuple(d))


def polynomial_eval(table: RecurrenceTable, n: int, x) -> tuple:
    """(P_n(x), P_n'(x), P_n''(x)) by the differentiated recurrence."""
    if not 0 <= n <= table.nmax:
        raise ValueError(f"n must be in [0, {table.nmax}]")
    xm = mpf(x)
    P, dP, d2P = mpf(1), mpf(0), mpf(0)
    if n == 0:
        return P, dP, d2P
    Pn, dPn, d2Pn = xm - table.alpha[0], mpf(1), mpf(0)
    for k in range(1, n):
        a, b = table.alpha[k], table.beta[k]
        P, Pn, dP, dPn, d2P, d2Pn = (
            Pn,
            (xm - a) * Pn - b * P,
            dPn,
            Pn + (xm - a) * dPn - b * dP,
            d2Pn,
            2 * dPn + (xm - a) * d2Pn - b * d2P,
        )
    return Pn, dPn, d2Pn


@dataclass(frozen=True)
class Pipeline:
    """Moment table plus both recurrence routes, mutually certified."""

    moments: MomentTable
    recurrence: RecurrenceTable
    hankel: HankelSequence

    def log_D(self, n: int) -> mpf:
        return self.hankel.logD[n]

    def log_h(self, n: int) -> mpf:
        return mpmath.log(self.recurrence.h[n])


def _routes_agree(rec: RecurrenceTable, han: HankelSequence, tol: mpf) -> bool:
    for n in range(rec.nmax + 1):
        if abs(han.pivots[n] - rec.h[n]) > tol * rec.h[n]:
            return False
        if n >= 1:
            bn = han.beta_from_logD(n)
            if abs(bn - rec.beta[n]) > tol * rec.beta[n]:
                return False
    return True


def recurrence_pipeline(
    params: WeightParams, nmax: int, ctx: PrecisionContext
) -> Pipeline:
    """Full moments -> Stieltjes + LDL build with the escalation ladder.

    Accepts once the two routes agree to ``target_digits - 5`` relative;
    otherwise doubles the working precision (16x cap, then raises).
    """
    base = ctx.scaled_for(nmax)
    failures = []
    for level in base.ladder():
        try:
            moments = moment_table(params, 2 * nmax + 2, level)
            rec = build_recurrence(moments, nmax, level)
            han = hankel_determinants_direct(moments, nmax, level)
        except NotPositiveDefiniteError as exc:
            failures.append(str(exc))
            continue
        with mp.workdps(moments.working_digits):
            tol = mpf(10) ** (-(ctx.target_digits - 5))
            if _routes_agree(rec, han, tol):
                return Pipeline(moments=moments, recurrence=rec, hankel=han)
        failures.append(f"route disagreement at working={level.working_digits}")
    raise EscalationError(
        "Stieltjes and LDL routes never agreed to target accuracy: "
        + "; ".join(failures[-2:])
    )


def pipeline(lam, t, nmax: int, digits: int) -> Pipeline:
    """One-call convenience wrapper used by the CLI and tests."""
    return recurrence_pipeline(
        weight_params(lam, t), nmax, PrecisionContext(target_digits=digits)
    )
