"""Ladder-operator auxiliaries and the identity checks they satisfy.

For this weight the ladder coefficient functions are rational with a single
pole at 0:

    A_n(x) = x + alpha_n + R_n / x,      B_n(x) = beta_n + r_n / x,

and the compatibility structure collapses to six scalar identities per n
plus a two-equation discrete system.  Everything here is a pure read of a
finished :class:`~genairy.recurrence.RecurrenceTable`; residuals are signed
(LHS - RHS) and should sit at the roundoff floor of the table.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from mpmath import mp, mpf

from .moments import MomentTable, potential_eval, weight_eval
from .precision import PrecisionContext
from .quadrature import integrate_halfline
from .recurrence import RecurrenceTable, polynomial_eval
from .moments import _moment_split_hints


@dataclass(frozen=True)
class LadderAux:
    """R_n and r_n, tagged with how they were computed."""

    n: int
    R: mpf
    r: mpf
    source: str  # "closed_form" | "integral"


@dataclass(frozen=True)
class LadderCoefficients:
    """Coefficient views of A_n = x + alpha_n + R_n/x and B_n = beta_n + r_n/x."""

    n: int
    A: Tuple[mpf, mpf, mpf]  # (1, alpha_n, R_n)
    B: Tuple[mpf, mpf]  # (beta_n, r_n)

    def A_at(self, x) -> mpf:
        return self.A[0] * x + self.A[1] + self.A[2] / x

    def A_prime_at(self, x) -> mpf:
        return self.A[0] - self.A[2] / x**2

    def B_at(self, x) -> mpf:
        return self.B[0] + self.B[1] / x

    def B_prime_at(self, x) -> mpf:
        return -self.B[1] / x**2


def _R(table: RecurrenceTable, n: int, t: mpf) -> mpf:
    return table.alpha[n] ** 2 + table.beta[n] + table.beta[n + 1] - t


def _r(table: RecurrenceTable, n: int) -> mpf:
    if n == 0:
        return mpf(0)
    return (table.alpha[n] + table.alpha[n - 1]) * table.beta[n] - n


def aux_closed(table: RecurrenceTable, n: int) -> LadderAux:
    """R_n, r_n from the recurrence coefficients alone."""
    if not 0 <= n <= table.nmax - 1:
        raise ValueError(f"n must be in [0, {table.nmax - 1}] (needs beta_{n+1})")
    with mp.workdps(table.working_digits):
        t = table.params.t_mp()
        return LadderAux(n=n, R=_R(table, n, t), r=_r(table, n), source="closed_form")


def ladder_coefficients(table: RecurrenceTable, n: int) -> LadderCoefficients:
    aux = aux_closed(table, n)
    return LadderCoefficients(
        n=n, A=(mpf(1), table.alpha[n], aux.R), B=(table.beta[n], aux.r)
    )


def aux_integral(
    table: RecurrenceTable, moments: MomentTable, n: int, ctx: PrecisionContext
) -> LadderAux:
    """R_n, r_n from their defining weighted integrals (quadrature route)."""
    if n < 1:
        raise ValueError("the integral form of r_n needs n >= 1")
    if n > table.nmax:
        raise ValueError(f"n must be <= {table.nmax}")
    params = table.params
    exponent = float(params.lam) + 2
    hints = _moment_split_hints(params, 2 * n + 2)

    def f_RR(y):
        pn = polynomial_eval(table, n, y)[0]
        return y**2 * pn**2 * weight_eval(y, params)

    def f_rr(y):
        pn = polynomial_eval(table, n, y)[0]
        pm = polynomial_eval(table, n - 1, y)[0]
        return y**2 * pn * pm * weight_eval(y, params)

    int_R = integrate_halfline(f_RR, ctx, singular_exponent=exponent, split_hints=hints)
    int_r = integrate_halfline(f_rr, ctx, singular_exponent=exponent, split_hints=hints)
    with mp.workdps(ctx.working_digits):
        t = params.t_mp()
        R = int_R / table.h[n] - t
        r = int_r / table.h[n - 1] - n
    return LadderAux(n=n, R=R, r=r, source="integral")


#: order of the residuals returned by check_compatibility
COMPATIBILITY_NAMES = ("s11", "s12", "s21", "s22", "s23", "sum_rule")


def check_compatibility(table: RecurrenceTable, n: int):
    """Signed residuals of the six scalar compatibility identities.

    In order: the two identities from the first supplementary condition,
    the three from the telescoped sum rule, and the unnumbered
    sum-of-R identity; sums over j use Sum(alpha_j) = -p(n) and an
    accumulated Sum(R_j).
    """
    if not 1 <= n <= table.nmax - 1:
        raise ValueError(f"n must be in [1, {table.nmax - 1}]")
    with mp.workdps(table.working_digits):
        lam = table.params.lam_mp()
        t = table.params.t_mp()
        al, be = table.alpha, table.beta
        R = [_R(table, j, t) for j in range(n + 1)]
        r = [_r(table, j) for j in range(n + 2)]
        sum_alpha = -table.p[n]
        sum_R = mpf(0)
        for j in range(n):
            sum_R += R[j]
        res_s11 = (be[n + 1] + be[n]) - (R[n] - al[n] ** 2 + t)
        res_s12 = (r[n + 1] + r[n]) - (lam - al[n] * R[n])
        res_s21 = (r[n] + n) - be[n] * (al[n] + al[n - 1])
        res_s22 = (r[n] ** 2 - lam * r[n]) - be[n] * R[n] * R[n - 1]
        res_s23 = (be[n] ** 2 - t * be[n] + sum_alpha) - be[n] * (
            al[n] * al[n - 1] + R[n] + R[n - 1]
        )
        res_sum = (2 * be[n] * r[n] - lam * be[n] - t * r[n] + sum_R) - be[n] * (
            al[n] * R[n - 1] + al[n - 1] * R[n]
        )
    return res_s11, res_s12, res_s21, res_s22, res_s23, res_sum


def check_discrete_system(table: RecurrenceTable, n: int):
    """Residuals of the two nonlinear string equations in n."""
    if not 1 <= n <= table.nmax - 1:
        raise ValueError(f"n must be in [1, {table.nmax - 1}]")
    with mp.workdps(table.working_digits):
        lam = table.params.lam_mp()
        t = table.params.t_mp()
        al, be = table.alpha, table.beta
        res1 = (
            al[n] ** 3
            - t * al[n]
            + (2 * al[n] + al[n - 1]) * be[n]
            + (2 * al[n] + al[n + 1]) * be[n + 1]
            - (2 * n + lam + 1)
        )
        rn = (al[n] + al[n - 1]) * be[n] - n
        res2 = (rn**2 - lam * rn) - be[n] * (
            al[n] ** 2 + be[n] + be[n + 1] - t
        ) * (al[n - 1] ** 2 + be[n - 1] + be[n] - t)
    return res1, res2


def check_pn_and_H(table: RecurrenceTable, n: int):
    """Residuals of the p(n) closed form and of H_n computed both ways."""
    if not 1 <= n <= table.nmax - 1:
        raise ValueError(f"n must be in [1, {table.nmax - 1}]")
    with mp.workdps(table.working_digits):
        t = table.params.t_mp()
        al, be = table.alpha, table.beta
        bracket = (
            al[n - 1] ** 2
            + al[n - 1] * al[n]
            + al[n] ** 2
            + be[n - 1]
            + be[n]
            + be[n + 1]
            - t
        )
        res_p = table.p[n] + be[n] * bracket
        res_H = (-table.p[n]) - be[n] * bracket
    return res_p, res_H


def check_ode(table: RecurrenceTable, n: int, x, ctx: PrecisionContext) -> mpf:
    """Relative residual of the second-order ODE satisfied by P_n at x.

    The residual is scaled by the largest of the three term magnitudes.
    Raises if x sits too close to the zero of A_n, where the ODE
    coefficients blow up.
    """
    if not 1 <= n <= table.nmax - 1:
        raise ValueError(f"n must be in [1, {table.nmax - 1}]")
    with mp.workdps(table.working_digits):
        xm = mpf(x)
        if xm <= 0:
            raise ValueError("x must be positive")
        coeff_n = ladder_coefficients(table, n)
        coeff_m = ladder_coefficients(table, n - 1)
        An = coeff_n.A_at(xm)
        if abs(An) < mpf(10) ** (-ctx.target_digits // 2):
            raise ValueError("evaluation point too close to a zero of A_n")
        dAn = coeff_n.A_prime_at(xm)
        Bn = coeff_n.B_at(xm)
        dBn = coeff_n.B_prime_at(xm)
        Anm1 = coeff_m.A_at(xm)
        _, v_prime = potential_eval(xm, table.params)
        P, dP, d2P = polynomial_eval(table, n, xm)
        term1 = d2P
        term2 = -(v_prime + dAn / An) * dP
        term3 = (
            dBn - Bn**2 - v_prime * Bn + table.beta[n] * An * Anm1 - dAn * Bn / An
        ) * P
        scale = max(abs(term1), abs(term2), abs(term3))
        if scale == 0:
            return mpf(0)
        return (term1 + term2 + term3) / scale
