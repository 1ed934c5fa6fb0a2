"""The generalized Airy weight and its moment sequence.

The weight is ``w(x) = x**lam * exp(-x**3/3 + t*x)`` on (0, infinity) with
lam > -1.  Only the first three moments are computed by quadrature; the rest
follow from the exact three-term recursion

    mu[j+3] = (j + 1 + lam) * mu[j] + t * mu[j+1]

obtained by integrating (x**(j+1) * w)' over the half line.  For t < 0 the
recursion cancels, so a table is only accepted after re-verifying two entries
by direct quadrature, escalating the working precision on mismatch.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import mpmath
from mpmath import mp, mpf

from .errors import EscalationError
from .precision import (
    Numeric,
    PrecisionContext,
    as_fraction,
    fraction_str,
    fraction_to_mpf,
)
from .quadrature import integrate_halfline


@dataclass(frozen=True)
class WeightParams:
    """Exponent and linear-potential parameter of the weight.

    Stored as exact rationals so every precision level rounds the same
    underlying numbers.
    """

    lam: Fraction
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lam", as_fraction(self.lam))
        object.__setattr__(self, "t", as_fraction(self.t))
        if self.lam <= -1:
            raise ValueError("lam must be > -1 for the moments to exist")

    def lam_mp(self) -> mpf:
        return fraction_to_mpf(self.lam)

    def t_mp(self) -> mpf:
        return fraction_to_mpf(self.t)

    def shifted_t(self, dt: Fraction) -> "WeightParams":
        return WeightParams(self.lam, self.t + as_fraction(dt))

    def label(self) -> str:
        return f"lambda={fraction_str(self.lam)}, t={fraction_str(self.t)}"


def weight_params(lam: Numeric, t: Numeric) -> WeightParams:
    """Convenience constructor accepting int/float/str/Fraction."""
    return WeightParams(as_fraction(lam), as_fraction(t))


def weight_eval(x, params: WeightParams) -> mpf:
    """w(x) = x**lam * exp(-x**3/3 + t*x), at the ambient precision."""
    xm = mpf(x)
    if xm <= 0:
        raise ValueError("weight is defined on x > 0 only")
    lam = params.lam_mp()
    t = params.t_mp()
    return xm**lam * mpmath.exp(-(xm**3) / 3 + t * xm)


def potential_eval(x, params: WeightParams):
    """Potential v = -ln w and its derivative: (v, v')."""
    xm = mpf(x)
    if xm <= 0:
        raise ValueError("potential is defined on x > 0 only")
    lam = params.lam_mp()
    t = params.t_mp()
    v = xm**3 / 3 - t * xm - lam * mpmath.log(xm)
    v_prime = xm**2 - t - lam / xm
    return v, v_prime


def integrand_peak(params: WeightParams, degree: float) -> float:
    """Location of the maximum of x**degree * w(x).

    Solves x**3 - t*x = degree + lam (float Newton); the peak governs where
    the quadrature panels must cluster once degree or t gets large.
    """
    s = max(float(params.lam) + degree, 0.0)
    t = float(params.t)
    x = max(s ** (1.0 / 3.0), (max(t, 0.0)) ** 0.5, 1e-3)
    for _ in range(60):
        f = x**3 - t * x - s
        df = 3 * x**2 - t
        if df <= 0:
            x *= 2
            continue
        step = f / df
        x -= step
        if abs(step) < 1e-12 * x:
            break
    return x


def _moment_split_hints(params: WeightParams, degree: float = 0.0) -> list:
    """Panel boundaries for x**degree * w(x) integrands.

    The peak (pushed out by the x**degree factor and by large positive t)
    gets a cluster of panels; for large negative t the mass sits in a
    boundary layer of width ~ 1/|t| at 0.
    """
    hints = []
    peak = integrand_peak(params, degree)
    if peak > 1:
        hints += [peak / 2, peak, 2 * peak]
    t = float(params.t)
    if t < -4:
        hints.append(min(0.5, 1.0 / abs(t)))
    return hints


def _moment_by_quadrature(params: WeightParams, j: int, ctx: PrecisionContext) -> mpf:
    exponent = float(params.lam) + j

    def integrand(x):
        return x**j * weight_eval(x, params)

    return integrate_halfline(
        integrand,
        ctx,
        singular_exponent=exponent,
        split_hints=_moment_split_hints(params, j),
    )


def seed_moments(params: WeightParams, ctx: PrecisionContext):
    """(mu_0, mu_1, mu_2) by direct quadrature."""
    return tuple(_moment_by_quadrature(params, j, ctx) for j in range(3))


@dataclass(frozen=True)
class MomentTable:
    """mu_0 .. mu_jmax at a stated accuracy.

    ``digits`` is the certified accuracy; the stored mpf values carry the full
    ``working_digits`` mantissa so downstream builds can reuse the guard
    digits.
    """

    params: WeightParams
    digits: int
    working_digits: int
    mu: tuple

    @property
    def jmax(self) -> int:
        return len(self.mu) - 1

    def validate_recursion(self) -> mpf:
        """Largest relative residual of the three-term moment recursion."""
        with mp.workdps(self.working_digits):
            lam = self.params.lam_mp()
            t = self.params.t_mp()
            worst = mpf(0)
            for j in range(len(self.mu) - 3):
                res = self.mu[j + 3] - (j + 1 + lam) * self.mu[j] - t * self.mu[j + 1]
                worst = max(worst, abs(res) / self.mu[j + 3])
            return worst

    # -- serialization -------------------------------------------------------

    def to_json(self) -> str:
        ndig = self.working_digits + 10
        payload = {
            "lambda": fraction_str(self.params.lam),
            "t": fraction_str(self.params.t),
            "digits": self.digits,
            "working_digits": self.working_digits,
            "mu": [mpmath.nstr(m, ndig) for m in self.mu],
        }
        return json.dumps(payload, indent=1)

    @classmethod
    def from_json(cls, text: str) -> "MomentTable":
        payload = json.loads(text)
        params = weight_params(payload["lambda"], payload["t"])
        working = int(payload["working_digits"])
        with mp.workdps(working + 10):
            mu = tuple(mpf(s) for s in payload["mu"])
        table = cls(
            params=params,
            digits=int(payload["digits"]),
            working_digits=working,
            mu=mu,
        )
        tol = mpf(10) ** (-(table.digits - 2))
        if table.validate_recursion() > tol:
            raise ValueError("moment table violates the recursion residual bound")
        return table


def _build_mu(params: WeightParams, jmax: int, level: PrecisionContext):
    seeds = seed_moments(params, level)
    with mp.workdps(level.working_digits):
        lam = params.lam_mp()
        t = params.t_mp()
        mu = list(seeds)
        for j in range(jmax - 2):
            mu.append((j + 1 + lam) * mu[j] + t * mu[j + 1])
    return mu


def moment_table(params: WeightParams, jmax: int, ctx: PrecisionContext) -> MomentTable:
    """Seed three moments by quadrature, extend by recursion, cross-check.

    Two entries are re-verified against direct quadrature: one at a
    deterministically seeded random index in [3, jmax] and one at jmax itself
    (cancellation in the recursion is worst at the top).  On mismatch the
    working precision is doubled, up to 16x.
    """
    if jmax < 2:
        raise ValueError("jmax must be >= 2")
    rng = random.Random(f"{params.label()}|{jmax}|{ctx.target_digits}")
    j_check = rng.randint(3, jmax) if jmax >= 3 else jmax
    checks = sorted({j_check, jmax})

    target_tol = None
    last_error = None
    for level in ctx.ladder():
        mu = _build_mu(params, jmax, level)
        with mp.workdps(level.working_digits):
            if target_tol is None:
                target_tol = mpf(10) ** (-ctx.target_digits)
            ok = True
            for j in checks:
                direct = _moment_by_quadrature(params, j, level)
                rel = abs(mu[j] - direct) / abs(direct)
                if rel > target_tol:
                    ok = False
                    last_error = (j, rel)
                    break
            if ok:
                return MomentTable(
                    params=params,
                    digits=ctx.target_digits,
                    working_digits=level.working_digits,
                    mu=tuple(mu),
                )
    raise EscalationError(
        f"moment recursion disagrees with quadrature at j={last_error[0]} "
        f"(relative {mpmath.nstr(last_error[1], 5)}) even at 16x working precision"
    )
