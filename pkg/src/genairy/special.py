"""Special constants and functions used by the asymptotic expansions.

Thin wrappers over mpmath evaluated at the context working precision.  The
test suite pins these against independent oracles (Gamma-integral quadrature,
the Weierstrass/Glaisher route for Barnes G, the Glaisher limit for
zeta'(-1)), so the implementations here may be swapped without touching the
contracts.
"""

from __future__ import annotations

import mpmath
from mpmath import mp, mpf

from .precision import PrecisionContext


def log_gamma(x, ctx: PrecisionContext) -> mpf:
    """ln Gamma(x) for x > 0."""
    with ctx.workdps():
        xm = mpf(x)
        if xm <= 0:
            raise ValueError("log_gamma requires x > 0")
        return mpmath.loggamma(xm)


def log_barnes_g(x, ctx: PrecisionContext) -> mpf:
    """ln G(x) for x > 0, G the Barnes G-function.

    Satisfies ln G(x+1) = ln Gamma(x) + ln G(x); G(1) = G(2) = 1.
    """
    with ctx.workdps():
        xm = mpf(x)
        if xm <= 0:
            raise ValueError("log_barnes_g requires x > 0")
        return mpmath.log(mpmath.barnesg(xm))


def zeta_prime_minus_one(ctx: PrecisionContext) -> mpf:
    """zeta'(-1), the derivative of the Riemann zeta function at -1."""
    with ctx.workdps():
        return mpmath.zeta(-1, derivative=1)


def kappa(ctx: PrecisionContext) -> mpf:
    """The cube root of 10; the scale constant of all large-n expansions."""
    with ctx.workdps():
        return mpf(10) ** (mpf(1) / 3)
