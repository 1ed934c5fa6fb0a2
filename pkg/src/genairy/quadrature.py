"""Tanh-sinh quadrature on (0, infinity) for rapidly decaying integrands.

The integrands of interest look like ``x**s * (analytic, super-exponentially
decaying)`` with ``s > -1``.  The interval is split at 1: on (0, 1] an
``x = u**m`` power substitution removes the algebraic endpoint singularity
(plain tanh-sinh stalls at roughly half the working precision there because
the nodes near 0 are stored with absolute, not relative, accuracy), and on
[1, X*] the tail is truncated where the integrand drops below
``10**(-working_digits - 10)``, found by doubling.  Extra split points let
callers flag an interior peak (the t*x factor pushes the mass out to
x ~ sqrt(t) for large t).
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

import mpmath
from mpmath import mp, mpf

from .errors import QuadratureError
from .precision import PrecisionContext, fraction_to_mpf

_TAIL_GUARD_DIGITS = 10
_MAX_DOUBLINGS = 80


def _substitution_power(singular_exponent: float) -> int:
    """Power m so that x = u**m makes u**(m(1+s)-1) at least linear at 0."""
    if singular_exponent >= 1:
        return 1
    m = math.ceil(2.0 / (1.0 + float(singular_exponent)))
    return max(2, min(m, 64))


def _tail_cutoff(f, start: mpf, threshold: mpf) -> mpf:
    x = start
    for _ in range(_MAX_DOUBLINGS):
        if abs(f(x)) < threshold:
            return x
        x *= 2
    raise QuadratureError(
        "quadrature failed: could not locate a truncation point; "
        "integrand does not appear to decay"
    )


def integrate_halfline(
    f: Callable[[mpf], mpf],
    ctx: PrecisionContext,
    *,
    singular_exponent: float = 0.0,
    split_hints: Sequence[float] = (),
) -> mpf:
    """Integrate ``f`` over (0, infinity) to the context tolerance.

    Parameters
    ----------
    f : callable
        Integrand, evaluated at mpf points under the working precision.
        May blow up like ``x**s`` at 0 with ``s = singular_exponent > -1``
        and must decay faster than any polynomial at infinity.
    ctx : PrecisionContext
        Requested accuracy; the relative error of the result is certified
        against ``ctx.quad_rel_tol`` and the precision is escalated (up to
        16x) until mpmath's error estimate meets it.
    singular_exponent : float
        Declared power of the algebraic singularity at 0.
    split_hints : sequence of float
        Interior abscissae (e.g. the location of a sharp peak) inserted as
        extra tanh-sinh panel boundaries.

    Raises
    ------
    QuadratureError
        If the tolerance is still not met at the top of the precision
        ladder; the exception carries the last two estimates.
    """
    if singular_exponent <= -1:
        raise ValueError("singular exponent must be > -1 for an integrable endpoint")

    m = _substitution_power(singular_exponent)
    estimates = []
    for level in ctx.ladder():
        with mp.workdps(level.working_digits):
            tol = fraction_to_mpf(ctx.quad_rel_tol)
            threshold = mpf(10) ** (-(level.working_digits + _TAIL_GUARD_DIGITS))
            hints = sorted(mpf(h) for h in split_hints if h > 1)
            start = 2 * hints[-1] if hints else mpf(2)
            cutoff = _tail_cutoff(f, start, threshold)

            mexp = m  # bind for the closure
            g = (lambda u: mexp * u ** (mexp - 1) * f(u**mexp)) if m > 1 else f
            head_points = [mpf(0)] + sorted(
                h for h in (mpf(hh) for hh in split_hints) if 0 < h < 1
            ) + [mpf(1)]
            if m > 1:
                head_points = [x ** (mpf(1) / mexp) for x in head_points[1:-1]]
                head_points = [mpf(0)] + head_points + [mpf(1)]
            tail_points = [mpf(1)] + [h for h in hints if h < cutoff] + [cutoff]

            head, err_head = mpmath.quad(g, head_points, error=True, maxdegree=10)
            tail, err_tail = mpmath.quad(f, tail_points, error=True, maxdegree=10)
            value = head + tail
            err = err_head + err_tail
            scale = max(abs(value), abs(head), abs(tail))
            estimates.append(value)
            if scale == 0 or err <= tol * scale:
                return value
    raise QuadratureError(
        "quadrature failed: tolerance "
        f"{float(ctx.quad_rel_tol):.1e} not reached after escalation",
        estimates=estimates[-2:],
    )
