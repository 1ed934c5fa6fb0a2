"""Precision policy: target vs working digits and the escalation ladder.

Everything numeric in this package runs on mpmath reals.  A
:class:`PrecisionContext` says how many decimal digits the caller wants
(``target_digits``) and how many the internal computations use
(``working_digits``).  Operations that cannot certify their own error run a
ladder of attempts at 1x, 2x, 4x, 8x, 16x the working precision and accept
once independent routes agree to the target.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterator, Union

from mpmath import mp, mpf

Numeric = Union[int, float, str, Fraction]

#: factor cap for the escalation ladder (1x .. 16x working digits)
MAX_ESCALATION_FACTOR = 16


def as_fraction(value: Numeric) -> Fraction:
    """Coerce user input to an exact rational.

    Floats are taken at their exact binary value; strings are parsed as
    exact decimals (or ``p/q``).  Keeping parameters rational lets every
    escalation level re-round them from the same exact quantity.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, float, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact number")


def fraction_to_mpf(value: Fraction) -> mpf:
    """Round an exact rational to an mpf at the current precision."""
    return mpf(value.numerator) / mpf(value.denominator)


def fraction_str(value: Fraction) -> str:
    """Exact string form: plain decimal when finite, else ``p/q``."""
    den = value.denominator
    while den % 2 == 0:
        den //= 2
    while den % 5 == 0:
        den //= 5
    if den == 1:
        # exact decimal expansion
        tens = 0
        den = value.denominator
        while den % 2 == 0:
            den //= 2
            tens += 1
        fives = 0
        while den % 5 == 0:
            den //= 5
            fives += 1
        shift = max(tens, fives)
        scaled = value.numerator * 10**shift // value.denominator
        if shift == 0:
            return str(scaled)
        sign = "-" if scaled < 0 else ""
        digits = str(abs(scaled)).rjust(shift + 1, "0")
        return f"{sign}{digits[:-shift]}.{digits[-shift:]}"
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class PrecisionContext:
    """Requested output accuracy plus the internal working precision.

    ``working_digits`` defaults to ``target_digits + 20`` and is never allowed
    below that.  ``quad_rel_tol`` is the relative tolerance quadrature results
    must certify; the default is ``10**(-working_digits + 5)``.
    """

    target_digits: int
    working_digits: int = 0
    quad_rel_tol: Fraction = field(default=Fraction(0))

    def __post_init__(self):
        if self.target_digits < 1:
            raise ValueError("target_digits must be a positive integer")
        floor = self.target_digits + 20
        if self.working_digits == 0:
            object.__setattr__(self, "working_digits", floor)
        if self.working_digits < floor:
            raise ValueError(
                f"working_digits must be >= target_digits + 20 ({floor})"
            )
        if self.quad_rel_tol == 0:
            object.__setattr__(
                self, "quad_rel_tol", Fraction(1, 10 ** (self.working_digits - 5))
            )
        if self.quad_rel_tol <= 0:
            raise ValueError("quad_rel_tol must be positive")

    # -- derived tolerances -------------------------------------------------

    @property
    def target_tol(self) -> Fraction:
        """Relative tolerance implied by the requested digits."""
        return Fraction(1, 10**self.target_digits)

    def workdps(self):
        """mpmath context manager running at the working precision."""
        return mp.workdps(self.working_digits)

    # -- derived contexts ---------------------------------------------------

    def scaled_for(self, nmax: int) -> "PrecisionContext":
        """Context with the guard digits the recurrence build needs.

        Hankel/Stieltjes pipelines lose digits roughly linearly in the table
        size; the initial guess is ``target + 10 + 4*nmax`` and the escalation
        ladder corrects any underestimate.
        """
        working = max(self.working_digits, self.target_digits + 10 + 4 * nmax)
        return self.with_working(working)

    def with_working(self, working_digits: int) -> "PrecisionContext":
        working = max(working_digits, self.target_digits + 20)
        return replace(
            self,
            working_digits=working,
            quad_rel_tol=Fraction(1, 10 ** (working - 5)),
        )

    def ladder(self) -> Iterator["PrecisionContext"]:
        """Escalation ladder: contexts at 1x, 2x, ... 16x working digits."""
        factor = 1
        while factor <= MAX_ESCALATION_FACTOR:
            yield self.with_working(self.working_digits * factor)
            factor *= 2
