"""Exception types shared across the package."""


class GenairyError(Exception):
    """Base class for all package-specific failures."""


class QuadratureError(GenairyError):
    """Quadrature did not converge to the requested tolerance.

    Carries the last two estimates so the caller can inspect how far apart
    the refinement levels ended up.
    """

    def __init__(self, message, estimates=None):
        super().__init__(message)
        self.estimates = tuple(estimates) if estimates else ()


class EscalationError(GenairyError):
    """Precision-escalation ladder exhausted without the cross-checks agreeing."""


class NotPositiveDefiniteError(EscalationError):
    """A Hankel pivot or norm came out nonpositive at the current precision."""


class ConvergenceError(GenairyError):
    """Iterative solver failed to converge; carries the last iterate."""

    def __init__(self, message, last_iterate=None):
        super().__init__(message)
        self.last_iterate = last_iterate
