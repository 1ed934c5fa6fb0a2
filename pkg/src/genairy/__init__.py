"""High-precision orthogonal-polynomial toolkit for the generalized Airy weight.

w(x) = x**lam * exp(-x**3/3 + t*x) on (0, inf), lam > -1, t real.

The package computes moments, recurrence coefficients, Hankel determinants
and ladder-operator auxiliaries at arbitrary precision with independent
cross-checking routes, verifies the algebraic identities they satisfy, and
evaluates the large-n and long-time asymptotic expansions against the exact
pipeline.
"""

from .asymptotics import (
    AsymptoticComparison,
    EquilibriumSupport,
    SeriesValue,
    compare_asymptotics,
    lagrange_multiplier,
    series_largeN,
    series_longtime,
    solve_endpoints,
)
from .errors import (
    ConvergenceError,
    EscalationError,
    GenairyError,
    NotPositiveDefiniteError,
    QuadratureError,
)
from .ladder import (
    LadderAux,
    LadderCoefficients,
    aux_closed,
    aux_integral,
    check_compatibility,
    check_discrete_system,
    check_ode,
    check_pn_and_H,
    ladder_coefficients,
)
from .moments import (
    MomentTable,
    WeightParams,
    moment_table,
    potential_eval,
    seed_moments,
    weight_eval,
    weight_params,
)
from .precision import PrecisionContext
from .quadrature import integrate_halfline
from .recurrence import (
    HankelSequence,
    Pipeline,
    RecurrenceTable,
    build_recurrence,
    hankel_determinants_direct,
    pipeline,
    polynomial_eval,
    recurrence_pipeline,
)
from .special import kappa, log_barnes_g, log_gamma, zeta_prime_minus_one
from .toda import (
    TodaCheckReport,
    hankel_logderiv,
    hankel_logderiv_representations,
    toda_residuals,
    toda_residuals_range,
    toda_richardson,
)

__version__ = "0.1.0"

__all__ = [
    "AsymptoticComparison",
    "ConvergenceError",
    "EquilibriumSupport",
    "EscalationError",
    "GenairyError",
    "HankelSequence",
    "LadderAux",
    "LadderCoefficients",
    "MomentTable",
    "NotPositiveDefiniteError",
    "Pipeline",
    "PrecisionContext",
    "QuadratureError",
    "RecurrenceTable",
    "SeriesValue",
    "TodaCheckReport",
    "WeightParams",
    "aux_closed",
    "aux_integral",
    "build_recurrence",
    "check_compatibility",
    "check_discrete_system",
    "check_ode",
    "check_pn_and_H",
    "compare_asymptotics",
    "hankel_determinants_direct",
    "hankel_logderiv",
    "hankel_logderiv_representations",
    "integrate_halfline",
    "kappa",
    "ladder_coefficients",
    "lagrange_multiplier",
    "log_barnes_g",
    "log_gamma",
    "moment_table",
    "pipeline",
    "polynomial_eval",
    "potential_eval",
    "recurrence_pipeline",
    "seed_moments",
    "series_largeN",
    "series_longtime",
    "solve_endpoints",
    "toda_residuals",
    "toda_residuals_range",
    "toda_richardson",
    "weight_eval",
    "weight_params",
    "zeta_prime_minus_one",
]
