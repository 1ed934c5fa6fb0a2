"""Batch command-line front-end.

Subcommands: moments, recurrence, verify, asymptotics, equilibrium, sweep.
All numeric output is written as decimal strings at the requested digits;
``verify`` exits nonzero iff any residual exceeds its tolerance.  The
GENAIRY_DIGITS environment variable sets the default precision.
"""

from __future__ import annotations

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional

import mpmath
from mpmath import mp, mpf

from . import report
from .asymptotics import (
    LARGE_N_QUANTITIES,
    compare_asymptotics,
    solve_endpoints,
)
from .errors import GenairyError
from .ladder import (
    COMPATIBILITY_NAMES,
    check_compatibility,
    check_discrete_system,
    check_ode,
    check_pn_and_H,
    ladder_coefficients,
)
from .moments import MomentTable, moment_table, weight_params
from .precision import PrecisionContext, as_fraction, fraction_str
from .recurrence import build_recurrence, hankel_determinants_direct, recurrence_pipeline
from .toda import TODA_RESIDUAL_NAMES, toda_residuals_range

DEFAULT_DIGITS_ENV = "GENAIRY_DIGITS"


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation of one subcommand."""

    command: str
    lam: Fraction
    t: Optional[Fraction]
    t_grid: Optional[List[Fraction]]
    n_grid: Optional[List[Fraction]]
    nmax: Optional[int]
    digits: int
    order: Optional[int]
    fmt: str
    output_path: Optional[str]
    options: dict

    def __post_init__(self):
        if self.lam <= -1:
            raise ValueError("--lambda must be > -1")
        if self.digits < 15:
            raise ValueError("--digits must be >= 15")
        if self.t_grid is not None and not self.t_grid:
            raise ValueError("t grid must be non-empty")
        if self.n_grid is not None and not self.n_grid:
            raise ValueError("n grid must be non-empty")


def _parse_grid(text: str) -> List[Fraction]:
    return [as_fraction(part.strip()) for part in text.split(",") if part.strip()]


def _emit(text: str, path: Optional[str]) -> None:
    if path in (None, "-"):
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _ctx(config: RunConfig) -> PrecisionContext:
    return PrecisionContext(target_digits=config.digits)


# ---------------------------------------------------------------------------
# subcommand bodies
# ---------------------------------------------------------------------------


def _run_moments(config: RunConfig) -> int:
    params = weight_params(config.lam, config.t)
    table = moment_table(params, config.options["jmax"], _ctx(config))
    if config.fmt == "json":
        _emit(table.to_json(), config.output_path)
    else:
        rows = [
            {"j": j, "mu": mpmath.nstr(m, config.digits)}
            for j, m in enumerate(table.mu)
        ]
        _emit(report.rows_to_csv(["j", "mu"], rows), config.output_path)
    return 0


def _run_recurrence(config: RunConfig) -> int:
    from_moments = config.options.get("from_moments")
    if from_moments:
        with open(from_moments) as fh:
            table = MomentTable.from_json(fh.read())
        if table.jmax < 2 * config.nmax + 2:
            raise ValueError(
                f"moment file holds jmax={table.jmax}; need >= {2 * config.nmax + 2}"
            )
        ctx = _ctx(config).with_working(table.working_digits)
        rec = build_recurrence(table, config.nmax, ctx)
        hankel_determinants_direct(table, config.nmax, ctx)  # positivity check
    else:
        params = weight_params(config.lam, config.t)
        rec = recurrence_pipeline(params, config.nmax, _ctx(config)).recurrence
    if config.fmt == "json":
        _emit(rec.to_json(config.digits), config.output_path)
    else:
        _emit(rec.to_csv(config.digits), config.output_path)
    return 0


def _ode_sample_points(table, n: int) -> list:
    scale = max(1.0, float(table.alpha[n]))
    return [scale * f for f in (0.5, 0.75, 1.0, 1.5, 2.0)]


def _run_verify(config: RunConfig) -> int:
    params = weight_params(config.lam, config.t)
    ctx = _ctx(config)
    pipe = recurrence_pipeline(params, config.nmax, ctx)
    rec = pipe.recurrence
    lam_s, t_s = fraction_str(config.lam), fraction_str(config.t)
    rows = []

    def add(name: str, n: int, value) -> None:
        rows.append(
            {
                "identity_name": name,
                "n": n,
                "lambda": lam_s,
                "t": t_s,
                "residual": mpmath.nstr(value, 8),
            }
        )

    with mp.workdps(rec.working_digits):
        override = config.options.get("tolerance")
        tol = mpf(override) if override else mpf(10) ** (-(config.digits - 10))
        tol_ode = mpf(override) if override else mpf(10) ** (-(config.digits - 20))
        worst = mpf(0)
        worst_ode = mpf(0)
        for n in range(1, config.nmax):
            for name, res in zip(COMPATIBILITY_NAMES, check_compatibility(rec, n)):
                add(name, n, res)
                worst = max(worst, abs(res))
            d1, d2 = check_discrete_system(rec, n)
            add("dieq1", n, d1)
            add("dieq2", n, d2)
            rp, rH = check_pn_and_H(rec, n)
            add("pn_repr", n, rp)
            add("Hn_repr", n, rH)
            worst = max(worst, abs(d1), abs(d2), abs(rp), abs(rH))
            if config.options.get("ode"):
                for x in _ode_sample_points(rec, n):
                    res = check_ode(rec, n, x, ctx)
                    add("ode", n, res)
                    worst_ode = max(worst_ode, abs(res))
        failed = worst > tol or worst_ode > tol_ode
    if config.options.get("toda"):
        ns = list(range(0, config.nmax))
        reports = toda_residuals_range(params, ns, ctx=ctx)
        # FD truncation scales like h^2; the gate only requires O(h^2) smallness
        h = reports[0].h_step
        tol_toda = mpf(100) * (mpf(h.numerator) / mpf(h.denominator)) ** 2
        for rep in reports:
            for name in TODA_RESIDUAL_NAMES:
                value = getattr(rep, name)
                add(name, rep.n, value)
                if abs(value) > tol_toda:
                    failed = True
    csv_text = report.rows_to_csv(
        ["identity_name", "n", "lambda", "t", "residual"], rows
    )
    _emit(csv_text, config.output_path)
    if config.options.get("plot"):
        report.render_residuals_figure(rows, config.options["plot"])
    return 1 if failed else 0


def _run_asymptotics(config: RunConfig) -> int:
    params = weight_params(config.lam, config.t if config.t is not None else 0)
    ctx = _ctx(config)
    quantity = config.options["quantity"]
    if config.t_grid is not None:
        comp = compare_asymptotics(
            quantity,
            params,
            ctx,
            t_values=config.t_grid,
            n_fixed=int(config.options["n_fixed"]),
            order=config.order,
        )
    else:
        comp = compare_asymptotics(
            quantity, params, ctx, n_values=config.n_grid, order=config.order
        )
    if config.fmt == "json":
        _emit(report.comparison_json(comp, config.digits), config.output_path)
    else:
        _emit(report.comparison_csv(comp, config.digits), config.output_path)
    if config.options.get("plot"):
        report.render_comparison_figure(comp, config.options["plot"])
    return 0


def _run_equilibrium(config: RunConfig) -> int:
    params = weight_params(config.lam, config.t)
    ctx = _ctx(config)
    rows = []
    for n in config.n_grid:
        sup = solve_endpoints(n, params, ctx)
        with mp.workdps(sup.working_digits):
            rows.append(
                {
                    "n": fraction_str(sup.n),
                    "X": mpmath.nstr(sup.X, config.digits),
                    "Y": mpmath.nstr(sup.Y, config.digits),
                    "a": mpmath.nstr(sup.a, config.digits),
                    "b": mpmath.nstr(sup.b, config.digits),
                    "A": mpmath.nstr(sup.A_mult, config.digits),
                    "res1": mpmath.nstr(sup.res1, 5),
                    "res2": mpmath.nstr(sup.res2, 5),
                    "_n": float(sup.n),
                    "_a": float(sup.a),
                    "_b": float(sup.b),
                    "_A": float(sup.A_mult),
                }
            )
    public = [{k: v for k, v in r.items() if not k.startswith("_")} for r in rows]
    fields = ["n", "X", "Y", "a", "b", "A", "res1", "res2"]
    if config.fmt == "json":
        _emit(
            report.rows_to_json(
                {
                    "lambda": fraction_str(config.lam),
                    "t": fraction_str(config.t),
                    "digits": config.digits,
                    "rows": public,
                }
            ),
            config.output_path,
        )
    else:
        _emit(report.rows_to_csv(fields, public), config.output_path)
    if config.options.get("plot"):
        report.render_endpoints_figure(rows, config.options["plot"])
    return 0


def _sweep_point(args) -> list:
    lam_s, t_s, nmax, digits = args
    params = weight_params(lam_s, t_s)
    pipe = recurrence_pipeline(params, nmax, PrecisionContext(target_digits=digits))
    rec = pipe.recurrence
    rows = []
    for n in range(nmax + 1):
        rows.append(
            {
                "lambda": lam_s,
                "t": t_s,
                "n": n,
                "alpha": mpmath.nstr(rec.alpha[n], digits),
                "beta": mpmath.nstr(rec.beta[n], digits),
                "h": mpmath.nstr(rec.h[n], digits),
                "p": mpmath.nstr(rec.p[n], digits),
                "_t": float(Fraction(t_s)),
                "_alpha": float(rec.alpha[n]),
                "_beta": float(rec.beta[n]),
            }
        )
    return rows


def _run_sweep(config: RunConfig) -> int:
    jobs = config.options.get("jobs") or os.cpu_count() or 1
    tasks = [
        (fraction_str(config.lam), fraction_str(t), config.nmax, config.digits)
        for t in config.t_grid
    ]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            chunks = list(pool.map(_sweep_point, tasks))
    else:
        chunks = [_sweep_point(task) for task in tasks]
    rows = [row for chunk in chunks for row in chunk]
    public = [{k: v for k, v in r.items() if not k.startswith("_")} for r in rows]
    fields = ["lambda", "t", "n", "alpha", "beta", "h", "p"]
    if config.fmt == "json":
        _emit(report.rows_to_json({"rows": public}), config.output_path)
    else:
        _emit(report.rows_to_csv(fields, public), config.output_path)
    if config.options.get("plot"):
        report.render_sweep_figure(rows, config.options["plot"])
    return 0


_RUNNERS = {
    "moments": _run_moments,
    "recurrence": _run_recurrence,
    "verify": _run_verify,
    "asymptotics": _run_asymptotics,
    "equilibrium": _run_equilibrium,
    "sweep": _run_sweep,
}


def run(config: RunConfig) -> int:
    """Execute a validated config; returns the process exit status."""
    return _RUNNERS[config.command](config)


# ---------------------------------------------------------------------------
# argument parsing
# ---------------------------------------------------------------------------


def _default_digits() -> int:
    return int(os.environ.get(DEFAULT_DIGITS_ENV, "40"))


def _add_common(sub, t_required=True):
    sub.add_argument("--lambda", dest="lam", required=True, help="exponent, > -1")
    if t_required:
        sub.add_argument("--t", required=True, help="linear-potential parameter")
    sub.add_argument(
        "--digits",
        type=int,
        default=_default_digits(),
        help=f"target decimal digits (default {_default_digits()}, "
        f"env {DEFAULT_DIGITS_ENV})",
    )
    sub.add_argument("--format", choices=["csv", "json"], default="csv")
    sub.add_argument("--output", default=None, help="output path (default stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="genairy",
        description="Moments, recurrence coefficients, Hankel determinants and "
        "asymptotics of the generalized Airy weight "
        "x^lambda exp(-x^3/3 + t x) on (0, inf).",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p = subs.add_parser("moments", help="moment table mu_0..mu_jmax (CSV columns j,mu "
                        "or the JSON interchange schema)")
    _add_common(p)
    p.add_argument("--jmax", type=int, required=True, help="highest moment index")

    p = subs.add_parser("recurrence", help="recurrence table (CSV columns n,alpha,beta,h,p)")
    _add_common(p)
    p.add_argument("--nmax", type=int, required=True, help="highest polynomial degree")
    p.add_argument(
        "--from-moments",
        default=None,
        help="JSON moment table to build from instead of running quadrature",
    )

    p = subs.add_parser(
        "verify",
        help="run the identity suite; CSV columns identity_name,n,lambda,t,residual; "
        "exit 1 iff any residual exceeds tolerance",
    )
    _add_common(p)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--no-ode", dest="ode", action="store_false",
                   help="skip the differential-equation residuals")
    p.add_argument("--toda", action="store_true", help="add Toda flow residuals")
    p.add_argument("--tolerance", default=None,
                   help="pass threshold as a decimal string "
                   "(default 10^-(digits-10); ODE rows use 10^-(digits-20))")
    p.add_argument("--plot", default=None, help="render residual figure to this file")

    p = subs.add_parser(
        "asymptotics",
        help="compare a truncated expansion with the exact pipeline over a grid; "
        "CSV columns grid,exact,series,abs_error plus a fitted-exponent footer",
    )
    _add_common(p, t_required=False)
    p.add_argument("--t", default="0", help="t (fixed for large-n mode)")
    p.add_argument(
        "--quantity", required=True, choices=sorted(set(LARGE_N_QUANTITIES)),
    )
    p.add_argument("--n", default=None, help="comma list of n (large-n mode), "
                   "or the fixed n when --t-grid is given")
    p.add_argument("--t-grid", default=None, help="comma list of t (long-time mode)")
    p.add_argument("--order", type=int, default=None, help="number of series terms")
    p.add_argument("--plot", default=None, help="render error-decay figure to this file")

    p = subs.add_parser("equilibrium", help="support endpoints and Lagrange multiplier")
    _add_common(p)
    p.add_argument("--n", required=True, help="comma list of n values (n >= 1)")
    p.add_argument("--plot", default=None, help="render endpoints figure to this file")

    p = subs.add_parser("sweep", help="recurrence tables over a t grid")
    _add_common(p, t_required=False)
    p.add_argument("--t-grid", required=True, help="comma list of t values")
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--jobs", type=int, default=None,
                   help="parallel workers (default: all cores)")
    p.add_argument("--plot", default=None, help="render coefficient-flow figure")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = args.command
    t = as_fraction(args.t) if getattr(args, "t", None) is not None else None
    t_grid = _parse_grid(args.t_grid) if getattr(args, "t_grid", None) else None
    n_grid = None
    nmax = getattr(args, "nmax", None)
    options = {}
    if command == "moments":
        if args.jmax < 2:
            raise ValueError("--jmax must be >= 2")
        options["jmax"] = args.jmax
    elif command == "recurrence":
        options["from_moments"] = args.from_moments
    elif command == "verify":
        options["ode"] = args.ode
        options["toda"] = args.toda
        options["tolerance"] = args.tolerance
        options["plot"] = args.plot
    elif command == "asymptotics":
        options["quantity"] = args.quantity
        options["plot"] = args.plot
        if t_grid is not None:
            if args.n is None:
                raise ValueError("--t-grid mode needs --n (the fixed degree)")
            options["n_fixed"] = int(args.n)
            if args.quantity not in ("alpha", "beta", "p", "lnD", "lnh"):
                raise ValueError(
                    "long-time expansions exist for alpha, beta, p, lnD, lnh only"
                )
        else:
            if args.n is None:
                raise ValueError("give --n (comma list) or --t-grid with --n")
            n_grid = _parse_grid(args.n)
    elif command == "equilibrium":
        n_grid = _parse_grid(args.n)
        options["plot"] = args.plot
    elif command == "sweep":
        options["jobs"] = args.jobs
        options["plot"] = args.plot
    if command == "verify" and nmax is not None and nmax < 2:
        raise ValueError("--nmax must be >= 2 for verify")
    return RunConfig(
        command=command,
        lam=as_fraction(args.lam),
        t=t,
        t_grid=t_grid,
        n_grid=n_grid,
        nmax=nmax,
        digits=args.digits,
        order=getattr(args, "order", None),
        fmt=args.format,
        output_path=args.output,
        options=options,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
    except (ValueError, TypeError) as exc:
        parser.error(str(exc))  # exits 2
    try:
        return run(config)
    except GenairyError as exc:
        print(f"genairy {config.command}: numerical failure: {exc}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as exc:
        print(f"genairy {config.command}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
