"""CSV/JSON emission and figure rendering for the CLI report paths.

All numeric output goes through decimal strings at the requested digits;
interchange files never contain binary floats.  Figures are optional
companions to the delimited output, rendered with the Agg backend.
"""

from __future__ import annotations

import csv
import io
import json
from typing import Iterable, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import mpmath

from .asymptotics import AsymptoticComparison
from .precision import fraction_str


def format_value(value, digits: int) -> str:
    return mpmath.nstr(value, digits)


def rows_to_csv(fieldnames: Sequence[str], rows: Iterable[dict]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fieldnames))
    writer.writeheader()
    for row in rows:
        writer.writerow(row)
    return buf.getvalue()


def rows_to_json(payload: dict) -> str:
    return json.dumps(payload, indent=1)


def comparison_rows(comp: AsymptoticComparison, digits: int):
    for row in comp.rows:
        yield {
            "grid": fraction_str(row.grid),
            "exact": format_value(row.exact, digits),
            "series": format_value(row.series, digits),
            "abs_error": format_value(row.abs_error, 8),
        }


def comparison_csv(comp: AsymptoticComparison, digits: int) -> str:
    rows = list(comparison_rows(comp, digits))
    rows.append(
        {
            "grid": "fitted_exponent",
            "exact": f"{comp.fitted_exponent:.4f}",
            "series": f"expected {comp.expected_exponent:.4f}",
            "abs_error": "outside_regime" if comp.outside_regime else "",
        }
    )
    return rows_to_csv(["grid", "exact", "series", "abs_error"], rows)


def comparison_json(comp: AsymptoticComparison, digits: int) -> str:
    return rows_to_json(
        {
            "quantity": comp.quantity,
            "lambda": fraction_str(comp.params.lam),
            "t": fraction_str(comp.params.t),
            "regime": comp.regime,
            "order": comp.order,
            "rows": list(comparison_rows(comp, digits)),
            "fitted_exponent": comp.fitted_exponent,
            "expected_exponent": comp.expected_exponent,
            "matches_expected": comp.matches_expected,
            "outside_regime": comp.outside_regime,
        }
    )


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------


def render_comparison_figure(comp: AsymptoticComparison, path: str) -> None:
    """Log-log error decay of the series against the exact pipeline."""
    xs = [abs(float(r.grid)) for r in comp.rows]
    ys = [max(float(r.abs_error), 1e-320) for r in comp.rows]
    fig, ax = plt.subplots(figsize=(6, 4.2))
    ax.loglog(xs, ys, "o-", label="|exact - series|")
    anchor = ys[0] * (xs[0] ** -comp.expected_exponent)
    ax.loglog(
        xs,
        [anchor * x**comp.expected_exponent for x in xs],
        "--",
        label=f"slope {comp.expected_exponent:.2f}",
    )
    xlabel = "n" if comp.regime == "large_n" else "|t|"
    ax.set_xlabel(xlabel)
    ax.set_ylabel("absolute error")
    ax.set_title(
        f"{comp.quantity}: fitted exponent {comp.fitted_exponent:.3f} "
        f"({comp.regime})"
    )
    ax.grid(True, which="both", alpha=0.3)
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_endpoints_figure(rows: Sequence[dict], path: str) -> None:
    """Support endpoints a, b and multiplier A against n."""
    ns = [float(r["_n"]) for r in rows]
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    ax1.plot(ns, [float(r["_a"]) for r in rows], "o-", label="a")
    ax1.plot(ns, [float(r["_b"]) for r in rows], "s-", label="b")
    ax1.set_xlabel("n")
    ax1.set_ylabel("support endpoints")
    ax1.legend()
    ax1.grid(alpha=0.3)
    ax2.plot(ns, [float(r["_A"]) for r in rows], "o-", color="tab:red")
    ax2.set_xlabel("n")
    ax2.set_ylabel("multiplier A")
    ax2.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_sweep_figure(rows: Sequence[dict], path: str) -> None:
    """Recurrence coefficient trajectories along the t grid."""
    by_n: dict = {}
    for r in rows:
        by_n.setdefault(int(r["n"]), []).append((float(r["_t"]), float(r["_alpha"]), float(r["_beta"])))
    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 4))
    for n, pts in sorted(by_n.items()):
        pts.sort()
        ax1.plot([p[0] for p in pts], [p[1] for p in pts], "-", label=f"n={n}")
        ax2.plot([p[0] for p in pts], [p[2] for p in pts], "-", label=f"n={n}")
    ax1.set_xlabel("t")
    ax1.set_ylabel("alpha_n(t)")
    ax2.set_xlabel("t")
    ax2.set_ylabel("beta_n(t)")
    ax1.grid(alpha=0.3)
    ax2.grid(alpha=0.3)
    if len(by_n) <= 8:
        ax1.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def render_residuals_figure(rows: Sequence[dict], path: str) -> None:
    """Residual magnitudes of the verification suite, by identity."""
    fig, ax = plt.subplots(figsize=(7, 4.2))
    by_name: dict = {}
    for r in rows:
        by_name.setdefault(r["identity_name"], []).append(
            (int(r["n"]), abs(float(mpmath.mpf(r["residual"]))))
        )
    for name, pts in sorted(by_name.items()):
        pts.sort()
        ax.semilogy(
            [p[0] for p in pts], [max(p[1], 1e-320) for p in pts], "o-", label=name, ms=3
        )
    ax.set_xlabel("n")
    ax.set_ylabel("|residual|")
    ax.grid(True, which="both", alpha=0.3)
    ax.legend(fontsize=7, ncol=2)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
