"""Report serialization: JSON documents (exact rationals as num/den
pairs), CSV layouts, and the figures rendered alongside file output.

Schemas for the four report kinds are published in docs/schemas; every
document carries schema_version and can be re-parsed against them.
"""

from __future__ import annotations

import csv
import io
import json
import time
from fractions import Fraction
from typing import Optional

SCHEMA_VERSION = 1


def rational(x) -> dict:
    f = Fraction(x)
    return {"num": f.numerator, "den": f.denominator}


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return rational(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, float):
        return obj
    if hasattr(obj, "__dict__") and not isinstance(obj, type):
        return _jsonable(vars(obj))
    return obj


def document(kind: str, payload: dict, timestamp: bool = True) -> dict:
    doc = {"schema_version": SCHEMA_VERSION, "kind": kind}
    doc.update(_jsonable(payload))
    if timestamp:
        doc["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return doc


def dump_json(doc: dict, path: Optional[str]) -> str:
    text = json.dumps(doc, indent=2, default=str)
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    return text


def equidist_counts_csv(report, path: Optional[str] = None) -> str:
    """Tuple columns + count, one row per residue class."""
    buf = io.StringIO()
    w = csv.writer(buf)
    K = len(next(iter(report.counts)))
    w.writerow([f"a{i+1}" for i in range(K)] + ["count"])
    for tup in sorted(report.counts):
        w.writerow(list(tup) + [report.counts[tup]])
    text = buf.getvalue()
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def bounds_csv(rows: list[dict], path: Optional[str] = None) -> str:
    """ell, e, char_id, poly_id, sum_abs, bound, margin, status."""
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["ell", "e", "char_id", "poly_id", "sum_abs", "bound", "margin", "status"])
    for r in rows:
        w.writerow(
            [
                r["ell"],
                r["e"],
                r["char_id"],
                r["poly_id"],
                f"{r['sum_abs']:.12g}",
                f"{r['bound']:.12g}",
                f"{r['bound'] - r['sum_abs']:.12g}",
                r["status"],
            ]
        )
    text = buf.getvalue()
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


def sweep_csv(rows: list[dict], path: Optional[str] = None) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    cols = ["q", "status", "k", "certificate_kind", "expected_wud", "agrees"]
    w.writerow(cols)
    for r in rows:
        w.writerow([r.get(c, "") for c in cols])
    text = buf.getvalue()
    if path:
        with open(path, "w") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# figures
# ---------------------------------------------------------------------------


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    return plt


def figure_path(out_path: str) -> str:
    stem = out_path.rsplit(".", 1)[0] if "." in out_path else out_path
    return stem + ".png"


def render_equidist_figure(report, path: str):
    plt = _pyplot()
    keys = sorted(report.counts)
    vals = [report.counts[k] for k in keys]
    phi_k = max(len(vals), 1)
    expected = report.coprime_total / phi_k if phi_k else 0
    fig, ax = plt.subplots(figsize=(max(6, min(16, len(vals) * 0.25)), 4))
    ax.bar(range(len(vals)), vals, color="#4878b0")
    if expected:
        ax.axhline(expected, color="#d1584e", linestyle="--", label="uniform share")
        ax.legend()
    ax.set_xlabel("residue class (lexicographic)")
    ax.set_ylabel("count")
    ax.set_title(
        f"{'x'.join(report.spec_names)} mod {report.q}, x={report.x}, "
        f"filter={report.filter}, disc={report.discrepancy:.4f}"
    )
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_sweep_figure(rows: list[dict], preset_name: str, path: str):
    plt = _pyplot()
    status_y = {"IN": 2, "OUT": 1, "NOT_ADMISSIBLE": 0, "UNKNOWN": 3}
    xs = [r["q"] for r in rows]
    ys = [status_y.get(r["status"], 3) for r in rows]
    colors = []
    for r in rows:
        if r.get("agrees") is False:
            colors.append("#d1584e")
        elif r.get("agrees") is True:
            colors.append("#55a868")
        else:
            colors.append("#8172b2")
    fig, ax = plt.subplots(figsize=(10, 3))
    ax.scatter(xs, ys, c=colors, s=12)
    ax.set_yticks(list(status_y.values()))
    ax.set_yticklabels(list(status_y.keys()))
    ax.set_xlabel("q")
    ax.set_title(f"classification sweep: {preset_name}")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_bounds_figure(rows: list[dict], path: str):
    plt = _pyplot()
    checked = [r for r in rows if r["status"] != "EXCLUDED_FORM"]
    fig, ax = plt.subplots(figsize=(6, 6))
    ax.scatter(
        [r["bound"] for r in checked],
        [r["sum_abs"] for r in checked],
        s=8,
        alpha=0.5,
    )
    lim = max((r["bound"] for r in checked), default=1.0)
    ax.plot([0, lim], [0, lim], "r--", label="|sum| = bound")
    ax.set_xlabel("bound")
    ax.set_ylabel("|sum|")
    ax.set_title("character sums vs bounds")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_growth_figure(result: dict, path: str):
    plt = _pyplot()
    import math

    xs = [x for x, _ in result["points"]]
    ts = [t for _, t in result["points"]]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.loglog(xs, ts, "o-", label="coprime_total")
    fitted = [
        math.exp(
            result["logx_coeff"] * math.log(x)
            + result["loglogx_coeff"] * math.log(math.log(x))
            + result["intercept"]
        )
        for x in xs
    ]
    ax.loglog(xs, fitted, "--", label="fit")
    ax.set_xlabel("x")
    ax.set_ylabel("count")
    ax.set_title(
        f"q={result['q']}: log x coeff {result['logx_coeff']:.3f}, "
        f"log log x coeff {result['loglogx_coeff']:.3f}"
    )
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
