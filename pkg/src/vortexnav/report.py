"""Benchmark report: aligned text, CSV rows and a matplotlib comparison figure."""
from __future__ import annotations

import csv
import io
import os
from typing import Optional

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .metrics import REFERENCE, ComparisonTable  # noqa: E402

SUMMARY_FIELDS = (
    "method", "kind", "trials", "success_rate", "mean_percent_increase", "mean_min_distance",
    "min_distance_above_0.3", "ref_percent_increase", "ref_min_distance",
)
TRIAL_FIELDS = ("kind", "seed", "reached", "collided", "percent_increase", "min_distance", "time_to_goal", "error")


def _num(v: Optional[float], digits: int = 4) -> str:
    return "" if v is None else f"{v:.{digits}f}"


def summary_rows(table: ComparisonTable) -> list[dict[str, str]]:
    rows = []
    for r in table.rows:
        ref_pi, ref_md = REFERENCE[r.kind]
        rows.append({
            "method": r.label,
            "kind": r.kind,
            "trials": str(len(r.trials)),
            "success_rate": f"{r.success_rate:.4f}",
            "mean_percent_increase": _num(r.mean_percent_increase),
            "mean_min_distance": _num(r.mean_min_distance),
            "min_distance_above_0.3": f"{r.fraction_min_distance_above(0.3):.4f}",
            "ref_percent_increase": f"{ref_pi:.4f}",
            "ref_min_distance": f"{ref_md:.4f}",
        })
    return rows


def trial_rows(table: ComparisonTable) -> list[dict[str, str]]:
    rows = []
    for r in table.rows:
        for seed, m, err in zip(table.seeds, r.trials, r.errors):
            rows.append({
                "kind": r.kind,
                "seed": str(seed),
                "reached": "" if m is None else str(int(m.reached)),
                "collided": "" if m is None else str(int(m.collided)),
                "percent_increase": _num(None if m is None else m.percent_increase, 6),
                "min_distance": _num(None if m is None else m.min_human_distance, 6),
                "time_to_goal": _num(None if m is None else m.time_to_goal, 2),
                "error": err or "",
            })
    return rows


def _csv(rows: list[dict[str, str]], fields: tuple[str, ...]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)
    return buf.getvalue()


def format_table(table: ComparisonTable) -> str:
    """Aligned table followed by the same numbers as CSV rows."""
    head = ("Method", "Success", "Path increase [%]", "Min distance [m]", "Ref. increase [%]", "Ref. distance [m]")
    body = []
    for s in summary_rows(table):
        body.append((
            s["method"],
            f"{100 * float(s['success_rate']):.0f}%",
            s["mean_percent_increase"] or "n/a",
            s["mean_min_distance"] or "n/a",
            s["ref_percent_increase"],
            s["ref_min_distance"],
        ))
    widths = [max(len(str(row[i])) for row in (head, *body)) for i in range(len(head))]
    lines = [f"Scenarios: {len(table.seeds)} (seeds {table.seeds[0]}..{table.seeds[-1]})", ""]
    for row in (head, *body):
        cells = [str(row[0]).ljust(widths[0])] + [str(c).rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells))
    lines.insert(3, "  ".join("-" * w for w in widths))
    failures = [(r.kind, seed, e) for r in table.rows for seed, e in zip(table.seeds, r.errors) if e]
    for kind, seed, err in failures:
        lines.append(f"failed cell: {kind} seed {seed}: {err}")
    lines.append("")
    return "\n".join(lines) + "\n" + _csv(summary_rows(table), SUMMARY_FIELDS)


def plot_comparison(table: ComparisonTable, path: str) -> None:
    """Two panels (path increase, minimum distance): per-trial points, means and reference values."""
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.8))
    labels = [r.label for r in table.rows]
    for ax, attr, ref_idx, ylabel in (
        (axes[0], "percent_increase", 0, "path increase [%]"),
        (axes[1], "min_human_distance", 1, "minimum distance [m]"),
    ):
        for i, r in enumerate(table.rows):
            vals = [getattr(m, attr) for m in r.trials if m is not None and m.reached]
            vals = [v for v in vals if v is not None]
            if vals:
                ax.bar(i, sum(vals) / len(vals), color="#bbbbbb", width=0.6)
                ax.scatter([i] * len(vals), vals, s=12, color="#d62728", zorder=3)
            ax.scatter([i], [REFERENCE[r.kind][ref_idx]], marker="*", s=120, color="black", zorder=4,
                       label="reference" if i == 0 else None)
        ax.set_xticks(range(len(labels)))
        ax.set_xticklabels(labels, fontsize=8)
        ax.set_ylabel(ylabel)
    axes[0].legend(loc="upper left", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=100, metadata={"Software": None})
    plt.close(fig)


def write_report(table: ComparisonTable, out_dir: str) -> list[str]:
    """Write summary text/CSV, per-trial CSV and the figure into ``out_dir``; return the paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "summary.txt": format_table(table),
        "summary.csv": _csv(summary_rows(table), SUMMARY_FIELDS),
        "trials.csv": _csv(trial_rows(table), TRIAL_FIELDS),
    }
    written = []
    for name, text in paths.items():
        p = os.path.join(out_dir, name)
        with open(p, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        written.append(p)
    fig_path = os.path.join(out_dir, "comparison.png")
    plot_comparison(table, fig_path)
    written.append(fig_path)
    return written
