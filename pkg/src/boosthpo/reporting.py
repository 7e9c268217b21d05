"""Best-score-so-far curves derived from trial logs, written as CSV and
rendered to PNG."""

from __future__ import annotations

import csv
import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .errors import NoRecords
from .trials import TrialRecord

__all__ = ["compute_curve", "write_curve_csv", "render_curve_png"]


def compute_curve(records: list[TrialRecord]) -> list[tuple[float, float]]:
    """One point per trial: (cumulative seconds, best score so far).

    The running maximum covers scored trials only; rows before the first
    scored trial carry NaN.
    """
    if not records:
        raise NoRecords("empty trial log")
    rows: list[tuple[float, float]] = []
    elapsed = 0.0
    best = math.nan
    for rec in records:
        elapsed += rec.train_seconds
        if rec.ok and (math.isnan(best) or rec.validation_score > best):
            best = rec.validation_score
        rows.append((elapsed, best))
    return rows


def write_curve_csv(rows: list[tuple[float, float]], path) -> None:
    with open(str(path), "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cumulative_seconds", "best_score_so_far"])
        for seconds, best in rows:
            writer.writerow([repr(seconds), "" if math.isnan(best) else repr(best)])


def render_curve_png(rows: list[tuple[float, float]], path, title: str = "") -> None:
    """Step plot of the running best validation score against total runtime."""
    seconds = [r[0] for r in rows]
    best = [r[1] for r in rows]
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.step(seconds, best, where="post")
    ax.plot(seconds, best, ".", markersize=4)
    ax.set_xlabel("total runtime (s)")
    ax.set_ylabel("max validation score")
    if title:
        ax.set_title(title)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(str(path), dpi=150)
    plt.close(fig)
