"""Figure rendering for curve, histogram, and gap CSVs.

Data files are never smoothed; these plots are presentation only.
"""

from __future__ import annotations

from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from entropyrate.curves import PositionCurve


def plot_curves(
    curves: Sequence[tuple[str, PositionCurve]],
    out_path,
    title: str = "Mean surprisal by word position",
    ylabel: str = "mean surprisal (bits)",
    stderr_band: bool = True,
) -> None:
    fig, ax = plt.subplots(figsize=(8, 5))
    for label, curve in curves:
        pos = curve.defined_positions()
        means = curve.means[pos]
        ax.plot(pos, means, label=label, linewidth=1.0)
        if stderr_band:
            se = np.sqrt(curve.variances[pos] / np.maximum(curve.counts[pos], 1))
            ax.fill_between(pos, means - 2 * se, means + 2 * se, alpha=0.2)
    ax.set_xlabel("word position in document")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    if len(curves) > 1 or curves[0][0]:
        ax.legend()
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)


def plot_histogram(
    histogram: Sequence[tuple[int, int, int]], out_path, title: str = "Document lengths"
) -> None:
    fig, ax = plt.subplots(figsize=(8, 4))
    starts = [row[0] for row in histogram]
    widths = [row[1] - row[0] for row in histogram]
    counts = [row[2] for row in histogram]
    ax.bar(starts, counts, width=widths, align="edge", edgecolor="black", linewidth=0.3)
    ax.set_xlabel("document length (words)")
    ax.set_ylabel("number of documents")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(out_path, dpi=150)
    plt.close(fig)
