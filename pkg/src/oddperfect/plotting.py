"""Figures written next to the CLI's delimited output.

All functions draw with the non-interactive Agg backend and save to the
given path (format from the extension); they return the path.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import ListedColormap  # noqa: E402

STYLE = {
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
}


def _save(fig, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
    return path


def plot_abundancy(report, path):
    """Histogram of sigma(n)/n over a scanned range, odd and even n separately."""
    if report.histogram is None:
        raise ValueError("scan report carries no histogram; rerun with histogram=True")
    h = report.histogram
    edges = np.asarray(h["edges"])
    centers = (edges[:-1] + edges[1:]) / 2
    width = edges[1] - edges[0]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 3.6))
        ax.bar(centers, h["odd"], width=width, alpha=0.7, label="odd n")
        if "even" in h:
            ax.bar(centers, h["even"], width=width, alpha=0.5, label="even n")
        ax.axvline(2.0, color="k", lw=0.8, ls="--", label="perfect: $\\sigma(n)/n = 2$")
        ax.set_yscale("log")
        used = np.flatnonzero(np.add(h["odd"], h.get("even", 0)))
        ax.set_xlim(1.0, max(3.0, edges[used[-1] + 1] if used.size else edges[-1]))
        ax.set_xlabel("abundancy $\\sigma(n)/n$")
        ax.set_ylabel("count")
        ax.set_title(f"abundancy over [{report.start}, {report.end}]")
        ax.legend(frameon=False)
        return _save(fig, path)


def plot_residue_matrix(matrix, path):
    """Heat map of the Legendre symbols (p_i / p_j); the diagonal is blank."""
    n = len(matrix.primes)
    data = np.array(matrix.entries, dtype=float)
    data[np.eye(n, dtype=bool)] = np.nan
    cmap = ListedColormap(["#c0392b", "#2e86c1"])
    cmap.set_bad("#dddddd")
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(0.6 * n + 1.6, 0.6 * n + 1.2))
        ax.imshow(data, cmap=cmap, vmin=-1, vmax=1)
        for i in range(n):
            for j in range(n):
                if i != j:
                    ax.text(j, i, f"{matrix.entries[i][j]:+d}", ha="center", va="center",
                            color="w", fontsize=9)
        labels = [str(p) for p in matrix.primes]
        ax.set_xticks(range(n), labels)
        ax.set_yticks(range(n), labels)
        ax.set_xlabel("modulus $p_j$")
        ax.set_ylabel("residue $p_i$")
        ax.set_title("$(p_i / p_j)$")
        for side in ("top", "right"):
            ax.spines[side].set_visible(True)
        return _save(fig, path)


def plot_pipeline(stats, path):
    labels = [*stats.criteria, "inconclusive", "survivors"]
    counts = [*(stats.rejected_by[c] for c in stats.criteria), stats.inconclusive,
              stats.survivor_count]
    colors = ["#7f8c8d"] * len(stats.criteria) + ["#f39c12", "#27ae60"]
    with plt.rc_context(STYLE):
        fig, ax = plt.subplots(figsize=(6.4, 3.2))
        bars = ax.barh(labels[::-1], counts[::-1], color=colors[::-1])
        ax.bar_label(bars, padding=2, fontsize=8)
        ax.set_xlabel("shapes")
        ax.set_title(f"pipeline over {stats.shapes_in} shapes (first rejection wins)")
        return _save(fig, path)
