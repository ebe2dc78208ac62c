"""Figure rendering for the report path: heat maps of sweep results,
phase histograms and depth-versus-model charts, written as PNG files
next to the delimited output.

Uses the Agg backend only; nothing here opens a window.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .experiments import PhaseHistogram, SweepCell
from .transpile import DepthReport


def render_sweep(cells: Sequence[SweepCell], path: Path) -> Path:
    """One heat-map panel per variant: rows N, columns a, cell color the
    per-(N, a) success probability."""
    variants = sorted({c.variant for c in cells})
    Ns = sorted({c.N for c in cells})
    a_values = sorted({c.a for c in cells})
    fig, axes = plt.subplots(1, len(variants), squeeze=False,
                             figsize=(1.2 + 0.28 * len(a_values) * len(variants),
                                      1.4 + 0.5 * len(Ns)))
    col = {a: j for j, a in enumerate(a_values)}
    row = {N: i for i, N in enumerate(Ns)}
    for ax, variant in zip(axes[0], variants):
        grid = np.full((len(Ns), len(a_values)), np.nan)
        for c in cells:
            if c.variant == variant:
                grid[row[c.N], col[c.a]] = c.success_probability
        im = ax.imshow(grid, vmin=0.0, vmax=1.0, cmap="viridis", aspect="auto")
        ax.set_xticks(range(len(a_values)), labels=[str(a) for a in a_values],
                      fontsize=7, rotation=90)
        ax.set_yticks(range(len(Ns)), labels=[str(N) for N in Ns], fontsize=8)
        ax.set_xlabel("a")
        ax.set_ylabel("N")
        ax.set_title(variant)
    fig.colorbar(im, ax=axes[0], label="success probability")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_phases(hist: PhaseHistogram, path: Path) -> Path:
    """Bar chart of y counts, most frequent first; bars that factored N
    are drawn darker."""
    rows = hist.sorted_rows()
    counts = [r[1] for r in rows]
    colors = ["#1f5fa8" if r[2] else "#b0b8c4" for r in rows]
    fig, ax = plt.subplots(figsize=(max(4.0, 0.18 * len(rows) + 1.5), 3.2))
    ax.bar(range(len(rows)), counts, color=colors)
    ax.set_xticks(range(len(rows)),
                  labels=[str(r[0]) for r in rows], fontsize=6, rotation=90)
    ax.set_xlabel("y (sorted by count)")
    ax.set_ylabel("count")
    ax.set_title(f"N={hist.N}, a={hist.a}, {hist.variant}, "
                 f"{hist.shots} shots (dark = factored)")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path


def render_depth(reports: Sequence[DepthReport], path: Path) -> Path:
    """Measured max per-circuit depth against the quadratic model."""
    reports = sorted(reports, key=lambda r: r.n)
    ns = [r.n for r in reports]
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    ax.plot(ns, [r.max_depth for r in reports], "o-", label="measured max")
    ax.plot(ns, [r.model_value for r in reports], "s--", label="model")
    ax.set_xlabel("n (bits)")
    ax.set_ylabel("depth")
    ax.set_xticks(ns)
    ax.legend()
    variants = ", ".join(sorted({r.variant for r in reports}))
    ax.set_title(f"transpiled depth ({variants})")
    fig.savefig(path, dpi=150, bbox_inches="tight")
    plt.close(fig)
    return path
