"""Figure rendering for the report commands.

Figures are written to files next to the delimited output; nothing here
opens a window.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .strata import ClusterPopulation, ProbabilityVector, StrataDecomposition
from .tables import DESIGNS, STUDY_VARIABLES, design_effect_cells


def decomposition_figure(
    pv: ProbabilityVector, dec: StrataDecomposition, cp: ClusterPopulation
):
    """Number-line view of the cumulative mass: one span per unit, integer
    boundaries dashed, cross-border units highlighted."""
    fig, ax = plt.subplots(figsize=(max(6.0, 1.2 * pv.n + 2), 2.8))
    cum = pv.cumulative()
    cross = set(dec.cross_border)
    for k in range(1, pv.N + 1):
        color = "#d62728" if k in cross else ("#1f77b4" if k % 2 else "#7fb3d5")
        ax.plot([cum[k - 1], cum[k]], [1, 1], lw=10, color=color, solid_capstyle="butt")
        ax.annotate(
            str(k),
            ((cum[k - 1] + cum[k]) / 2, 1),
            textcoords="offset points",
            xytext=(0, 12),
            ha="center",
            fontsize=8,
        )
    for i in range(0, pv.n + 1):
        ax.axvline(i, color="grey", ls="--", lw=0.8)
    for j, members in enumerate(cp.clusters, start=1):
        if not members:
            continue
        lo = cum[members[0] - 1]
        hi = cum[members[-1]]
        ax.plot([lo, hi], [0.8, 0.8], lw=3, color="#2ca02c" if j % 2 else "#ff7f0e")
        ax.annotate(
            f"u{j}",
            ((lo + hi) / 2, 0.8),
            textcoords="offset points",
            xytext=(0, -14),
            ha="center",
            fontsize=8,
        )
    ax.set_ylim(0.55, 1.3)
    ax.set_yticks([])
    ax.set_xlabel("cumulative inclusion probability")
    ax.set_title("units (top, cross-border in red) and clusters (bottom)")
    fig.tight_layout()
    return fig


def deff_figure(sample_sizes: tuple[int, ...] = (2, 4)):
    """Grouped bars of the design effects per design and study variable."""
    cells = design_effect_cells(sample_sizes)
    names = list(STUDY_VARIABLES)
    fig, axes = plt.subplots(1, len(sample_sizes), figsize=(5.2 * len(sample_sizes), 3.4))
    if len(sample_sizes) == 1:
        axes = [axes]
    width = 0.8 / len(DESIGNS)
    x = np.arange(len(names))
    for ax, n in zip(axes, sample_sizes):
        for d_idx, design in enumerate(DESIGNS):
            heights = [cells[(design, n, v)] for v in names]
            ax.bar(x + (d_idx - (len(DESIGNS) - 1) / 2) * width, heights, width, label=design)
        ax.axhline(1.0, color="grey", lw=0.8, ls="--")
        ax.set_xticks(x)
        ax.set_xticklabels(names)
        ax.set_title(f"sample size n={n}")
        ax.set_ylabel("design effect")
    axes[0].legend(fontsize=8)
    fig.tight_layout()
    return fig


def save_figure(fig, path):
    fig.savefig(path, dpi=150)
    plt.close(fig)
