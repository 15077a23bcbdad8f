"""Figures for colourings and reduced-graph densities, written straight to files."""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from .graphcore import COLOURS, MultiColouredGraph  # noqa: E402

EDGE_COLOURS = {1: "#d62728", 2: "#1f77b4", 3: "#2ca02c"}


def _circle(n: int) -> list:
    return [(math.cos(2 * math.pi * i / max(n, 1)), math.sin(2 * math.pi * i / max(n, 1))) for i in range(n)]


def draw_colouring(g: MultiColouredGraph, path, *, highlight=None, groups=None, title=None) -> None:
    """Vertices on a circle, one line per colour carried by each edge.

    ``highlight`` is an optional vertex sequence (cycle or path) drawn thick;
    ``groups`` optionally maps vertex -> group index for node shading.
    """
    pos = _circle(g.n_vertices)
    fig, ax = plt.subplots(figsize=(5, 5))
    for (u, v), cols in g.edges.items():
        for k, c in enumerate(sorted(cols)):
            off = 0.012 * (k - (len(cols) - 1) / 2)
            ax.plot([pos[u][0] + off, pos[v][0] + off], [pos[u][1] + off, pos[v][1] + off],
                    color=EDGE_COLOURS[int(c)], lw=0.8, alpha=0.6, zorder=1)
    if highlight:
        seq = list(highlight) + [highlight[0]] if len(highlight) > 2 else list(highlight)
        ax.plot([pos[v][0] for v in seq], [pos[v][1] for v in seq], color="black", lw=2.2, zorder=2)
    shade = [groups.get(v, 0) if groups else 0 for v in range(g.n_vertices)]
    ax.scatter([p[0] for p in pos], [p[1] for p in pos], c=shade, cmap="Greys", vmin=-1,
               edgecolors="black", s=60, zorder=3)
    if g.n_vertices <= 40:
        for v, (x, y) in enumerate(pos):
            ax.annotate(str(v), (1.12 * x, 1.12 * y), ha="center", va="center", fontsize=7)
    ax.set_xlim(-1.25, 1.25)
    ax.set_ylim(-1.25, 1.25)
    ax.set_aspect("equal")
    ax.axis("off")
    if title:
        ax.set_title(title)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)


def draw_densities(reduced, path, *, title=None) -> None:
    """One heatmap per colour of the cluster-pair densities; irregular pairs hatched."""
    K = reduced.partition.k
    fig, axes = plt.subplots(1, 3, figsize=(11, 3.6))
    for ax, c in zip(axes, COLOURS):
        grid = [[float(reduced.densities[c][i][j]) for j in range(K)] for i in range(K)]
        im = ax.imshow(grid, vmin=0, vmax=1, cmap="viridis")
        for i in range(K):
            for j in range(K):
                if i != j and not reduced.regular_pairs[i][j]:
                    ax.add_patch(plt.Rectangle((j - 0.5, i - 0.5), 1, 1, fill=False, hatch="//", lw=0))
        ax.set_title(c.name.lower())
        ax.set_xticks(range(K))
        ax.set_yticks(range(K))
    fig.colorbar(im, ax=list(axes), shrink=0.8, label="density")
    if title:
        fig.suptitle(title)
    fig.savefig(path, bbox_inches="tight")
    plt.close(fig)
