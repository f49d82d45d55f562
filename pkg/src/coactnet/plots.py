"""Report figures rendered alongside the delimited exports.

All figures are written as PNG with a fixed style so repeated runs on
identical inputs are byte-identical.
"""

from __future__ import annotations

import io
from typing import Dict, List, Mapping, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from coactnet.export import write_atomic_bytes
from coactnet.filtering import SweepReport
from coactnet.metrics import connected_components
from coactnet.model import Layer, LayerKind, LayerStats, OverlapMatrix

_PNG_META = {"Software": "coactnet"}


def _save(fig, path: str) -> None:
    buf = io.BytesIO()
    fig.savefig(buf, format="png", dpi=110, metadata=_PNG_META)
    plt.close(fig)
    write_atomic_bytes(path, buf.getvalue())


def plot_layer_overview(stats: Mapping[LayerKind, LayerStats], path: str) -> None:
    """Node/edge counts per layer on a log scale."""
    kinds = sorted(stats, key=lambda k: k.value)
    labels = [k.code for k in kinds]
    nodes = [stats[k].node_count for k in kinds]
    edges = [stats[k].edge_count for k in kinds]
    x = np.arange(len(kinds))
    fig, ax = plt.subplots(figsize=(7, 4))
    ax.bar(x - 0.2, nodes, width=0.4, label="nodes", color="#4878cf")
    ax.bar(x + 0.2, edges, width=0.4, label="edges", color="#d65f5f")
    ax.set_xticks(x)
    ax.set_xticklabels(labels)
    if any(nodes) or any(edges):
        ax.set_yscale("symlog")
    ax.set_ylabel("count")
    ax.set_title("Layer structure")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)


def plot_component_sizes(layer: Layer, path: str, max_components: int = 30) -> None:
    """Sizes of the largest components of one layer."""
    sizes = [len(c) for c in connected_components(layer)[:max_components]]
    fig, ax = plt.subplots(figsize=(7, 4))
    if sizes:
        ax.bar(np.arange(1, len(sizes) + 1), sizes, color="#6acc65")
    ax.set_xlabel("component rank")
    ax.set_ylabel("accounts")
    ax.set_title(f"Component sizes: {layer.kind.value}")
    fig.tight_layout()
    _save(fig, path)


def plot_overlap_heatmap(matrix: OverlapMatrix, path: str) -> None:
    """Shared node and edge counts across layers as two heatmaps."""
    kinds = list(matrix.kinds)
    n = len(kinds)
    node_grid = np.zeros((n, n))
    edge_grid = np.zeros((n, n))
    for i, a in enumerate(kinds):
        for j, b in enumerate(kinds):
            node_grid[i, j] = matrix.node_overlap(a, b)
            edge_grid[i, j] = matrix.edge_overlap(a, b)
    fig, axes = plt.subplots(1, 2, figsize=(11, 5))
    for ax, grid, title in ((axes[0], node_grid, "shared nodes"), (axes[1], edge_grid, "shared edges")):
        im = ax.imshow(grid, cmap="viridis")
        ax.set_xticks(range(n))
        ax.set_yticks(range(n))
        ax.set_xticklabels([k.code for k in kinds])
        ax.set_yticklabels([k.code for k in kinds])
        ax.set_title(title)
        fig.colorbar(im, ax=ax, shrink=0.8)
    fig.tight_layout()
    _save(fig, path)


def plot_sweep(report: SweepReport, path: str) -> None:
    """Edge counts and giant-component share across the filter candidates."""
    labels = [row.spec.label for row in report.rows]
    edge_counts = [row.stats.edge_count for row in report.rows]
    giant = [row.stats.giant_component_pct for row in report.rows]
    viable = [row.viable for row in report.rows]
    x = np.arange(len(labels))
    fig, ax1 = plt.subplots(figsize=(8, 4.5))
    colors = ["#6acc65" if v else "#bbbbbb" for v in viable]
    ax1.bar(x, edge_counts, color=colors)
    ax1.set_xticks(x)
    ax1.set_xticklabels(labels, rotation=30, ha="right")
    ax1.set_ylabel("edges kept (green = viable)")
    ax2 = ax1.twinx()
    ax2.plot(x, giant, "o-", color="#4878cf")
    ax2.set_ylabel("giant component %")
    ax1.set_title(f"Filter sweep: {report.kind.value}")
    fig.tight_layout()
    _save(fig, path)


def plot_pr_curves(curves: Dict[str, Sequence], path: str) -> None:
    """Precision-recall curves from the threshold tuning run."""
    fig, ax = plt.subplots(figsize=(6, 5))
    for name, curve in sorted(curves.items()):
        recalls = [p.recall for p in curve]
        precisions = [p.precision for p in curve]
        ax.plot(recalls, precisions, "o-", label=name)
    ax.set_xlabel("recall")
    ax.set_ylabel("precision")
    ax.set_xlim(-0.02, 1.02)
    ax.set_ylim(-0.02, 1.05)
    ax.set_title("Threshold calibration")
    ax.legend()
    fig.tight_layout()
    _save(fig, path)
