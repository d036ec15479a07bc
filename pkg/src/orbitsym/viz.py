"""Static figure rendering for CLI reports.

Everything here writes PNG files and returns the paths; nothing opens a
window.  Figures are a reporting convenience layered on top of the JSON
output, never an input to the pipeline.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .gramgraph import GramGraph
from .numerics import FieldTag
from .reptheory import ThresholdReport


def save_orbit_scatter(orbits, field: FieldTag, path) -> str:
    """Scatter plot of the orbits, one color per orbit.

    Real data plots the first two coordinates (a zero line for dimension
    one); complex data plots the first coordinate in the re/im plane.
    """
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 5))
    for idx, orbit in enumerate(orbits):
        pts = np.asarray(orbit)
        if field is FieldTag.COMPLEX:
            x, y = pts[:, 0].real, pts[:, 0].imag
            ax.set_xlabel("Re coord 0")
            ax.set_ylabel("Im coord 0")
        elif pts.shape[1] >= 2:
            x, y = pts[:, 0].real, pts[:, 1].real
            ax.set_xlabel("coord 0")
            ax.set_ylabel("coord 1")
        else:
            x, y = pts[:, 0].real, np.zeros(pts.shape[0])
            ax.set_xlabel("coord 0")
        ax.scatter(x, y, s=36, label=f"orbit {idx} ({pts.shape[0]} pts)")
    ax.axhline(0.0, color="0.85", lw=0.8, zorder=0)
    ax.axvline(0.0, color="0.85", lw=0.8, zorder=0)
    ax.set_aspect("equal", adjustable="datalim")
    ax.legend(loc="best", fontsize=8)
    ax.set_title("observed orbits")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_gram_heatmap(graph: GramGraph, path, title="Gram label classes") -> str:
    """Label-class matrix of a Gram graph as a categorical heatmap."""
    path = Path(path)
    fig, ax = plt.subplots(figsize=(5, 4.2))
    image = ax.imshow(graph.labels, cmap="tab20", interpolation="nearest")
    ax.set_title(f"{title} ({graph.label_count} classes)")
    ax.set_xlabel("target vertex")
    ax.set_ylabel("source vertex")
    fig.colorbar(image, ax=ax, label="class id", ticks=range(graph.label_count))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)


def save_threshold_chart(report: ThresholdReport, path) -> str:
    """Per-irreducible multiplicities with the resulting orbit counts."""
    path = Path(path)
    names = [entry.name for entry in report.entries]
    n_v = [entry.n_v for entry in report.entries]
    n_reg = [entry.n_reg for entry in report.entries]
    x = np.arange(len(names))
    fig, ax = plt.subplots(figsize=(max(4, 0.9 * len(names) + 2), 3.6))
    ax.bar(x - 0.18, n_v, width=0.36, label="multiplicity in V")
    ax.bar(x + 0.18, n_reg, width=0.36, label="multiplicity in regular rep")
    ax.set_xticks(x, names)
    ax.set_ylabel("multiplicity")
    ax.set_title(
        f"r = {report.r}, k_span = {report.k_span}, k_recover = {report.k_recover}"
    )
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
    return str(path)
