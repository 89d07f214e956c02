"""Matplotlib rendering of report data to figure files.

Every CSV the CLI writes can get a sibling PNG; rendering is file-only
(Agg backend), no interactive windows. Figures are a convenience view of
the delimited output, which remains the canonical artifact.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

_STYLE = {
    "figure.figsize": (5.2, 3.4),
    "figure.dpi": 110,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "font.size": 9,
}


def _new_axes(title, xlabel, ylabel):
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots()
    ax.set_title(title)
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    return fig, ax


def _save(fig, path):
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


def render_distance_histogram(counts, path, title="distance distribution"):
    """Bar chart of pair fractions per distance (the x=distance,
    y=fraction layout the CSV uses)."""
    total = sum(counts.values())
    xs = sorted(counts)
    ys = [counts[d] / total for d in xs]
    fig, ax = _new_axes(title, "distance", "fraction of pairs")
    ax.bar(xs, ys, width=0.8, color="#4878a8")
    ax.set_xticks(xs)
    _save(fig, path)


def render_scan_trend(sizes, window_masses, path, title="window mass by size"):
    """Per-width window mass as a function of network size (log x)."""
    fig, ax = _new_axes(title, "n", "window mass")
    for b, masses in sorted(window_masses.items()):
        ax.plot(sizes, masses, marker="o", label=f"b={b}")
    ax.set_xscale("log", base=2)
    ax.set_ylim(0, 1.05)
    ax.legend()
    _save(fig, path)


def render_degree_laws(laws, sizes, path, analytic=None,
                       title="degree distribution by size"):
    """Empirical degree laws, optionally against the analytic limit."""
    fig, ax = _new_axes(title, "degree", "fraction of nodes")
    for n, law in zip(sizes, laws):
        xs = [d for d, x in enumerate(law) if x > 0]
        ax.plot(xs, [law[d] for d in xs], marker=".", linestyle="-",
                alpha=0.7, label=f"n={n}")
    if analytic is not None:
        xs = [d for d, x in enumerate(analytic) if x > 1e-12]
        ax.plot(xs, [analytic[d] for d in xs], color="black",
                linestyle="--", label="limit law")
    ax.legend()
    _save(fig, path)


def render_stretch_cdf(stretches, path, title="routing stretch"):
    """Empirical CDF of beacon-routing stretch."""
    xs = np.sort(stretches)
    ys = np.arange(1, xs.size + 1) / xs.size
    fig, ax = _new_axes(title, "stretch", "fraction of pairs <= x")
    ax.step(xs, ys, where="post", color="#4878a8")
    ax.axvline(2.0, color="gray", linestyle=":", linewidth=1)
    ax.set_ylim(0, 1.02)
    _save(fig, path)
