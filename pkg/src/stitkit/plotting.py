"""Figure rendering for the command-line reports.

Each report command writes PNG figures next to its CSV/JSON artifacts.
Rendering is deterministic: the Agg backend, fixed dpi, and stripped
metadata keep the bytes a function of the data alone.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.collections import PolyCollection

_DPI = 150


def _save(fig, path) -> Path:
    path = Path(path)
    fig.savefig(path, dpi=_DPI, metadata={"Software": None})
    plt.close(fig)
    return path


def tessellation_figure(tree, path) -> Path:
    """Cells of a planar tessellation shaded by birth time."""
    fig, ax = plt.subplots(figsize=(5.5, 5.5))
    if tree.window.dim == 2:
        polys = [leaf.body.vertices for leaf in tree.leaves]
        births = np.array([leaf.birth for leaf in tree.leaves])
        vmax = max(births.max(), 1e-12)
        coll = PolyCollection(
            polys,
            array=births / vmax,
            cmap="viridis",
            edgecolors="black",
            linewidths=0.8,
        )
        ax.add_collection(coll)
        v = tree.window.vertices
        ax.set_xlim(v[:, 0].min(), v[:, 0].max())
        ax.set_ylim(v[:, 1].min(), v[:, 1].max())
        ax.set_aspect("equal")
        fig.colorbar(coll, ax=ax, label="cell birth time", shrink=0.85)
    else:
        for leaf in tree.leaves:
            v = leaf.body.vertices[:, 0]
            ax.plot([v.min(), v.max()], [0, 0], marker="|", markersize=14)
        ax.set_yticks([])
    ax.set_title(f"tessellation, lifetime {tree.lifetime:g}, {tree.leaf_count} cells")
    return _save(fig, path)


def kernel_grid_figure(panels, path) -> Path:
    """Contour panels of the limit kernel against the origin.

    ``panels`` is a list of (title, x-axis values, y-axis values, matrix).
    """
    n = len(panels)
    fig, axes = plt.subplots(1, n, figsize=(3.2 * n, 3.4), squeeze=False)
    for ax, (title, xs, ys, values) in zip(axes[0], panels):
        cs = ax.contourf(xs, ys, values, levels=12, cmap="viridis")
        ax.contour(xs, ys, values, levels=12, colors="white", linewidths=0.4)
        ax.set_aspect("equal")
        ax.set_title(title, fontsize=9)
        fig.colorbar(cs, ax=ax, shrink=0.8)
    fig.suptitle("limit kernel against the origin")
    fig.tight_layout()
    return _save(fig, path)


def convergence_figure(m_values, median_errors, path) -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 3.4))
    ax.loglog(m_values, median_errors, marker="o")
    ax.set_xlabel("trees per feature set")
    ax.set_ylabel("median sup |empirical - limit|")
    ax.set_title("kernel approximation error")
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)


def density_overlay_figure(grid, columns, data, path, title="density estimates") -> Path:
    """Overlay of the estimator columns on a 1-d grid, with a data rug."""
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    styles = {
        "truth": dict(color="0.5", lw=2.5, alpha=0.8),
        "forest": dict(color="tab:blue", lw=1.6),
        "ideal": dict(color="tab:cyan", lw=1.2, ls="--"),
        "laplace": dict(color="tab:purple", lw=1.6),
        "ratio": dict(color="tab:orange", lw=1.2, ls=":"),
    }
    for name, values in columns.items():
        if values is None or np.all(np.isnan(values)):
            continue
        ax.plot(grid, values, label=name, **styles.get(name, {}))
    if data is not None:
        ax.plot(data, np.zeros_like(data), "|", color="tab:red", markersize=8, alpha=0.6)
    ax.legend(fontsize=8)
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def regression_overlay_figure(grid, truth, prediction, data_x, data_y, path,
                              title="forest regression") -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.scatter(data_x, data_y, s=6, color="0.7", label="data")
    ax.plot(grid, truth, color="0.3", lw=2.0, label="truth")
    ax.plot(grid, prediction, color="tab:blue", lw=1.6, label="forest")
    ax.legend(fontsize=8)
    ax.set_title(title)
    fig.tight_layout()
    return _save(fig, path)


def projection_figure(pair_ids, direct, lifted, exact, path) -> Path:
    fig, ax = plt.subplots(figsize=(5.5, 3.6))
    ax.plot(pair_ids, exact, color="0.3", lw=1.8, label="closed form")
    ax.plot(pair_ids, direct, "o", ms=4, color="tab:blue", label="direct")
    ax.plot(pair_ids, lifted, "s", ms=4, color="tab:orange", label="lifted", alpha=0.8)
    ax.set_xlabel("pair id")
    ax.set_ylabel("same-cell probability")
    ax.legend(fontsize=8)
    ax.set_title("direct vs lifted simulator")
    fig.tight_layout()
    return _save(fig, path)


def trend_figure(ns, errors, ylabel, path, title="consistency trend") -> Path:
    fig, ax = plt.subplots(figsize=(4.5, 3.4))
    ax.loglog(ns, errors, marker="o")
    ax.set_xlabel("sample size")
    ax.set_ylabel(ylabel)
    ax.set_title(title)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    return _save(fig, path)
