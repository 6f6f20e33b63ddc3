"""Independent Monte Carlo and quadrature oracles used by the tests.

These deliberately avoid the library's own computational paths: volumes
come from rejection sampling, segment masses from hit counting, and the
special functions from adaptive quadrature or mpmath.
"""

from __future__ import annotations

import numpy as np


def mc_volume(body, draws: int, seed: int) -> tuple[float, float]:
    """Rejection-sampling volume over the bounding box: (estimate, se)."""
    rng = np.random.default_rng(seed)
    verts = body.vertices
    lo, hi = verts.min(axis=0), verts.max(axis=0)
    box_vol = float(np.prod(hi - lo))
    pts = rng.uniform(lo, hi, size=(draws, verts.shape[1]))
    inside = body.contains_many(pts)
    p = inside.mean()
    se = box_vol * np.sqrt(max(p * (1 - p), 1e-12) / draws)
    return box_vol * p, float(se)


def hit_fraction(measure, window, x, y, draws: int, seed: int) -> tuple[float, float]:
    """Fraction of sampled window cuts that separate x from y: (est, se)."""
    rng = np.random.default_rng(seed)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    hits = 0
    for _ in range(draws):
        plane = measure.sample_cut(window, rng)
        a = plane.signed_distance(x)
        b = plane.signed_distance(y)
        hits += (a > 0) != (b > 0)
    p = hits / draws
    return p, float(np.sqrt(max(p * (1 - p), 1e-12) / draws))


def circle_average(f, points: int = 200_000) -> float:
    """Average of f(u) over the unit circle by the rectangle rule."""
    theta = 2.0 * np.pi * (np.arange(points) + 0.5) / points
    u = np.column_stack([np.cos(theta), np.sin(theta)])
    return float(np.mean([f(v) for v in u])) if points <= 4096 else _vec_avg(f, u)


def _vec_avg(f, u):
    # f must accept a stacked array in this branch
    return float(np.mean(f(u)))


def zero_cell_mc(x, draws: int, seed: int) -> tuple[float, float]:
    """Monte Carlo of the inverse-volume-weighted origin-cell indicator."""
    rng = np.random.default_rng(seed)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = x.shape[0]
    T = rng.exponential(size=(draws, 2, d))
    inside = np.all((x >= -T[:, 0, :]) & (x <= T[:, 1, :]), axis=1)
    vols = (T[:, 0, :] + T[:, 1, :]).prod(axis=1)
    vals = inside / vols
    return float(vals.mean()), float(vals.std(ddof=1) / np.sqrt(draws))


def regular_polygon(k: int, diameter: float = 1.0) -> np.ndarray:
    """Vertices of a regular k-gon inscribed in a circle of the diameter."""
    theta = 2.0 * np.pi * np.arange(k) / k
    r = diameter / 2.0
    return np.column_stack([r * np.cos(theta), r * np.sin(theta)])
