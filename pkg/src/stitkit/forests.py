"""Density and regression estimators built on tessellation forests.

A single tree estimates a density at x by counting the data points that
share x's cell and dividing by the cell volume (clipped to the window, so
each tree integrates to exactly one over the window). The forest averages
trees. Two flavors exist:

* ``density``       - mean over trees of count / (n * volume); its
  infinite-tree limit for the axis-aligned measure is
  ``infinite_forest_density`` (a kernel estimator built on the exponential
  integral);
* ``ratio_density``  - ratio of the averaged count to the averaged volume,
  which converges to the Laplace kernel estimator instead.

Forest lifetimes follow the bandwidth convention: a forest with inverse
bandwidth ``lam`` runs its trees to lifetime ``lam * d``, so the matched
kernel estimators have bandwidth ``1/lam``. (The kernel module uses the raw
lifetime; the two parameters are named differently on purpose.)

Regression replaces counts with response means per cell; a tree whose cell
at x holds no data contributes the global response mean, keeping the
estimate defined and bounded.
"""

from __future__ import annotations

import numpy as np

from .errors import DegenerateCellError, InvalidBodyError, OutOfWindowError
from .geometry import Polytope
from .measures import DirectionalDistribution
from .special import kernel_correction
from .tessellation import TessellationTree, sample_stit


def _as_points(data, dim=None) -> np.ndarray:
    pts = np.asarray(data, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise InvalidBodyError("data must be a nonempty (n, d) array")
    if dim is not None and pts.shape[1] != dim:
        raise InvalidBodyError(f"data dimension {pts.shape[1]} does not match {dim}")
    return pts


def _build_trees(measure, inv_bandwidth, window, count, seed):
    if inv_bandwidth <= 0.0:
        raise InvalidBodyError("inv_bandwidth must be positive")
    if count < 1:
        raise InvalidBodyError("forest needs at least one tree")
    lifetime = inv_bandwidth * window.dim
    entropy = seed if isinstance(seed, tuple) else (seed,)
    return [sample_stit(measure, lifetime, window, entropy + (m,)) for m in range(count)]


def _leaf_volumes(tree: TessellationTree) -> np.ndarray:
    vols = np.array([leaf.body.volume for leaf in tree.leaves])
    if np.any(vols <= 0.0):
        raise DegenerateCellError("tree contains a flat cell with zero volume")
    return vols


class DensityForest:
    """Forest density estimator over a bounded window."""

    def __init__(self, measure, inv_bandwidth, window, data, trees, seed):
        self.measure = measure
        self.inv_bandwidth = float(inv_bandwidth)
        self.window = window
        self.data = data
        self.trees = trees
        self.seed = seed
        self.n = data.shape[0]
        self._counts = []
        self._volumes = []
        for tree in trees:
            idx = tree.leaf_indices(data)
            self._counts.append(np.bincount(idx, minlength=tree.leaf_count))
            self._volumes.append(_leaf_volumes(tree))

    @classmethod
    def build(cls, measure: DirectionalDistribution, inv_bandwidth: float,
              window: Polytope, data, tree_count: int, seed) -> "DensityForest":
        pts = _as_points(data, window.dim)
        if not np.all(window.contains_many(pts)):
            raise OutOfWindowError("every data point must lie in the window")
        trees = _build_trees(measure, inv_bandwidth, window, tree_count, seed)
        return cls(measure, inv_bandwidth, window, pts, trees, seed)

    @property
    def tree_count(self) -> int:
        return len(self.trees)

    def _per_tree_values(self, X, max_trees=None) -> np.ndarray:
        pts = _as_points(X, self.window.dim)
        trees = self.trees[:max_trees] if max_trees else self.trees
        vals = np.empty((len(trees), pts.shape[0]))
        for m, tree in enumerate(trees):
            idx = tree.leaf_indices(pts)
            vals[m] = self._counts[m][idx] / (self.n * self._volumes[m][idx])
        return vals

    def density(self, X, max_trees=None) -> np.ndarray:
        """Forest density at the query points (1-d array of values)."""
        return self._per_tree_values(X, max_trees).mean(axis=0)

    def density_se(self, X, max_trees=None) -> np.ndarray:
        """Monte Carlo standard error of :meth:`density` across trees."""
        vals = self._per_tree_values(X, max_trees)
        if vals.shape[0] < 2:
            return np.zeros(vals.shape[1])
        return vals.std(axis=0, ddof=1) / np.sqrt(vals.shape[0])

    def ratio_density(self, X, max_trees=None) -> np.ndarray:
        """Averaged count over averaged volume; tends to the Laplace KDE."""
        pts = _as_points(X, self.window.dim)
        trees = self.trees[:max_trees] if max_trees else self.trees
        num = np.zeros(pts.shape[0])
        den = np.zeros(pts.shape[0])
        for m, tree in enumerate(trees):
            idx = tree.leaf_indices(pts)
            num += self._counts[m][idx] / self.n
            den += self._volumes[m][idx]
        return num / den

    def window_integral(self, max_trees=None) -> tuple[float, np.ndarray]:
        """Integral of the estimator over the window, evaluated leaf by leaf.

        Returns (forest integral, per-tree integrals); both equal one up to
        rounding because each leaf contributes count/(n*vol) * vol.
        """
        trees = self.trees[:max_trees] if max_trees else self.trees
        per_tree = np.array(
            [
                float(np.sum(c / (self.n * v) * v))
                for c, v in zip(self._counts[: len(trees)], self._volumes[: len(trees)])
            ]
        )
        return float(per_tree.mean()), per_tree


class RegressionForest:
    """Forest regression estimator: average of per-cell response means."""

    def __init__(self, measure, inv_bandwidth, window, data, responses, trees, seed):
        self.measure = measure
        self.inv_bandwidth = float(inv_bandwidth)
        self.window = window
        self.data = data
        self.responses = responses
        self.trees = trees
        self.seed = seed
        self.global_mean = float(responses.mean())
        self._counts = []
        self._sums = []
        for tree in trees:
            idx = tree.leaf_indices(data)
            self._counts.append(np.bincount(idx, minlength=tree.leaf_count))
            self._sums.append(np.bincount(idx, weights=responses, minlength=tree.leaf_count))

    @classmethod
    def build(cls, measure: DirectionalDistribution, inv_bandwidth: float,
              window: Polytope, data, responses, tree_count: int, seed) -> "RegressionForest":
        pts = _as_points(data, window.dim)
        y = np.asarray(responses, dtype=float)
        if y.shape != (pts.shape[0],):
            raise InvalidBodyError("responses must be one value per data point")
        if not np.all(np.isfinite(y)):
            raise InvalidBodyError("responses must be finite")
        if not np.all(window.contains_many(pts)):
            raise OutOfWindowError("every data point must lie in the window")
        trees = _build_trees(measure, inv_bandwidth, window, tree_count, seed)
        return cls(measure, inv_bandwidth, window, pts, y, trees, seed)

    @property
    def tree_count(self) -> int:
        return len(self.trees)

    def predict(self, X, max_trees=None) -> np.ndarray:
        """Forest prediction at the query points.

        Trees whose cell at x contains no data fall back to the global
        response mean.
        """
        pts = _as_points(X, self.window.dim)
        trees = self.trees[:max_trees] if max_trees else self.trees
        acc = np.zeros(pts.shape[0])
        for m, tree in enumerate(trees):
            idx = tree.leaf_indices(pts)
            c = self._counts[m][idx]
            s = self._sums[m][idx]
            acc += np.where(c > 0, s / np.maximum(c, 1), self.global_mean)
        return acc / len(trees)


# ----------------------------------------------------------------------
# closed-form estimators (axis-aligned measure)


def infinite_forest_density(data, inv_bandwidth: float, X) -> np.ndarray:
    """Infinite-tree limit of the axis-aligned forest density.

    A kernel estimator with bandwidth ``1/inv_bandwidth``: each data point
    contributes ``lam^d * exp(-lam |x - X_i|_1) * prod_j h(lam |x_j - X_ij|)``.
    """
    if inv_bandwidth <= 0.0:
        raise InvalidBodyError("inv_bandwidth must be positive")
    pts = _as_points(data)
    q = _as_points(X, pts.shape[1])
    lam = float(inv_bandwidth)
    scaled = lam * np.abs(q[:, None, :] - pts[None, :, :])
    factors = np.exp(-scaled.sum(axis=2)) * np.prod(
        kernel_correction(scaled.ravel()).reshape(scaled.shape), axis=2
    )
    return lam ** pts.shape[1] / pts.shape[0] * factors.sum(axis=1)


def laplace_kde(data, inv_bandwidth: float, X) -> np.ndarray:
    """Product-Laplace kernel density estimate with bandwidth 1/inv_bandwidth."""
    if inv_bandwidth <= 0.0:
        raise InvalidBodyError("inv_bandwidth must be positive")
    pts = _as_points(data)
    q = _as_points(X, pts.shape[1])
    lam = float(inv_bandwidth)
    l1 = np.abs(q[:, None, :] - pts[None, :, :]).sum(axis=2)
    return (lam / 2.0) ** pts.shape[1] / pts.shape[0] * np.exp(-lam * l1).sum(axis=1)


def stit_forest_kernel_estimate(
    measure: DirectionalDistribution,
    x,
    tree_count: int,
    seed,
    window_halfwidth: float = 8.0,
) -> float:
    """Monte Carlo estimate of the infinite-forest kernel for any measure.

    Simulates unit-bandwidth tessellations on a window around the origin
    and averages the inverse-volume-weighted indicator that ``x`` shares
    the origin's cell. This is an estimate, not a closed form: cells are
    clipped at the window, which biases values at distances comparable to
    the halfwidth. Closed forms exist only for the axis-aligned measure
    (see :func:`mondrian_forest_kernel`).
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = x.shape[0]
    w = float(window_halfwidth)
    window = Polytope.box(-w * np.ones(d), w * np.ones(d))
    origin = np.zeros(d)
    entropy = seed if isinstance(seed, tuple) else (seed,)
    total = 0.0
    for m in range(tree_count):
        tree = sample_stit(measure, float(d), window, entropy + (m,))
        ref = tree.locate(origin)
        cell = tree.cell_polytope(ref)
        if cell.contains(x):
            total += 1.0 / cell.volume
    return total / tree_count


# ----------------------------------------------------------------------
# error norms on evaluation grids


def l1_error(estimate_values, truth_values, grid) -> float:
    """Trapezoid quadrature of |estimate - truth| over a sorted 1-d grid."""
    est, tru, g = _norm_inputs(estimate_values, truth_values, grid)
    return float(np.trapezoid(np.abs(est - tru), g))


def l2_error(estimate_values, truth_values, grid) -> float:
    """Root of the trapezoid quadrature of (estimate - truth)^2."""
    est, tru, g = _norm_inputs(estimate_values, truth_values, grid)
    return float(np.sqrt(np.trapezoid((est - tru) ** 2, g)))


def _norm_inputs(est, tru, grid):
    est = np.asarray(est, dtype=float)
    tru = np.asarray(tru, dtype=float)
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise InvalidBodyError("grid must be a nonempty 1-d array")
    if est.shape != g.shape or tru.shape != g.shape:
        raise InvalidBodyError("value arrays must match the grid shape")
    if np.any(np.diff(g) <= 0):
        raise InvalidBodyError("grid must be strictly increasing")
    return est, tru, g
