"""Random-feature kernels from tessellation ensembles and their limits.

One tessellation turns a point into a one-hot indicator of its cell; the
inner product of two such features is 1 exactly when the points share a
cell. Averaging over an ensemble of independent tessellations gives the
empirical kernel, an unbiased estimate of the probability that no cut ever
separated the pair. That probability has a closed form: the exponential of
minus the lifetime times the mass of hyperplanes crossing the segment
between the points. Randomizing the lifetime replaces the exponential with
the Laplace transform of the lifetime law, which is what the three
``*Lifetime`` classes implement.

Feature vectors are never materialized; per-tree leaf indices carry the
same information and make Gram assembly a sequence of equality tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MeasureError
from .geometry import Polytope
from .measures import DirectionalDistribution
from .tessellation import TessellationTree, sample_stit, tree_rng

# series switch for the uniform-lifetime transform near s = 0
_UNIFORM_SERIES_CUTOFF = 1e-8


@dataclass(frozen=True)
class FixedLifetime:
    """Deterministic lifetime; the limit kernel is exp(-value * s)."""

    value: float

    def __post_init__(self):
        if self.value < 0.0 or not np.isfinite(self.value):
            raise MeasureError("lifetime must be finite and nonnegative")

    def sample(self, rng: np.random.Generator) -> float:
        return self.value

    def laplace_transform(self, s):
        return np.exp(-self.value * np.asarray(s, dtype=float))


@dataclass(frozen=True)
class GammaLifetime:
    """Gamma-distributed lifetime with the given shape and rate."""

    shape: float
    rate: float

    def __post_init__(self):
        if self.shape <= 0.0 or self.rate <= 0.0:
            raise MeasureError("gamma lifetime requires positive shape and rate")

    def sample(self, rng: np.random.Generator) -> float:
        return float(rng.gamma(self.shape, 1.0 / self.rate))

    def laplace_transform(self, s):
        s = np.asarray(s, dtype=float)
        return (self.rate / (self.rate + s)) ** self.shape


@dataclass(frozen=True)
class UniformLifetime:
    """Lifetime uniform on [low, high] with 0 < low < high."""

    low: float
    high: float

    def __post_init__(self):
        if not (0.0 < self.low < self.high):
            raise MeasureError("uniform lifetime requires 0 < low < high")

    def sample(self, rng: np.random.Generator) -> float:
        return float(rng.uniform(self.low, self.high))

    def laplace_transform(self, s):
        arr = np.asarray(s, dtype=float)
        scalar = arr.ndim == 0
        arr = np.atleast_1d(arr)
        a, b = self.low, self.high
        out = np.empty_like(arr)
        small = arr < _UNIFORM_SERIES_CUTOFF
        # series expansion of (e^{-sa} - e^{-sb}) / (s (b - a)) around s = 0
        ss = arr[small]
        out[small] = 1.0 - ss * (a + b) / 2.0 + ss**2 * (a * a + a * b + b * b) / 6.0
        sl = arr[~small]
        out[~small] = (np.exp(-sl * a) - np.exp(-sl * b)) / (sl * (b - a))
        return float(out[0]) if scalar else out.reshape(np.asarray(s).shape)


Lifetime = FixedLifetime | GammaLifetime | UniformLifetime


@dataclass(frozen=True)
class KernelSpec:
    """A directional measure paired with a lifetime law.

    ``evaluate`` returns the limit kernel: the probability that the two
    points share a cell in a fresh tessellation. It equals 1 on the
    diagonal, is symmetric and translation invariant, and lies in (0, 1].
    """

    measure: DirectionalDistribution
    lifetime: Lifetime

    def evaluate(self, x, y) -> float:
        s = self.measure.segment_mass(x, y)
        return float(self.lifetime.laplace_transform(s))

    def segment_masses(self, X, Y=None) -> np.ndarray:
        """Pairwise segment masses between rows of X and rows of Y."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        Y = X if Y is None else np.atleast_2d(np.asarray(Y, dtype=float))
        diff = X[:, None, :] - Y[None, :, :]
        if self.measure.kind == "discrete":
            proj = np.abs(np.einsum("ijk,lk->ijl", diff, self.measure.directions))
            return proj @ self.measure.weights
        from .measures import isotropic_segment_coefficient

        return isotropic_segment_coefficient(self.measure.dim) * np.linalg.norm(
            diff, axis=2
        )

    def gram(self, X, Y=None) -> np.ndarray:
        """Exact limit-kernel Gram matrix for the given points."""
        return np.asarray(self.lifetime.laplace_transform(self.segment_masses(X, Y)))


class RandomFeatureSet:
    """An ensemble of independent tessellations used as a feature map."""

    def __init__(self, spec: KernelSpec, window: Polytope, trees: list[TessellationTree], seed):
        self.spec = spec
        self.window = window
        self.trees = trees
        self.seed = seed

    @classmethod
    def build(cls, spec: KernelSpec, count: int, window: Polytope, seed) -> "RandomFeatureSet":
        """Sample ``count`` independent tessellations of ``window``.

        With a random lifetime law each tree first draws its own lifetime,
        then simulates with it. Trees are reproducible per (seed, index).
        """
        if count < 1:
            raise MeasureError("feature set needs at least one tree")
        entropy = seed if isinstance(seed, tuple) else (seed,)
        trees = []
        for m in range(count):
            tree_seed = entropy + (m,)
            lifetime = spec.lifetime.sample(tree_rng(tree_seed))
            trees.append(sample_stit(spec.measure, lifetime, window, tree_seed))
        return cls(spec, window, trees, seed)

    @property
    def tree_count(self) -> int:
        return len(self.trees)

    def feature_dimensions(self) -> list[int]:
        """Per-tree feature dimension: the number of leaf cells."""
        return [t.leaf_count for t in self.trees]

    def leaf_matrix(self, X) -> np.ndarray:
        """(tree_count, n_points) matrix of leaf indices."""
        pts = np.atleast_2d(np.asarray(X, dtype=float))
        return np.vstack([t.leaf_indices(pts) for t in self.trees])

    def kernel(self, x, y) -> float:
        """Empirical kernel: fraction of trees where x and y share a cell."""
        hits = sum(t.same_cell(x, y) for t in self.trees)
        return hits / self.tree_count

    def gram(self, X) -> np.ndarray:
        """Empirical Gram matrix; PSD with a unit diagonal by construction."""
        L = self.leaf_matrix(X)
        n = L.shape[1]
        acc = np.zeros((n, n))
        for row in L:
            acc += row[:, None] == row[None, :]
        return acc / self.tree_count


def build_features(spec: KernelSpec, count: int, window: Polytope, seed) -> RandomFeatureSet:
    return RandomFeatureSet.build(spec, count, window, seed)


def max_kernel_error(features: RandomFeatureSet, spec: KernelSpec, grid) -> float:
    """Largest |empirical - limit| kernel deviation over all grid pairs."""
    pts = np.atleast_2d(np.asarray(grid, dtype=float))
    emp = features.gram(pts)
    exact = spec.gram(pts)
    return float(np.abs(emp - exact).max())


def hoeffding_envelope(tree_count: int, failure_probability: float) -> float:
    """Deviation bound exceeded with probability at most ``failure_probability``."""
    return float(np.sqrt(np.log(2.0 / failure_probability) / (2.0 * tree_count)))
