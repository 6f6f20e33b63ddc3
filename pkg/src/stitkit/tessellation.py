"""Recursive random tessellations of a bounded window.

A tessellation is grown by giving every live cell an independent exponential
clock whose rate is the mass of hyperplanes hitting that cell. When a clock
rings before the global lifetime expires, the cell is cut by a hyperplane
drawn from the directional measure conditioned to hit it, and the two
children restart their own clocks from the cut time. Cells that outlive the
horizon become the leaves of a binary tree over the window.

Randomness is fully reproducible: every cell owns a private stream derived
by hashing the tree seed together with the cell's root-to-node path, so the
same (measure, lifetime, window, seed) always reproduces bit-identical
trees regardless of traversal order.

The module also provides the lift of a finite-direction tessellation to an
axis-aligned one in higher dimension: projecting the data through the
direction matrix and partitioning with an axis-aligned tessellation of the
projected window is distributionally equivalent to the direct simulation,
and usually cheaper because boxes split in O(d).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidBodyError, OutOfWindowError, SamplingError
from .geometry import TOL, Polytope
from .measures import DirectionalDistribution, from_directions, mondrian

# spawn-key marker for per-tree auxiliary draws (never collides with a
# cell path, whose entries are all 0 or 1)
_AUX_KEY = 0xFFFF


def _cell_rng(seed, path: tuple[int, ...]) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=path))


def tree_rng(seed, purpose: int = 0) -> np.random.Generator:
    """Auxiliary stream tied to ``seed`` but disjoint from all cell streams."""
    return _cell_rng(seed, (_AUX_KEY, purpose))


class _Cut:
    __slots__ = ("normal", "offset", "time", "low", "high")

    def __init__(self, normal, offset, time, low, high):
        self.normal = normal
        self.offset = offset
        self.time = time
        self.low = low
        self.high = high


class _Leaf:
    __slots__ = ("body", "birth", "index")

    def __init__(self, body, birth):
        self.body = body
        self.birth = birth
        self.index = -1


@dataclass(frozen=True)
class CellRef:
    """Address of a leaf cell: the root-to-leaf sequence of sides.

    Entry 0 selects the low side of a cut (``<normal, x> <= offset``) and
    entry 1 the high side.
    """

    path: tuple[int, ...]


class TessellationTree:
    """A sampled tessellation of a window: binary tree of timed cuts."""

    def __init__(self, window, lifetime, measure, seed, root, leaves):
        self.window = window
        self.lifetime = lifetime
        self.measure = measure
        self.seed = seed
        self.root = root
        self.leaves = leaves

    @property
    def leaf_count(self) -> int:
        return len(self.leaves)

    def leaf_cells(self) -> list[Polytope]:
        return [leaf.body for leaf in self.leaves]

    # ------------------------------------------------------------------
    # point location

    def locate(self, x) -> CellRef:
        """Leaf containing ``x``; ties on a cut go to the high side."""
        x = np.asarray(x, dtype=float)
        if not self.window.contains(x, TOL):
            raise OutOfWindowError("point lies outside the window")
        node = self.root
        path: list[int] = []
        while isinstance(node, _Cut):
            if float(x @ node.normal) - node.offset >= -TOL:
                path.append(1)
                node = node.high
            else:
                path.append(0)
                node = node.low
        return CellRef(tuple(path))

    def leaf_index(self, x) -> int:
        """Index (depth-first order) of the leaf containing ``x``."""
        x = np.asarray(x, dtype=float)
        if not self.window.contains(x, TOL):
            raise OutOfWindowError("point lies outside the window")
        node = self.root
        while isinstance(node, _Cut):
            if float(x @ node.normal) - node.offset >= -TOL:
                node = node.high
            else:
                node = node.low
        return node.index

    def leaf_indices(self, points) -> np.ndarray:
        """Vectorized :meth:`leaf_index` for an (n, d) array of points."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        inside = self.window.contains_many(pts, TOL)
        if not np.all(inside):
            raise OutOfWindowError(
                f"{int((~inside).sum())} point(s) lie outside the window"
            )
        out = np.empty(pts.shape[0], dtype=np.int64)
        stack = [(self.root, np.arange(pts.shape[0]))]
        while stack:
            node, idx = stack.pop()
            if idx.size == 0:
                continue
            if isinstance(node, _Leaf):
                out[idx] = node.index
                continue
            side = pts[idx] @ node.normal - node.offset >= -TOL
            stack.append((node.high, idx[side]))
            stack.append((node.low, idx[~side]))
        return out

    def same_cell(self, x, y) -> bool:
        """True when both points fall in the same leaf cell."""
        return self.leaf_index(x) == self.leaf_index(y)

    def cell_polytope(self, ref: CellRef) -> Polytope:
        """The stored polytope of the leaf addressed by ``ref``."""
        node = self.root
        for bit in ref.path:
            if not isinstance(node, _Cut):
                raise InvalidBodyError("cell reference walks past a leaf")
            node = node.high if bit else node.low
        if not isinstance(node, _Leaf):
            raise InvalidBodyError("cell reference does not address a leaf")
        return node.body

    # ------------------------------------------------------------------
    # serialization

    def to_json_obj(self) -> dict:
        """JSON-ready tree with stable field order, for diffable dumps."""

        def visit(node):
            if isinstance(node, _Leaf):
                return {"vertices": [[float(c) for c in v] for v in node.body.vertices]}
            return {
                "cut": {
                    "normal": [float(c) for c in node.normal],
                    "displacement": float(node.offset),
                    "time": float(node.time),
                },
                "left": visit(node.low),
                "right": visit(node.high),
            }

        return visit(self.root)

    def __repr__(self) -> str:
        return (
            f"TessellationTree(lifetime={self.lifetime}, "
            f"leaves={self.leaf_count}, seed={self.seed!r})"
        )


def sample_stit(
    measure: DirectionalDistribution,
    lifetime: float,
    window: Polytope,
    seed,
) -> TessellationTree:
    """Grow a tessellation of ``window`` up to the given lifetime.

    ``seed`` may be an int or a tuple of ints; it determines the tree
    bit-for-bit. A lifetime of zero yields the uncut window.
    """
    if lifetime < 0.0 or not np.isfinite(lifetime):
        raise SamplingError("lifetime must be finite and nonnegative")
    if measure.dim != window.dim:
        raise SamplingError(
            f"measure dimension {measure.dim} does not match window dimension {window.dim}"
        )

    def grow(body: Polytope, birth: float, path: tuple[int, ...]):
        rng = _cell_rng(seed, path)
        rate = measure.hit_mass(body)
        if not np.isfinite(rate):
            raise SamplingError("splitting rate is not finite")
        if rate <= 0.0:
            return _Leaf(body, birth)
        cut_time = birth + rng.exponential(1.0 / rate)
        if cut_time > lifetime:
            return _Leaf(body, birth)
        plane = measure.sample_cut(body, rng)
        low_body, high_body = body.split(plane)
        return _Cut(
            plane.normal,
            plane.offset,
            cut_time,
            grow(low_body, cut_time, path + (0,)),
            grow(high_body, cut_time, path + (1,)),
        )

    root = grow(window, 0.0, ())
    leaves: list[_Leaf] = []
    stack = [root]
    while stack:
        node = stack.pop()
        if isinstance(node, _Leaf):
            node.index = len(leaves)
            leaves.append(node)
        else:
            stack.append(node.high)
            stack.append(node.low)
    return TessellationTree(window, lifetime, measure, seed, root, leaves)


class LiftedTessellation:
    """Axis-aligned tessellation acting on data through a direction matrix.

    Equivalent in distribution, for same-cell queries, to the direct
    simulation with the uniform measure over the matrix rows.
    """

    def __init__(self, matrix: np.ndarray, inner: TessellationTree, window: Polytope):
        self.matrix = matrix
        self.inner = inner
        self.window = window

    def same_cell(self, x, y) -> bool:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if not (self.window.contains(x, TOL) and self.window.contains(y, TOL)):
            raise OutOfWindowError("point lies outside the window")
        return self.inner.same_cell(self.matrix @ x, self.matrix @ y)

    def leaf_indices(self, points) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        inside = self.window.contains_many(pts, TOL)
        if not np.all(inside):
            raise OutOfWindowError("point lies outside the window")
        return self.inner.leaf_indices(pts @ self.matrix.T)


def lift_to_mondrian(directions, lifetime: float, window: Polytope, seed) -> LiftedTessellation:
    """Simulate a finite-direction tessellation by lifting to axis-aligned.

    The window vertices are projected through the (n x d) direction matrix;
    an axis-aligned tessellation with the same lifetime is grown on the
    bounding box of the projection (padded by 1e-9, which cannot affect
    same-cell queries because cuts outside the box miss every projected
    point). Same-cell queries on the original window are answered by the
    inner tree at the projected points.
    """
    measure = from_directions(directions)  # validates units and spanning
    U = measure.directions
    proj = window.vertices @ U.T
    lo = proj.min(axis=0) - 1e-9
    hi = proj.max(axis=0) + 1e-9
    inner = sample_stit(mondrian(U.shape[0]), lifetime, Polytope.box(lo, hi), seed)
    return LiftedTessellation(U, inner, window)


def mondrian_cell_at(x, inv_bandwidth: float, rng: np.random.Generator) -> Polytope:
    """Draw the axis-aligned cell that would contain ``x``.

    Each axis extends from ``x`` by independent exponential lengths with
    mean ``1/inv_bandwidth`` on both sides, matching the cell distribution
    of the axis-aligned tessellation run to lifetime ``inv_bandwidth * d``.
    """
    if inv_bandwidth <= 0.0:
        raise SamplingError("inv_bandwidth must be positive")
    x = np.atleast_1d(np.asarray(x, dtype=float))
    d = x.shape[0]
    gaps = rng.exponential(1.0 / inv_bandwidth, size=(2, d))
    return Polytope.box(x - gaps[0], x + gaps[1])
