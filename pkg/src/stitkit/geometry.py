"""Bounded convex polytopes with exact splitting, volumes, and support functions.

Every body carries a dual representation: an H-representation (rows of unit
outward normals ``A`` with offsets ``b``, meaning ``<a_i, x> <= b_i``) and a
V-representation (the vertex array). Axis-aligned boxes additionally keep
their per-axis bounds so that box operations stay O(d) and splits along
coordinate axes are exact; two-dimensional cells keep their vertices in
counterclockwise order so areas come from the shoelace rule.

Splitting dispatches on shape:

* box cut by an axis-aligned hyperplane -> two boxes (exact bounds surgery),
* any 2-d cell -> convex polygon clip against the cutting line,
* higher-dimensional oblique cells -> vertex re-enumeration from the
  augmented halfspace system (Qhull), seeded by a Chebyshev-center LP.

All values are immutable after construction and safe to share across
workers.
"""

from __future__ import annotations

import itertools

import numpy as np

from .errors import InvalidBodyError, SplitError

# On-hyperplane classification tolerance. Points within TOL of a cutting
# hyperplane are deterministically assigned to the positive side.
TOL = 1e-9

# Tolerance for unit-norm and canonicalization checks.
UNIT_TOL = 1e-12


def unit_vector(v) -> np.ndarray:
    """Validate and return ``v`` as a read-only unit vector."""
    u = np.array(v, dtype=float)
    if u.ndim != 1 or u.size == 0:
        raise InvalidBodyError("direction must be a nonempty 1-d vector")
    norm = float(np.linalg.norm(u))
    if abs(norm - 1.0) > UNIT_TOL:
        raise InvalidBodyError(f"direction must have unit norm, got {norm!r}")
    u.setflags(write=False)
    return u


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


class Hyperplane:
    """An affine hyperplane ``{x : <normal, x> = offset}``.

    The pair ``(u, t)`` and its negation ``(-u, -t)`` describe the same set;
    instances are canonicalized at construction (first component of the
    normal larger than the unit tolerance is made positive) so equality is
    plain field comparison.
    """

    __slots__ = ("normal", "offset")

    def __init__(self, normal, offset: float):
        u = unit_vector(normal)
        t = float(offset)
        flip = False
        for c in u:
            if abs(c) > UNIT_TOL:
                flip = c < 0.0
                break
        if flip:
            u = _readonly(-np.asarray(u))
            t = -t
        object.__setattr__(self, "normal", u)
        object.__setattr__(self, "offset", t)

    def __setattr__(self, *args):  # pragma: no cover - immutability guard
        raise AttributeError("Hyperplane is immutable")

    @property
    def dim(self) -> int:
        return self.normal.shape[0]

    def signed_distance(self, x) -> float:
        """Signed offset of ``x`` from the plane along the stored normal."""
        return float(np.dot(np.asarray(x, dtype=float), self.normal) - self.offset)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Hyperplane):
            return NotImplemented
        return (
            self.normal.shape == other.normal.shape
            and np.allclose(self.normal, other.normal, rtol=0.0, atol=UNIT_TOL)
            and abs(self.offset - other.offset) <= TOL
        )

    __hash__ = None  # tolerance-based equality is incompatible with hashing

    def __repr__(self) -> str:
        return f"Hyperplane(normal={self.normal.tolist()}, offset={self.offset})"


class Polytope:
    """A bounded, nonempty convex polytope in dual representation."""

    __slots__ = ("dim", "normals", "offsets", "lo", "hi", "_vertices")

    def __init__(self, dim, normals, offsets, vertices=None, lo=None, hi=None):
        object.__setattr__(self, "dim", int(dim))
        object.__setattr__(self, "normals", _readonly(np.atleast_2d(normals)))
        object.__setattr__(self, "offsets", _readonly(np.atleast_1d(offsets)))
        object.__setattr__(self, "lo", None if lo is None else _readonly(lo))
        object.__setattr__(self, "hi", None if hi is None else _readonly(hi))
        if vertices is None:
            object.__setattr__(self, "_vertices", None)
        else:
            object.__setattr__(self, "_vertices", _readonly(np.atleast_2d(vertices)))

    def __setattr__(self, *args):  # pragma: no cover - immutability guard
        raise AttributeError("Polytope is immutable")

    # ------------------------------------------------------------------
    # constructors

    @classmethod
    def box(cls, lo, hi) -> "Polytope":
        """Axis-aligned box with bounds ``lo <= x <= hi`` (componentwise)."""
        lo = np.atleast_1d(np.asarray(lo, dtype=float))
        hi = np.atleast_1d(np.asarray(hi, dtype=float))
        if lo.shape != hi.shape or lo.ndim != 1:
            raise InvalidBodyError("box bounds must be 1-d arrays of equal length")
        if np.any(hi < lo):
            raise InvalidBodyError("box requires lo <= hi on every axis")
        d = lo.shape[0]
        eye = np.eye(d)
        normals = np.vstack([eye, -eye])
        offsets = np.concatenate([hi, -lo])
        return cls(d, normals, offsets, vertices=None, lo=lo, hi=hi)

    @classmethod
    def interval(cls, a: float, b: float) -> "Polytope":
        return cls.box([a], [b])

    @classmethod
    def polygon(cls, vertices) -> "Polytope":
        """Convex polygon from its vertices (any order; sorted CCW here)."""
        pts = np.atleast_2d(np.asarray(vertices, dtype=float))
        if pts.shape[1] != 2:
            raise InvalidBodyError("polygon vertices must be 2-d points")
        pts = _unique_rows(pts)
        if pts.shape[0] < 3:
            raise InvalidBodyError("polygon needs at least 3 distinct vertices")
        center = pts.mean(axis=0)
        order = np.argsort(np.arctan2(pts[:, 1] - center[1], pts[:, 0] - center[0]))
        pts = pts[order]
        scale = max(1.0, float(np.abs(pts).max()))
        cross = _edge_crosses(pts)
        if np.any(cross < -1e-9 * scale * scale):
            raise InvalidBodyError("vertices do not describe a convex polygon")
        return cls._polygon_ccw(pts)

    @classmethod
    def _polygon_ccw(cls, pts: np.ndarray) -> "Polytope":
        """Polygon from vertices already in counterclockwise order."""
        normals, offsets = _polygon_halfspaces(pts)
        return cls(2, normals, offsets, vertices=pts)

    # ------------------------------------------------------------------
    # basic queries

    @property
    def is_box(self) -> bool:
        return self.lo is not None

    @property
    def vertices(self) -> np.ndarray:
        v = self._vertices
        if v is None:
            if self.dim == 2:
                # counterclockwise ring so polygon algorithms apply directly
                (x0, y0), (x1, y1) = self.lo, self.hi
                corners = np.array([[x0, y0], [x1, y0], [x1, y1], [x0, y1]])
            else:
                corners = np.array(
                    list(itertools.product(*zip(self.lo, self.hi))), dtype=float
                )
            object.__setattr__(self, "_vertices", _readonly(corners))
            v = self._vertices
        return v

    def support(self, direction) -> float:
        """sup over the body of ``<direction, x>`` (any nonzero direction)."""
        u = np.asarray(direction, dtype=float)
        if self.is_box:
            return float(np.maximum(u * self.lo, u * self.hi).sum())
        v = self._vertices
        if v is None or v.size == 0:
            raise InvalidBodyError("polytope has no vertices")
        return float(np.max(v @ u))

    def width(self, direction) -> float:
        """Extent of the body along ``direction``: support(u) + support(-u)."""
        u = np.asarray(direction, dtype=float)
        if self.is_box:
            return float(np.dot(np.abs(u), self.hi - self.lo))
        return self.support(u) + self.support(-u)

    def support_interval(self, direction) -> tuple[float, float]:
        """The range of ``<direction, x>`` over the body."""
        u = np.asarray(direction, dtype=float)
        return -self.support(-u), self.support(u)

    def contains(self, x, tol: float = TOL) -> bool:
        x = np.asarray(x, dtype=float)
        if self.is_box:
            return bool(np.all(x >= self.lo - tol) and np.all(x <= self.hi + tol))
        return bool(np.all(self.normals @ x <= self.offsets + tol))

    def contains_many(self, points, tol: float = TOL) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        if self.is_box:
            return np.all((pts >= self.lo - tol) & (pts <= self.hi + tol), axis=1)
        return np.all(pts @ self.normals.T <= self.offsets + tol, axis=1)

    @property
    def volume(self) -> float:
        """Exact volume (length / shoelace area / Qhull for d >= 3)."""
        if self.is_box:
            return float(np.prod(self.hi - self.lo))
        if self.dim == 2:
            return _shoelace(self.vertices)
        from scipy.spatial import ConvexHull, QhullError

        try:
            return float(ConvexHull(self.vertices).volume)
        except QhullError:
            return 0.0  # flat body

    @property
    def is_degenerate(self) -> bool:
        """True when the body is flat (zero volume at working precision)."""
        scale = max(1.0, float(np.abs(self.vertices).max()))
        return self.volume <= TOL * scale**self.dim

    @property
    def perimeter(self) -> float:
        if self.dim != 2:
            raise InvalidBodyError("perimeter is defined for 2-d bodies only")
        if self.is_box:
            return 2.0 * float(np.sum(self.hi - self.lo))
        v = self.vertices
        return float(np.linalg.norm(np.roll(v, -1, axis=0) - v, axis=1).sum())

    @property
    def diameter(self) -> float:
        """Largest pairwise distance between vertices (= max width)."""
        if self.is_box:
            return float(np.linalg.norm(self.hi - self.lo))
        v = self.vertices
        diff = v[:, None, :] - v[None, :, :]
        return float(np.sqrt((diff * diff).sum(axis=2)).max())

    def interior_point(self) -> np.ndarray:
        """A point in the (relative) interior: the vertex centroid."""
        return self.vertices.mean(axis=0)

    def translate(self, z) -> "Polytope":
        z = np.asarray(z, dtype=float)
        if self.is_box:
            return Polytope.box(self.lo + z, self.hi + z)
        return Polytope(
            self.dim,
            self.normals,
            self.offsets + self.normals @ z,
            vertices=self.vertices + z,
        )

    def validate(self, tol: float = TOL) -> None:
        """Raise unless vertices and halfspaces describe the same body."""
        v = self.vertices
        if v.size == 0:
            raise InvalidBodyError("polytope has no vertices")
        slack = v @ self.normals.T - self.offsets
        worst = float(slack.max())
        if worst > tol:
            raise InvalidBodyError(
                f"vertex violates a halfspace by {worst:.3e} (> {tol:.0e})"
            )
        # every halfspace must be supported by the vertex set (no gap between
        # the H- and V-description larger than the tolerance)
        tight = np.abs(slack).min(axis=0)
        if float(tight.max()) > 1e-6:
            raise InvalidBodyError("halfspace not attained by any vertex")

    # ------------------------------------------------------------------
    # splitting

    def split(self, plane: Hyperplane) -> tuple["Polytope", "Polytope"]:
        """Cut the body by ``plane`` into (low, high) children.

        ``low`` is the side ``<normal, x> <= offset`` and ``high`` the other.
        Raises :class:`SplitError` when the plane misses the interior.
        """
        if plane.dim != self.dim:
            raise SplitError("hyperplane dimension does not match the body")
        s = self.vertices @ plane.normal - plane.offset
        if s.min() > -TOL or s.max() < TOL:
            raise SplitError("hyperplane does not cross the interior of the body")
        if self.is_box:
            j = int(np.argmax(np.abs(plane.normal)))
            axis_aligned = (
                abs(abs(plane.normal[j]) - 1.0) <= UNIT_TOL
                and np.abs(np.delete(plane.normal, j)).max(initial=0.0) <= UNIT_TOL
            )
            if axis_aligned:
                return self._split_box_axis(j, plane.offset * np.sign(plane.normal[j]))
            if self.dim == 2:
                return _clip_polygon(self.vertices, plane)
            return self._split_general(plane)
        if self.dim == 2:
            return _clip_polygon(self.vertices, plane)
        return self._split_general(plane)

    def _split_box_axis(self, axis: int, t: float) -> tuple["Polytope", "Polytope"]:
        lo, hi = self.lo, self.hi
        hi_low = hi.copy()
        hi_low[axis] = t
        lo_high = lo.copy()
        lo_high[axis] = t
        return Polytope.box(lo, hi_low), Polytope.box(lo_high, hi)

    def _split_general(self, plane: Hyperplane) -> tuple["Polytope", "Polytope"]:
        low = _halfspace_child(self, plane.normal, plane.offset)
        high = _halfspace_child(self, -np.asarray(plane.normal), -plane.offset)
        return low, high

    def __repr__(self) -> str:
        kind = "box" if self.is_box else f"{self.dim}-d polytope"
        return f"Polytope({kind}, {len(self.vertices)} vertices)"


# ----------------------------------------------------------------------
# helpers


def _unique_rows(pts: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    # quadratic dedupe; vertex counts here are always small
    out: list[np.ndarray] = []
    for row in np.atleast_2d(pts):
        if not any(np.linalg.norm(row - q) <= tol for q in out):
            out.append(row)
    return np.array(out)


def _edge_crosses(pts: np.ndarray) -> np.ndarray:
    a = np.roll(pts, -1, axis=0) - pts
    b = np.roll(a, -1, axis=0)
    return a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]


def _shoelace(pts: np.ndarray) -> float:
    x, y = pts[:, 0], pts[:, 1]
    return 0.5 * float(np.abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def _polygon_halfspaces(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    edges = np.roll(pts, -1, axis=0) - pts
    lengths = np.linalg.norm(edges, axis=1)
    good = lengths > 1e-14
    edges, base = edges[good], pts[good]
    lengths = lengths[good]
    normals = np.column_stack([edges[:, 1], -edges[:, 0]]) / lengths[:, None]
    offsets = np.einsum("ij,ij->i", normals, base)
    return normals, offsets


def _dedupe_ring(points: list[np.ndarray], scale: float) -> np.ndarray:
    out: list[np.ndarray] = []
    for p in points:
        if not out or np.linalg.norm(p - out[-1]) > 1e-12 * scale:
            out.append(p)
    while len(out) > 1 and np.linalg.norm(out[0] - out[-1]) <= 1e-12 * scale:
        out.pop()
    return np.array(out)


def _clip_polygon(verts: np.ndarray, plane: Hyperplane) -> tuple[Polytope, Polytope]:
    """Split a CCW convex polygon by a line, returning (low, high) polygons."""
    s = verts @ plane.normal - plane.offset
    low_pts: list[np.ndarray] = []
    high_pts: list[np.ndarray] = []
    k = len(verts)
    for i in range(k):
        v0, s0 = verts[i], s[i]
        v1, s1 = verts[(i + 1) % k], s[(i + 1) % k]
        if s0 <= TOL:
            low_pts.append(v0)
        if s0 >= -TOL:
            high_pts.append(v0)
        if (s0 > TOL and s1 < -TOL) or (s0 < -TOL and s1 > TOL):
            w = v0 + (v1 - v0) * (s0 / (s0 - s1))
            low_pts.append(w)
            high_pts.append(w)
    scale = max(1.0, float(np.abs(verts).max()))
    low = _dedupe_ring(low_pts, scale)
    high = _dedupe_ring(high_pts, scale)
    if len(low) < 3 or len(high) < 3:
        raise SplitError("cut produces a degenerate side")
    return Polytope._polygon_ccw(low), Polytope._polygon_ccw(high)


def _halfspace_child(body: Polytope, normal: np.ndarray, offset: float) -> Polytope:
    """Intersect ``body`` with ``<normal, x> <= offset`` via Qhull (d >= 3)."""
    from scipy.optimize import linprog
    from scipy.spatial import HalfspaceIntersection

    A = np.vstack([body.normals, np.asarray(normal, dtype=float)])
    b = np.append(body.offsets, float(offset))
    m, d = A.shape
    res = linprog(
        c=np.append(np.zeros(d), -1.0),
        A_ub=np.hstack([A, np.ones((m, 1))]),
        b_ub=b,
        bounds=[(None, None)] * d + [(0.0, None)],
        method="highs",
    )
    if res.status != 0 or res.x is None or res.x[-1] <= TOL:
        raise SplitError("cut leaves no full-dimensional body on one side")
    center = res.x[:d]
    hs = HalfspaceIntersection(np.hstack([A, -b[:, None]]), center)
    verts = _unique_rows(np.asarray(hs.intersections), tol=1e-9)
    return Polytope(d, A, b, vertices=verts)
