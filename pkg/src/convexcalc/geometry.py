"""Exact polytope representations and the primitive geometric operations.

Everything downstream (quermassintegrals, convolution bodies, projection
bodies, the inequality checks) consumes the types and operations defined
here.  Polytopes are kept in a dual representation: the extreme points
(V-rep) and an irredundant facet system (H-rep) with unit normals.  Exact
paths are restricted to ambient dimension <= 4; facet counts at desk scale
stay small, so vertex enumeration is done combinatorially (enumerate
dim-subsets of hyperplanes, solve, keep feasible points).

All values are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError

# Vertex dedup / feasibility tolerance; inequality verdicts use the looser
# TAU_CHECK.  Both are per-scenario configurable, these are the defaults.
TAU_GEOM = 1e-9
TAU_CHECK = 1e-7

MAX_EXACT_DIM = 4


class GeometryError(Exception):
    """Base class for geometric failures."""


class EmptyInputError(GeometryError):
    pass


class DimensionMismatchError(GeometryError):
    pass


class DegenerateInputError(GeometryError):
    pass


class UnboundedError(GeometryError):
    """Halfspace intersection is unbounded; carries a certifying ray."""

    def __init__(self, ray):
        super().__init__(f"unbounded halfspace intersection, feasible ray {ray}")
        self.ray = np.asarray(ray, dtype=float)


class EmptyIntersectionError(GeometryError):
    pass


class UnsupportedDimensionError(GeometryError):
    pass


def _as_points(points) -> np.ndarray:
    pts = np.asarray(points, dtype=float)
    if pts.size == 0:
        raise EmptyInputError("no input points")
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.ndim != 2:
        raise DimensionMismatchError(f"expected 2-D point array, got shape {pts.shape}")
    if not np.isfinite(pts).all():
        raise DegenerateInputError("non-finite coordinate in input points")
    return pts


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a, dtype=float)
    a.setflags(write=False)
    return a


def dedup_points(pts: np.ndarray, tol: float = TAU_GEOM) -> np.ndarray:
    """Remove near-duplicate rows, keeping the lexicographically smallest
    representative of each cluster."""
    if len(pts) <= 1:
        return pts
    order = np.lexsort(pts.T[::-1])
    pts = pts[order]
    keep = [pts[0]]
    for p in pts[1:]:
        if all(np.max(np.abs(p - q)) > tol for q in keep[-8:]):
            keep.append(p)
    out = np.array(keep)
    # final O(m^2) sweep; survivors are few at desk scale
    mask = np.ones(len(out), dtype=bool)
    for i in range(len(out)):
        if not mask[i]:
            continue
        d = np.max(np.abs(out[i + 1:] - out[i]), axis=1) if i + 1 < len(out) else None
        if d is not None:
            mask[i + 1:] &= d > tol
    return out[mask]


class Halfspace:
    """Closed halfspace {x : <normal, x> <= offset}; normal stored unit length."""

    __slots__ = ("normal", "offset")

    def __init__(self, normal, offset):
        normal = np.asarray(normal, dtype=float)
        nrm = float(np.linalg.norm(normal))
        if nrm <= TAU_GEOM:
            raise DegenerateInputError("halfspace normal must be nonzero")
        self.normal = _frozen(normal / nrm)
        self.offset = float(offset) / nrm

    @property
    def dim(self) -> int:
        return len(self.normal)

    def contains(self, x, tol: float = TAU_GEOM) -> bool:
        return float(self.normal @ np.asarray(x, float)) <= self.offset + tol

    def __repr__(self):
        return f"Halfspace({self.normal.tolist()}, {self.offset})"


def stack_halfspaces(halfspaces) -> tuple[np.ndarray, np.ndarray]:
    """Normalize a list of Halfspace (or an (A, b) pair) into unit-normal
    arrays, dropping exact duplicates."""
    if isinstance(halfspaces, tuple) and len(halfspaces) == 2:
        A = np.asarray(halfspaces[0], dtype=float)
        b = np.asarray(halfspaces[1], dtype=float)
    else:
        hs = list(halfspaces)
        if not hs:
            raise EmptyInputError("no halfspaces")
        A = np.array([h.normal for h in hs], dtype=float)
        b = np.array([h.offset for h in hs], dtype=float)
    norms = np.linalg.norm(A, axis=1)
    if np.any(norms <= TAU_GEOM):
        raise DegenerateInputError("zero normal in halfspace system")
    A = A / norms[:, None]
    b = b / norms
    key = np.round(np.column_stack([A, b]) / (10 * TAU_GEOM))
    _, idx = np.unique(key, axis=0, return_index=True)
    idx.sort()
    return A[idx], b[idx]


class Subspace:
    """Linear or affine subspace given by an orthonormal row basis plus offset.

    ``basis`` has shape (k, n): k orthonormal direction vectors in ambient
    dimension n.  ``offset`` is the anchor point (zero for linear subspaces).
    """

    __slots__ = ("basis", "offset")

    def __init__(self, basis, offset=None):
        basis = np.asarray(basis, dtype=float)
        if basis.ndim == 1:
            basis = basis[None, :]
        n = basis.shape[1]
        if basis.shape[0] > n:
            raise DimensionMismatchError("more basis vectors than ambient dimension")
        gram = basis @ basis.T
        if not np.allclose(gram, np.eye(len(basis)), atol=1e2 * TAU_GEOM):
            raise DegenerateInputError("basis is not orthonormal")
        self.basis = _frozen(basis)
        self.offset = _frozen(np.zeros(n) if offset is None else np.asarray(offset, float))

    @classmethod
    def from_vectors(cls, vectors, offset=None) -> "Subspace":
        """Orthonormalize spanning vectors (QR) into a Subspace."""
        V = np.asarray(vectors, dtype=float)
        if V.ndim == 1:
            V = V[None, :]
        q, r = np.linalg.qr(V.T)
        rank = int(np.sum(np.abs(np.diag(r)) > 1e3 * TAU_GEOM))
        if rank < V.shape[0]:
            raise DegenerateInputError("spanning vectors are linearly dependent")
        return cls(q[:, :rank].T, offset)

    @classmethod
    def span_axes(cls, ambient_dim: int, axes, offset=None) -> "Subspace":
        basis = np.zeros((len(axes), ambient_dim))
        for i, a in enumerate(axes):
            basis[i, a] = 1.0
        return cls(basis, offset)

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[1]

    @property
    def is_linear(self) -> bool:
        return bool(np.max(np.abs(self.offset)) <= TAU_GEOM) if self.offset.size else True

    def to_local(self, points) -> np.ndarray:
        return (np.asarray(points, float) - self.offset) @ self.basis.T

    def to_ambient(self, local_points) -> np.ndarray:
        return np.asarray(local_points, float) @ self.basis + self.offset

    def orthogonal_complement(self) -> "Subspace":
        """Linear complement of the direction span (offset discarded)."""
        n = self.ambient_dim
        _, _, vt = np.linalg.svd(self.basis)
        return Subspace(vt[self.dim:], np.zeros(n))

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim})"


class Polytope:
    """Bounded convex polytope with consistent V- and H-representations.

    Full-dimensional polytopes carry an irredundant facet system ``(A, b)``
    with unit row normals.  Lower-dimensional polytopes carry their affine
    hull explicitly plus a full-dimensional relative polytope in hull
    coordinates; their ambient H-rep is undefined.  The empty polytope is a
    valid value (``is_empty``); intersections are allowed to come out empty
    or degenerate, the convolution module needs those limits.
    """

    __slots__ = ("ambient_dim", "vertices", "A", "b", "affine_hull", "_rel",
                 "_volume", "_triangulation", "_facet_cache")

    def __init__(self, ambient_dim, vertices, A=None, b=None, affine_hull=None, rel=None):
        self.ambient_dim = int(ambient_dim)
        self.vertices = _frozen(np.asarray(vertices, float).reshape(-1, self.ambient_dim))
        self.A = _frozen(A) if A is not None else None
        self.b = _frozen(b) if b is not None else None
        self.affine_hull = affine_hull
        self._rel = rel
        self._volume = None
        self._triangulation = None
        self._facet_cache = None

    # -- construction ------------------------------------------------------

    @classmethod
    def empty(cls, ambient_dim: int) -> "Polytope":
        return cls(ambient_dim, np.zeros((0, ambient_dim)))

    @classmethod
    def from_vertices(cls, points, tol: float = TAU_GEOM) -> "Polytope":
        return convex_hull(points, tol=tol)

    @classmethod
    def from_halfspaces(cls, halfspaces, dim: int | None = None,
                        tol: float = TAU_GEOM) -> "Polytope":
        verts = halfspace_vertices(halfspaces, dim, tol=tol)
        return convex_hull(verts, tol=tol)

    # -- basic state -------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return len(self.vertices) == 0

    @property
    def dim(self) -> int:
        """Affine dimension (-1 for the empty polytope)."""
        if self.is_empty:
            return -1
        if self.affine_hull is not None:
            return self.affine_hull.dim
        return self.ambient_dim

    @property
    def is_full_dim(self) -> bool:
        return not self.is_empty and self.affine_hull is None

    @property
    def halfspaces(self) -> list[Halfspace]:
        if self.A is None:
            raise DegenerateInputError("no ambient H-rep for degenerate polytope")
        return [Halfspace(a, o) for a, o in zip(self.A, self.b)]

    def __repr__(self):
        return (f"Polytope(ambient={self.ambient_dim}, dim={self.dim}, "
                f"nverts={len(self.vertices)})")

    # -- predicates --------------------------------------------------------

    def contains(self, x, tol: float = TAU_GEOM) -> bool:
        x = np.asarray(x, dtype=float)
        if self.is_empty:
            return False
        if self.is_full_dim:
            return bool(np.all(self.A @ x <= self.b + tol))
        local = self.affine_hull.to_local(x)
        back = self.affine_hull.to_ambient(local)
        if np.max(np.abs(back - x)) > 10 * tol:
            return False
        if self.dim == 0:
            return True
        return self._rel.contains(local, tol)

    def support(self, u) -> float:
        if self.is_empty:
            raise EmptyInputError("support of empty polytope")
        return float(np.max(self.vertices @ np.asarray(u, float)))

    def diameter(self) -> float:
        v = self.vertices
        if len(v) < 2:
            return 0.0
        d2 = np.sum((v[:, None, :] - v[None, :, :]) ** 2, axis=-1)
        return float(np.sqrt(d2.max()))

    # -- transforms --------------------------------------------------------

    def translate(self, a) -> "Polytope":
        a = np.asarray(a, dtype=float)
        if self.is_empty:
            return Polytope.empty(self.ambient_dim)
        if self.is_full_dim:
            return Polytope(self.ambient_dim, self.vertices + a,
                            self.A, self.b + self.A @ a)
        return convex_hull(self.vertices + a)

    def scale(self, s: float) -> "Polytope":
        s = float(s)
        if s == 0.0:
            raise DegenerateInputError("zero scale factor")
        if self.is_empty:
            return Polytope.empty(self.ambient_dim)
        if self.is_full_dim:
            A = self.A if s > 0 else -self.A
            return Polytope(self.ambient_dim, self.vertices * s, A, self.b * abs(s))
        return convex_hull(self.vertices * s)

    def negate(self) -> "Polytope":
        return self.scale(-1.0)

    def transform(self, T) -> "Polytope":
        """Image under an invertible linear map (re-hulled)."""
        T = np.asarray(T, dtype=float)
        if self.is_empty:
            return Polytope.empty(T.shape[0])
        return convex_hull(self.vertices @ T.T)

    # -- measures ----------------------------------------------------------

    def volume(self) -> float:
        """Lebesgue measure taken inside the affine hull (cached).

        The empty polytope has volume 0; a single point has relative
        0-dimensional measure 1.
        """
        if self._volume is None:
            self._volume = self._compute_volume()
        return self._volume

    def ambient_volume(self) -> float:
        """Full-dimensional Lebesgue measure; 0 for degenerate polytopes."""
        if not self.is_full_dim:
            return 0.0
        return self.volume()

    def _compute_volume(self) -> float:
        if self.is_empty:
            return 0.0
        if self.dim == 0:
            return 1.0
        if not self.is_full_dim:
            return self._rel.volume()
        if self.ambient_dim == 1:
            return float(self.vertices.max() - self.vertices.min())
        tris = self.triangulation()
        return _simplex_volumes(tris).sum()

    def triangulation(self) -> np.ndarray:
        """Fan triangulation from the vertex centroid, shape (T, n+1, n)."""
        if self._triangulation is None:
            if self.is_empty or not self.is_full_dim:
                raise DegenerateInputError("triangulation needs a full-dimensional polytope")
            self._triangulation = _fan_triangulation(self.vertices)
        return self._triangulation

    def centroid(self) -> np.ndarray:
        """Volume centroid (vertex midpoint for degenerate polytopes)."""
        if self.is_empty:
            raise EmptyInputError("centroid of empty polytope")
        if not self.is_full_dim and self.dim >= 1:
            local = self._rel.centroid()
            return self.affine_hull.to_ambient(local)
        if self.dim == 0:
            return self.vertices[0].copy()
        tris = self.triangulation()
        vols = _simplex_volumes(tris)
        cents = tris.mean(axis=1)
        return (cents * vols[:, None]).sum(axis=0) / vols.sum()

    def radial(self, center, direction) -> float:
        """Distance from an interior point to the boundary along a direction."""
        if not self.is_full_dim:
            raise DegenerateInputError("radial needs a full-dimensional polytope")
        c = np.asarray(center, dtype=float)
        v = np.asarray(direction, dtype=float)
        num = self.b - self.A @ c
        den = self.A @ v
        if np.any(num < -10 * TAU_GEOM):
            raise DegenerateInputError("radial center lies outside the polytope")
        pos = den > TAU_GEOM
        if not np.any(pos):
            raise UnboundedError(v)
        return float(np.min(num[pos] / den[pos]))

    def facet_simplex_data(self) -> tuple[np.ndarray, np.ndarray]:
        """Triangulated facet decomposition: (unit outward normals, areas).

        Rows cover the boundary exactly; coplanar facets may appear split
        into several simplices, which is harmless for Cauchy-type sums.
        """
        if self._facet_cache is None:
            if not self.is_full_dim:
                raise DegenerateInputError("facet data needs a full-dimensional polytope")
            self._facet_cache = _facet_simplices(self.vertices)
        return self._facet_cache

    def sample_uniform(self, count: int, rng: np.random.Generator) -> np.ndarray:
        """Uniform points inside the polytope via the fan triangulation."""
        tris = self.triangulation()
        vols = _simplex_volumes(tris)
        probs = vols / vols.sum()
        idx = rng.choice(len(tris), size=count, p=probs)
        bary = rng.dirichlet(np.ones(self.ambient_dim + 1), size=count)
        return np.einsum("ij,ijk->ik", bary, tris[idx])


# ---------------------------------------------------------------------------
# hull primitives


def _simplex_volumes(tris: np.ndarray) -> np.ndarray:
    edges = tris[:, 1:, :] - tris[:, :1, :]
    n = tris.shape[2]
    return np.abs(np.linalg.det(edges)) / math.factorial(n)


def _ordered_polygon(pts: np.ndarray) -> np.ndarray:
    c = pts.mean(axis=0)
    ang = np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0])
    return pts[np.argsort(ang, kind="stable")]


def polygon_area(pts: np.ndarray) -> float:
    """Shoelace area of a convex vertex set (any input order)."""
    if len(pts) < 3:
        return 0.0
    p = _ordered_polygon(np.asarray(pts, float))
    x, y = p[:, 0], p[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))


def polygon_perimeter(pts: np.ndarray) -> float:
    p = np.asarray(pts, float)
    if len(p) < 2:
        return 0.0
    if len(p) == 2:
        return float(np.linalg.norm(p[1] - p[0]))
    p = _ordered_polygon(p)
    return float(np.linalg.norm(np.roll(p, -1, axis=0) - p, axis=1).sum())


def _qhull(pts: np.ndarray) -> ConvexHull:
    try:
        return ConvexHull(pts)
    except QhullError:
        # joggle as a last resort on nearly-degenerate input
        return ConvexHull(pts, qhull_options="QJ")


def _fan_triangulation(verts: np.ndarray) -> np.ndarray:
    n = verts.shape[1]
    if n == 1:
        return verts[np.argsort(verts[:, 0])][None, :, :]
    if n == 2:
        p = _ordered_polygon(verts)
        c = p.mean(axis=0)
        tris = [np.array([c, p[i], p[(i + 1) % len(p)]]) for i in range(len(p))]
        return np.array(tris)
    qh = _qhull(verts)
    c = verts[qh.vertices].mean(axis=0)
    facets = qh.points[qh.simplices]                      # (S, n, n)
    cones = np.concatenate([np.broadcast_to(c, (len(facets), 1, n)), facets], axis=1)
    return cones


def _facet_simplices(verts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    n = verts.shape[1]
    if n == 2:
        p = _ordered_polygon(verts)
        e = np.roll(p, -1, axis=0) - p
        lengths = np.linalg.norm(e, axis=1)
        keep = lengths > TAU_GEOM
        e, lengths = e[keep], lengths[keep]
        normals = np.column_stack([e[:, 1], -e[:, 0]]) / lengths[:, None]
        return _frozen(normals), _frozen(lengths)
    qh = _qhull(verts)
    normals = qh.equations[:, :n]
    facets = qh.points[qh.simplices]                      # (S, n, n)
    edges = facets[:, 1:, :] - facets[:, :1, :]           # (S, n-1, n)
    grams = np.einsum("sik,sjk->sij", edges, edges)
    areas = np.sqrt(np.maximum(np.linalg.det(grams), 0.0)) / math.factorial(n - 1)
    return _frozen(normals), _frozen(areas)


def hull_volume(pts: np.ndarray) -> float:
    """Volume of the convex hull of raw points; 0 when rank-deficient.

    Fast path for inner loops: the hull provides the facet combinatorics,
    the volume is the fan-triangulation determinant sum.
    """
    pts = np.asarray(pts, dtype=float)
    n = pts.shape[1] if pts.ndim == 2 else 0
    if pts.ndim != 2 or len(pts) <= n:
        return 0.0
    if n == 1:
        return float(pts.max() - pts.min())
    if n == 2:
        return polygon_area(pts)
    try:
        qh = ConvexHull(pts)
    except QhullError:
        return 0.0
    facets = qh.points[qh.simplices]
    c = qh.points[qh.vertices].mean(axis=0)
    edges = facets - c
    return float(np.abs(np.linalg.det(edges)).sum()) / math.factorial(n)


def convex_hull(points, tol: float = TAU_GEOM) -> Polytope:
    """Convex hull as a Polytope: extreme points plus facet system.

    Affinely dependent input produces a lower-dimensional polytope with its
    affine hull recorded (relative interior handled recursively).
    """
    pts = dedup_points(_as_points(points), tol)
    n = pts.shape[1]
    if n > MAX_EXACT_DIM:
        raise UnsupportedDimensionError(f"exact paths support dim <= {MAX_EXACT_DIM}, got {n}")
    if len(pts) == 1:
        hull = Subspace(np.zeros((0, n)), pts[0])
        return Polytope(n, pts, affine_hull=hull,
                        rel=Polytope(0, np.zeros((1, 0))))
    c = pts.mean(axis=0)
    _, s, vt = np.linalg.svd(pts - c, full_matrices=False)
    scale = max(1.0, float(s[0]))
    rank = int(np.sum(s > 1e3 * tol * scale))
    if rank < n:
        hull = Subspace(vt[:rank], c)
        rel = convex_hull(hull.to_local(pts), tol)
        verts = hull.to_ambient(rel.vertices)
        return Polytope(n, verts, affine_hull=hull, rel=rel)
    if n == 1:
        lo, hi = float(pts.min()), float(pts.max())
        return Polytope(1, np.array([[lo], [hi]]),
                        A=np.array([[1.0], [-1.0]]), b=np.array([hi, -lo]))
    qh = _qhull(pts)
    verts = qh.points[qh.vertices]
    if n >= 3:
        verts = verts[np.lexsort(verts.T[::-1])]
    eqs = qh.equations
    key = np.round(eqs / max(tol, 1e-12) / 10.0)
    _, idx = np.unique(key, axis=0, return_index=True)
    eqs = eqs[np.sort(idx)]
    A, b = eqs[:, :n], -eqs[:, n]
    norms = np.linalg.norm(A, axis=1)
    return Polytope(n, verts, A / norms[:, None], b / norms)


# ---------------------------------------------------------------------------
# halfspace intersection


def _basic_solutions(A: np.ndarray, b: np.ndarray, tol: float) -> np.ndarray:
    m, n = A.shape
    if m < n:
        return np.zeros((0, n))
    idx = np.array(list(itertools.combinations(range(m), n)))
    mats = A[idx]
    dets = np.abs(np.linalg.det(mats))
    ok = dets > 1e-10
    if not ok.any():
        return np.zeros((0, n))
    sols = np.linalg.solve(mats[ok], b[idx[ok]])
    feas = np.all(sols @ A.T <= b + tol, axis=1)
    return sols[feas]


def _chebyshev_center(A: np.ndarray, b: np.ndarray):
    m, n = A.shape
    Aub = np.column_stack([A, np.ones(m)])
    c = np.zeros(n + 1)
    c[-1] = -1.0
    res = linprog(c, A_ub=Aub, b_ub=b, bounds=[(None, None)] * n + [(0, None)],
                  method="highs")
    if not res.success:
        return None
    return res.x[:n], float(res.x[n])


def _recession_ray(A: np.ndarray):
    m, n = A.shape
    for i in range(n):
        for sign in (1.0, -1.0):
            c = np.zeros(n)
            c[i] = -sign
            res = linprog(c, A_ub=A, b_ub=np.zeros(m), bounds=[(-1, 1)] * n,
                          method="highs")
            if res.success and -res.fun > 1e-7:
                return res.x
    return None


def halfspace_vertices(halfspaces, dim: int | None = None, *,
                       tol: float = TAU_GEOM,
                       assume_bounded: bool = False) -> np.ndarray:
    """Vertices of a bounded halfspace intersection.

    Enumerate dim-subsets of the hyperplanes, solve the linear systems,
    keep feasible solutions and dedup within ``tol``.  Raises
    ``EmptyIntersectionError`` for infeasible systems and ``UnboundedError``
    (with a certifying feasible ray) for unbounded ones.  With
    ``assume_bounded`` (hot paths on intersections of bounded polytopes) the
    LP certificates are skipped: for a bounded region emptiness is
    equivalent to having no feasible basic solution.
    """
    A, b = stack_halfspaces(halfspaces)
    n = A.shape[1]
    if dim is not None and dim != n:
        raise DimensionMismatchError(f"halfspaces have dim {n}, expected {dim}")
    verts = _basic_solutions(A, b, tol)
    if assume_bounded:
        if len(verts) == 0:
            raise EmptyIntersectionError("empty halfspace intersection")
        return dedup_points(verts, tol)
    if len(verts) == 0:
        feas = _chebyshev_center(A, b)
        if feas is None:
            raise EmptyIntersectionError("empty halfspace intersection")
        ray = _recession_ray(A)
        if ray is not None:
            raise UnboundedError(ray)
        raise EmptyIntersectionError("halfspace intersection has no vertex")
    ray = _recession_ray(A)
    if ray is not None:
        raise UnboundedError(ray)
    return dedup_points(verts, tol)


def volume(P: Polytope) -> float:
    """Volume of ``P`` inside its affine hull (cached on the polytope)."""
    return P.volume()


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    """Minkowski sum, as the hull of pairwise vertex sums."""
    if P.ambient_dim != Q.ambient_dim:
        raise DimensionMismatchError("Minkowski sum needs equal ambient dimensions")
    if P.is_empty or Q.is_empty:
        return Polytope.empty(P.ambient_dim)
    sums = (P.vertices[:, None, :] + Q.vertices[None, :, :]).reshape(-1, P.ambient_dim)
    return convex_hull(sums)


def shifted_halfspaces(K: Polytope, L: Polytope, x) -> tuple[np.ndarray, np.ndarray]:
    """H-rep of K concatenated with the H-rep of x - L."""
    if K.ambient_dim != L.ambient_dim:
        raise DimensionMismatchError("operands have different ambient dimensions")
    if not (K.is_full_dim and L.is_full_dim):
        raise DegenerateInputError("shifted intersection needs full-dimensional operands")
    x = np.asarray(x, dtype=float)
    A = np.vstack([K.A, -L.A])
    b = np.concatenate([K.b, L.b - L.A @ x])
    return A, b


def shifted_intersection(K: Polytope, L: Polytope, x, tol: float = TAU_GEOM) -> Polytope:
    """K ∩ (x - L).  Empty and lower-dimensional results are legal values."""
    A, b = shifted_halfspaces(K, L, x)
    try:
        verts = halfspace_vertices((A, b), tol=tol, assume_bounded=True)
    except EmptyIntersectionError:
        return Polytope.empty(K.ambient_dim)
    return convex_hull(verts, tol)


class ShiftedIntersectionEngine:
    """Repeated K ∩ (x - L) vertex enumeration for a fixed pair (K, L).

    The hyperplane normals do not depend on x, so the basis-subset inverses
    are factored once; each query is a gather plus one batched matmul.
    """

    def __init__(self, K: Polytope, L: Polytope, tol: float = TAU_GEOM):
        if not (K.is_full_dim and L.is_full_dim):
            raise DegenerateInputError("engine needs full-dimensional operands")
        self.tol = tol
        n = K.ambient_dim
        A = np.vstack([K.A, -L.A])
        norms = np.linalg.norm(A, axis=1)
        A = A / norms[:, None]
        self.A = A
        self._bK = K.b / norms[: len(K.b)]
        self._AL = L.A
        self._bL = L.b
        self._normL = norms[len(K.b):]
        m = len(A)
        idx = np.array(list(itertools.combinations(range(m), n)))
        mats = A[idx]
        dets = np.abs(np.linalg.det(mats))
        keep = dets > 1e-10
        self.idx = idx[keep]
        self.inv = np.linalg.inv(mats[keep])
        self.dim = n

    def offsets(self, x) -> np.ndarray:
        bL = (self._bL - self._AL @ np.asarray(x, float)) / self._normL
        return np.concatenate([self._bK, bL])

    def vertices(self, x) -> np.ndarray:
        """Vertices of K ∩ (x - L); empty array when the intersection is empty."""
        b = self.offsets(x)
        sols = np.einsum("sij,sj->si", self.inv, b[self.idx])
        feas = np.all(sols @ self.A.T <= b + self.tol, axis=1)
        pts = sols[feas]
        if len(pts) == 0:
            return pts
        return dedup_points(pts, self.tol)


def project(P: Polytope, E: Subspace) -> Polytope:
    """Orthogonal projection onto a linear subspace, in E's basis coordinates."""
    if P.ambient_dim != E.ambient_dim:
        raise DimensionMismatchError("projection subspace has wrong ambient dimension")
    if not E.is_linear:
        raise DegenerateInputError("projection requires a linear subspace")
    if P.is_empty:
        return Polytope.empty(E.dim)
    return convex_hull(P.vertices @ E.basis.T)


def section(P: Polytope, E: Subspace, tol: float = TAU_GEOM) -> Polytope:
    """Intersection with an affine subspace, in E's own coordinates.

    An empty section is signalled by the empty polytope.
    """
    if P.ambient_dim != E.ambient_dim:
        raise DimensionMismatchError("section subspace has wrong ambient dimension")
    if not P.is_full_dim:
        raise DegenerateInputError("section needs a full-dimensional polytope")
    An = P.A @ E.basis.T
    bn = P.b - P.A @ E.offset
    norms = np.linalg.norm(An, axis=1)
    degenerate = norms <= tol
    if np.any(bn[degenerate] < -tol):
        return Polytope.empty(E.dim)
    An, bn = An[~degenerate], bn[~degenerate]
    if len(An) == 0:
        raise DegenerateInputError("section constraints vanished")
    try:
        verts = halfspace_vertices((An, bn), tol=tol, assume_bounded=True)
    except EmptyIntersectionError:
        return Polytope.empty(E.dim)
    return convex_hull(verts, tol)


def support_function(P: Polytope, u) -> float:
    """h_P(u) = max over vertices of <u, v>."""
    u = np.asarray(u, dtype=float)
    if float(np.linalg.norm(u)) <= TAU_GEOM:
        raise DegenerateInputError("support direction must be nonzero")
    return P.support(u)


# ---------------------------------------------------------------------------
# builtin bodies


def standard_simplex(dim: int) -> Polytope:
    """conv{0, e_1, ..., e_n}."""
    pts = np.vstack([np.zeros(dim), np.eye(dim)])
    return convex_hull(pts)


def cube(dim: int, side: float = 1.0, centered: bool = False) -> Polytope:
    corners = np.array(list(itertools.product([0.0, side], repeat=dim)))
    if centered:
        corners -= side / 2.0
    return convex_hull(corners)


def regular_polygon(sides: int, radius: float = 1.0) -> Polytope:
    if sides < 3:
        raise DegenerateInputError("polygon needs at least 3 sides")
    ang = 2 * np.pi * np.arange(sides) / sides
    return convex_hull(radius * np.column_stack([np.cos(ang), np.sin(ang)]))


def _icosphere_vertices(refinement: int) -> np.ndarray:
    phi = (1 + math.sqrt(5)) / 2
    verts = np.array([
        [-1, phi, 0], [1, phi, 0], [-1, -phi, 0], [1, -phi, 0],
        [0, -1, phi], [0, 1, phi], [0, -1, -phi], [0, 1, -phi],
        [phi, 0, -1], [phi, 0, 1], [-phi, 0, -1], [-phi, 0, 1],
    ], dtype=float)
    verts /= np.linalg.norm(verts, axis=1)[:, None]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = verts.tolist()
    for _ in range(refinement):
        midpoint = {}

        def mid(i, j):
            key = (min(i, j), max(i, j))
            if key not in midpoint:
                p = np.add(verts[i], verts[j]) / 2.0
                p /= np.linalg.norm(p)
                midpoint[key] = len(verts)
                verts.append(p.tolist())
            return midpoint[key]

        new_faces = []
        for i, j, k in faces:
            a, b, c = mid(i, j), mid(j, k), mid(k, i)
            new_faces += [(i, a, c), (j, b, a), (k, c, b), (a, b, c)]
        faces = new_faces
    return np.array(verts)


def ball_approx(dim: int, refinement: int = 2) -> Polytope:
    """Polytopal approximation of the unit ball.

    dim 2: regular (8 * 2**refinement)-gon; dim 3: icosahedron subdivided
    ``refinement`` times, vertices on the sphere.
    """
    if dim == 1:
        return convex_hull([[-1.0], [1.0]])
    if dim == 2:
        return regular_polygon(8 * 2 ** refinement)
    if dim == 3:
        return convex_hull(_icosphere_vertices(refinement))
    raise UnsupportedDimensionError("ball approximation available for dim <= 3")


def random_polytope(dim: int, n_points: int, rng: np.random.Generator,
                    anisotropy: float = 0.5, shift: float = 0.3) -> Polytope:
    """Seeded full-dimensional test body: hull of points on a squashed,
    rotated, shifted sphere.  Well-conditioned by construction."""
    u = rng.standard_normal((n_points, dim))
    u /= np.linalg.norm(u, axis=1)[:, None]
    scales = 1.0 + anisotropy * (rng.random(dim) - 0.5)
    q, _ = np.linalg.qr(rng.standard_normal((dim, dim)))
    pts = (u * scales) @ q.T + shift * (rng.random(dim) - 0.5)
    return convex_hull(pts)
