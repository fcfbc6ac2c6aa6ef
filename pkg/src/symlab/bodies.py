"""Convex body representations, support evaluation, reflection, sphere grids.

Two representations are used on purpose: `ConvexPolygon` for exact 2D
work and `VertexHull` for general dimension. Conversions are explicit.
All types are immutable values after construction.
"""

import json
from dataclasses import dataclass, field, replace

import numpy as np

from . import _kernels as K
from .errors import (
    DimensionMismatchError,
    EmptyInputError,
    NotUnitError,
    UnsupportedDimensionError,
)

UNIT_TOL = 1e-12
COORD_TOL = 1e-12


def unit(v):
    """Normalize a vector to unit length."""
    v = np.asarray(v, dtype=np.float64)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise NotUnitError("zero vector has no direction")
    return v / n


def require_direction(u, dim=None):
    """Validate a unit direction vector (norm within 1e-12, d >= 2)."""
    u = np.asarray(u, dtype=np.float64)
    if u.ndim != 1 or u.size < 2:
        raise NotUnitError(f"direction must be a vector of dim >= 2, got shape {u.shape}")
    if dim is not None and u.size != dim:
        raise DimensionMismatchError(f"direction dim {u.size} != body dim {dim}")
    if abs(np.linalg.norm(u) - 1.0) > UNIT_TOL:
        raise NotUnitError(f"|u| = {np.linalg.norm(u)!r} is not 1 within {UNIT_TOL}")
    return u


def _frozen_array(a):
    a = np.ascontiguousarray(a, dtype=np.float64)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class ConvexPolygon:
    """A 2D convex body as a CCW vertex ring with canonical start.

    `degenerate` marks segments/points (fewer than 3 hull vertices);
    those keep their points but bound no area. `prune_error` is the
    accumulated Hausdorff perturbation from any vertex-budget pruning
    applied while producing this body (0 for exact constructions).
    """

    vertices: np.ndarray
    degenerate: bool = False
    prune_error: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen_array(self.vertices))

    @property
    def dim(self):
        return 2

    def scaled(self, r):
        return replace(self, vertices=self.vertices * r, prune_error=self.prune_error * r)


@dataclass(frozen=True)
class VertexHull:
    """A convex body in R^d stored as the vertex set of its hull."""

    dim: int
    vertices: np.ndarray
    degenerate: bool = False
    prune_error: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "vertices", _frozen_array(self.vertices))

    def scaled(self, r):
        return replace(self, vertices=self.vertices * r, prune_error=self.prune_error * r)


BodyRep = (ConvexPolygon, VertexHull)


def _dedupe(points, tol=COORD_TOL):
    """Order-preserving removal of points closer than tol to a kept one."""
    points = np.asarray(points, dtype=np.float64)
    out = [points[0]]
    for p in points[1:]:
        kept = np.array(out)
        if np.min(np.linalg.norm(kept - p, axis=1)) > tol:
            out.append(p)
    return np.array(out)


def _monotone_chain(points):
    """Andrew's monotone chain; strictly convex CCW hull, collinear pruned."""
    pts = sorted(map(tuple, points))
    if len(pts) == 1:
        return np.array(pts)

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    def half(seq):
        h = []
        for p in seq:
            while len(h) >= 2 and cross(h[-2], h[-1], p) <= 0.0:
                h.pop()
            h.append(p)
        return h

    lower = half(pts)
    upper = half(reversed(pts))
    return np.array(lower[:-1] + upper[:-1])


def canonical_ring(ring):
    """Rotate a CCW vertex ring to start at the lexicographic minimum."""
    ring = np.asarray(ring, dtype=np.float64)
    i = np.lexsort((ring[:, 1], ring[:, 0]))[0]
    return np.roll(ring, -i, axis=0)


def polygon_from_ring(ring, prune_error=0.0):
    """Wrap an already-convex CCW ring (operator output) as a polygon."""
    ring = K.prune_collinear(np.asarray(ring, dtype=np.float64))
    if len(ring) < 3:
        return ConvexPolygon(ring, degenerate=True, prune_error=prune_error)
    return ConvexPolygon(canonical_ring(ring), prune_error=prune_error)


def make_polygon(points):
    """Convex hull of 2D points as a canonical CCW polygon.

    Interior and collinear points are pruned; the ring starts at the
    lexicographically smallest vertex so equal bodies compare equal.
    Hulls with fewer than 3 vertices come back flagged degenerate.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.size == 0:
        raise EmptyInputError("make_polygon needs at least one point")
    if points.ndim != 2 or points.shape[1] != 2:
        raise DimensionMismatchError(f"expected (n, 2) points, got {points.shape}")
    points = _dedupe(points)
    hull = _monotone_chain(points)
    if len(hull) < 3:
        return ConvexPolygon(canonical_ring(hull) if len(hull) > 1 else hull, degenerate=True)
    return ConvexPolygon(canonical_ring(hull))


def _lp_vertex_mask(points):
    """Vertex test by linear programming, for dim > 3."""
    from scipy.optimize import linprog

    pts = np.asarray(points, dtype=np.float64)
    n, d = pts.shape
    mask = np.zeros(n, dtype=bool)
    for i in range(n):
        others = np.delete(pts, i, axis=0)
        if len(others) == 0:
            mask[i] = True
            continue
        # is pts[i] a convex combination of the others?
        A_eq = np.vstack([others.T, np.ones(len(others))])
        b_eq = np.concatenate([pts[i], [1.0]])
        res = linprog(np.zeros(len(others)), A_eq=A_eq, b_eq=b_eq, bounds=(0, None), method="highs")
        mask[i] = not res.success
    return mask


def make_hull(dim, points):
    """Vertex hull of d-dimensional points with interior points pruned."""
    points = np.asarray(points, dtype=np.float64)
    if points.size == 0:
        raise EmptyInputError("make_hull needs at least one point")
    if points.ndim != 2 or points.shape[1] != dim:
        raise DimensionMismatchError(f"expected (n, {dim}) points, got {points.shape}")
    if dim < 2:
        raise UnsupportedDimensionError("dim must be >= 2")
    if dim == 2:
        poly = make_polygon(points)
        return VertexHull(2, poly.vertices, degenerate=poly.degenerate)
    points = np.unique(points, axis=0)
    if dim == 3:
        from scipy.spatial import ConvexHull, QhullError

        if len(points) <= dim:
            return VertexHull(dim, points, degenerate=True)
        try:
            hull = ConvexHull(points)
        except QhullError:
            return VertexHull(dim, points, degenerate=True)
        return VertexHull(dim, points[np.sort(hull.vertices)])
    mask = _lp_vertex_mask(points)
    return VertexHull(dim, points[mask], degenerate=mask.sum() <= dim)


def body_dim(body):
    return body.dim if isinstance(body, ConvexPolygon) else body.dim


def support_eval(body, theta):
    """Support function sup_{x in A} <x, theta>; exact for vertex bodies."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape[-1] != body_dim(body):
        raise DimensionMismatchError(
            f"direction dim {theta.shape[-1]} != body dim {body_dim(body)}"
        )
    vals = K.support_values(body.vertices, theta)
    return float(vals) if theta.ndim == 1 else vals


def reflect_vector(x, u):
    """Orthogonal reflection through the hyperplane orthogonal to u."""
    x = np.asarray(x, dtype=np.float64)
    return x - 2.0 * (x @ u)[..., None] * u


def reflect_body(body, u):
    """Vertex-wise reflection of a body through u-perp; an involution."""
    u = require_direction(u, body_dim(body))
    verts = reflect_vector(body.vertices, u)
    if isinstance(body, ConvexPolygon):
        if body.degenerate:
            return replace(body, vertices=verts)
        # reflection reverses orientation; restore CCW and canonicalize
        return replace(body, vertices=canonical_ring(verts[::-1]))
    return replace(body, vertices=verts)


@dataclass(frozen=True)
class SphereGrid:
    """Quadrature nodes/weights discretizing the Haar probability measure.

    d=2: N equally spaced angles, uniform weights (trig-exact below
    degree N). d=3: product Gauss-Legendre (polar) x uniform (azimuth).
    """

    dim: int
    nodes: np.ndarray
    weights: np.ndarray
    k_exact: int
    angles: np.ndarray = None  # d=2 convenience: node angles

    def __post_init__(self):
        object.__setattr__(self, "nodes", _frozen_array(self.nodes))
        object.__setattr__(self, "weights", _frozen_array(self.weights))
        if self.angles is not None:
            object.__setattr__(self, "angles", _frozen_array(self.angles))

    def integrate(self, values):
        return float(np.dot(self.weights, values))


def sphere_grid(dim, resolution):
    """Build a sphere quadrature grid exact on harmonics up to k_exact."""
    if resolution < 8:
        raise ValueError("resolution must be >= 8")
    if dim == 2:
        t = np.arange(resolution) * (2.0 * np.pi / resolution)
        nodes = np.column_stack([np.cos(t), np.sin(t)])
        w = np.full(resolution, 1.0 / resolution)
        return SphereGrid(2, nodes, w, k_exact=resolution - 1, angles=t)
    if dim == 3:
        n_polar = max(resolution // 2, 4)
        n_az = resolution
        x, gw = np.polynomial.legendre.leggauss(n_polar)
        phi = np.arange(n_az) * (2.0 * np.pi / n_az)
        sin_t = np.sqrt(1.0 - x**2)
        nodes = np.empty((n_polar * n_az, 3))
        nodes[:, 0] = np.outer(sin_t, np.cos(phi)).ravel()
        nodes[:, 1] = np.outer(sin_t, np.sin(phi)).ravel()
        nodes[:, 2] = np.repeat(x, n_az)
        w = np.repeat(gw / 2.0, n_az) / n_az
        k_exact = min(2 * n_polar - 1, n_az - 1)
        return SphereGrid(3, nodes, w, k_exact=k_exact)
    raise UnsupportedDimensionError(f"sphere_grid supports dim 2 and 3, got {dim}")


@dataclass(frozen=True)
class SupportProfile:
    """Support-function samples of a body on a sphere grid."""

    grid: SphereGrid
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))


def support_profile(body, grid):
    if grid.dim != body_dim(body):
        raise DimensionMismatchError(f"grid dim {grid.dim} != body dim {body_dim(body)}")
    return SupportProfile(grid, K.support_values(body.vertices, grid.nodes))


def body_to_json(body):
    """Serialize to {"dim": d, "vertices": [[...], ...]}."""
    return json.dumps(
        {"dim": body_dim(body), "vertices": [[float(c) for c in v] for v in body.vertices]}
    )


def body_from_json(text):
    obj = json.loads(text)
    dim = int(obj["dim"])
    pts = np.asarray(obj["vertices"], dtype=np.float64)
    if dim == 2:
        return make_polygon(pts)
    return make_hull(dim, pts)
