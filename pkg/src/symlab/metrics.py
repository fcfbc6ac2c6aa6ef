"""Volumes, radii, distances, and inertia of convex bodies.

Everything here is either exact (2D polygon paths, vertex-attained
quantities) or carries an explicit Monte-Carlo stderr. Circumradius is
origin-anchored: R(A) = inf{R > 0 : A ⊂ B(0, R)}, which differs from
the minimal enclosing ball for off-center bodies.
"""

from dataclasses import dataclass
from math import gamma, pi

import numpy as np

from . import _kernels as K
from .bodies import ConvexPolygon, SphereGrid, VertexHull, body_dim, sphere_grid
from .errors import DimensionMismatchError, UnsupportedDimensionError

TWO_PI = 2.0 * pi


@dataclass(frozen=True)
class BallSpec:
    """A centered euclidean ball r*D."""

    dim: int
    radius: float

    def __post_init__(self):
        if self.radius < 0:
            raise ValueError("radius must be nonnegative")


@dataclass(frozen=True)
class MCEstimate:
    """A randomized estimate with its standard error."""

    value: float
    stderr: float

    def __float__(self):
        return self.value


def unit_ball_volume(dim):
    """kappa_d, the volume of the d-dimensional unit ball."""
    return pi ** (dim / 2.0) / gamma(dim / 2.0 + 1.0)


def _is_ball(x):
    return isinstance(x, BallSpec)


def _dim(x):
    return x.dim if _is_ball(x) else body_dim(x)


def _hull_volume(verts, dim):
    from scipy.spatial import ConvexHull, QhullError

    if len(verts) <= dim:
        return 0.0
    try:
        return float(ConvexHull(verts).volume)
    except QhullError:
        return 0.0


def volume(body):
    """d-dimensional Lebesgue measure; exact for polygons and hulls."""
    if _is_ball(body):
        return unit_ball_volume(body.dim) * body.radius**body.dim
    if isinstance(body, ConvexPolygon):
        return 0.0 if body.degenerate else K.polygon_area(body.vertices)
    if body.degenerate:
        return 0.0
    if body.dim == 2:
        return K.polygon_area(body.vertices)
    return _hull_volume(body.vertices, body.dim)


def mean_radius(body, grid=None):
    """L_A, the sigma-average of the support function.

    d=2 uses the exact Cauchy formula L = perimeter / (2 pi) (the
    quadrature limit, but free of grid aliasing, so the Minkowski
    invariance L(B_u A) = L(A) holds to 1e-12); d>=3 uses sphere-grid
    quadrature of the support function.
    """
    if _is_ball(body):
        return body.radius
    d = body_dim(body)
    if d == 2:
        return K.polygon_perimeter(body.vertices) / TWO_PI
    if grid is None:
        grid = sphere_grid(d, 64)
    if grid.dim != d:
        raise DimensionMismatchError(f"grid dim {grid.dim} != body dim {d}")
    return grid.integrate(K.support_values(body.vertices, grid.nodes))


def circumradius(body):
    """Origin-anchored circumradius: max vertex norm."""
    if _is_ball(body):
        return body.radius
    if len(body.vertices) == 0:
        return 0.0
    return float(np.linalg.norm(body.vertices, axis=1).max())


def equivalent_radius(body):
    """Radius r(A) of the centered ball with the same volume as A."""
    d = _dim(body)
    return (volume(body) / unit_ball_volume(d)) ** (1.0 / d)


def _support_on(x, dirs):
    if _is_ball(x):
        return np.full(len(dirs), x.radius)
    return K.support_values(x.vertices, dirs)


def _hausdorff_polygons_exact(VA, VB):
    """sup |f_A - f_B| over the circle, exact.

    Between consecutive support breakpoints (edge-normal angles of
    either polygon) the difference is <v_A - v_B, theta> for fixed
    active vertices, so the max lies at a breakpoint or at the angle of
    +-(v_A - v_B).
    """
    phiA = np.mod(K.support_arc_angles(VA), TWO_PI)
    phiB = np.mod(K.support_arc_angles(VB), TWO_PI)
    brk = np.sort(np.concatenate([phiA, phiB]))
    best = 0.0
    for lo in range(0, len(brk), 1024):
        t0 = brk[lo : lo + 1024]
        hi = lo + len(t0)
        t1 = brk[hi] if hi < len(brk) else brk[0] + TWO_PI
        t1 = np.concatenate([brk[lo + 1 : hi], [t1]])
        tm = 0.5 * (t0 + t1)
        # active vertices chosen by argmax at the interval midpoint, which
        # is robust to floating-point jitter in the breakpoint angles
        dirs = np.column_stack([np.cos(tm), np.sin(tm)])
        w = VA[np.argmax(dirs @ VA.T, axis=1)] - VB[np.argmax(dirs @ VB.T, axis=1)]
        for t in (t0, t1):
            v = np.abs(w[:, 0] * np.cos(t) + w[:, 1] * np.sin(t))
            best = max(best, float(v.max()))
        aw = np.mod(np.arctan2(w[:, 1], w[:, 0]), TWO_PI)
        nw = np.hypot(w[:, 0], w[:, 1])
        for shift in (0.0, pi):
            a = np.mod(aw + shift, TWO_PI)
            # the interval [t0, t1) may wrap past 2 pi
            inside = ((a >= t0) & (a < t1)) | ((a + TWO_PI >= t0) & (a + TWO_PI < t1))
            if inside.any():
                best = max(best, float(nw[inside].max()))
    return best


def hausdorff(a, b, grid=None):
    """Hausdorff distance d_H(A, B) = ||f_A - f_B||_inf (convex inputs).

    Exact for 2D polygon-vs-ball and polygon-vs-polygon; grid-limited
    sup of |f_A - f_B| otherwise.
    """
    da, db = _dim(a), _dim(b)
    if da != db:
        raise DimensionMismatchError(f"dims {da} != {db}")
    if _is_ball(a) and _is_ball(b):
        return abs(a.radius - b.radius)
    if da == 2:
        if _is_ball(a):
            return K.disk_hausdorff(b.vertices, a.radius)
        if _is_ball(b):
            return K.disk_hausdorff(a.vertices, b.radius)
        if len(a.vertices) >= 3 and len(b.vertices) >= 3:
            return _hausdorff_polygons_exact(a.vertices, b.vertices)
    if grid is None:
        grid = sphere_grid(da, 256 if da == 2 else 64)
    if grid.dim != da:
        raise DimensionMismatchError(f"grid dim {grid.dim} != body dim {da}")
    fa = _support_on(a, grid.nodes)
    fb = _support_on(b, grid.nodes)
    return float(np.abs(fa - fb).max())


def _membership(body):
    """Vectorized indicator of a convex body (points (m, d) -> bool)."""
    if _is_ball(body):
        r = body.radius
        return lambda pts: (pts * pts).sum(axis=1) <= r * r
    if body_dim(body) == 2:
        V = body.vertices
        e = np.roll(V, -1, axis=0) - V

        def inside(pts):
            rel0 = pts[:, None, 0] - V[None, :, 0]
            rel1 = pts[:, None, 1] - V[None, :, 1]
            cr = e[None, :, 0] * rel1 - e[None, :, 1] * rel0
            return (cr >= 0.0).all(axis=1)

        return inside
    from scipy.spatial import ConvexHull

    eq = ConvexHull(body.vertices).equations

    def inside(pts):
        return (pts @ eq[:, :-1].T + eq[:, -1] <= 1e-12).all(axis=1)

    return inside


def nikodym_mc(a, b, rng, samples=200_000):
    """Monte-Carlo symmetric-difference volume with stderr."""
    d = _dim(a)
    R = max(circumradius(a), circumradius(b))
    box_vol = (2.0 * R) ** d
    pts = rng.uniform(-R, R, size=(samples, d))
    ina = _membership(a)(pts)
    inb = _membership(b)(pts)
    hits = ina ^ inb
    p = hits.mean()
    return MCEstimate(box_vol * p, box_vol * np.sqrt(p * (1.0 - p) / samples))


def nikodym(a, b, rng=None, samples=200_000):
    """Nikodym distance, the volume of the symmetric difference.

    2D paths are exact (circle clipping for balls, polygon clipping for
    polygon pairs); d>=3 falls back to Monte-Carlo membership and
    returns an MCEstimate carrying its stderr.
    """
    da, db = _dim(a), _dim(b)
    if da != db:
        raise DimensionMismatchError(f"dims {da} != {db}")
    if _is_ball(a) and _is_ball(b):
        return abs(volume(a) - volume(b))
    if da == 2:
        if _is_ball(a) or _is_ball(b):
            ball, poly = (a, b) if _is_ball(a) else (b, a)
            overlap = K.disk_overlap_area(poly.vertices, ball.radius)
            return volume(poly) + volume(ball) - 2.0 * overlap
        from shapely.geometry import Polygon as ShapelyPolygon

        pa = ShapelyPolygon(a.vertices)
        pb = ShapelyPolygon(b.vertices)
        return volume(a) + volume(b) - 2.0 * pa.intersection(pb).area
    if rng is None:
        raise ValueError("d>=3 Nikodym is Monte-Carlo; pass an rng")
    return nikodym_mc(a, b, rng, samples)


def inertia(body):
    """Moment of inertia I(A) = integral of |z|^2 over A, exact.

    d=2 uses signed origin fans; d=3 tetrahedralizes from the centroid
    with the closed-form simplex second moment.
    """
    if _is_ball(body):
        r, d = body.radius, body.dim
        if d == 2:
            return pi * r**4 / 2.0
        if d == 3:
            return 4.0 * pi * r**5 / 5.0
        raise UnsupportedDimensionError("inertia supports dim 2 and 3")
    d = body_dim(body)
    if d == 2:
        if body.degenerate:
            return 0.0
        return K.polygon_inertia(body.vertices)
    if d != 3:
        raise UnsupportedDimensionError("inertia supports dim 2 and 3")
    if body.degenerate:
        return 0.0
    from scipy.spatial import ConvexHull

    V = body.vertices
    hull = ConvexHull(V)
    g = V.mean(axis=0)
    total = 0.0
    for simplex in hull.simplices:
        tri = V[simplex]
        a, b, c = tri - g
        vol6 = np.dot(np.cross(a, b), c)
        vs = np.vstack([g, tri])
        q = (vs * vs).sum() + (vs.sum(axis=0) ** 2).sum()
        total += abs(vol6) / 6.0 * q / 20.0
    return float(total)


def support_l2_sq(body):
    """Exact sigma-mean of f_A^2 for a 2D polygon."""
    if body_dim(body) != 2:
        raise UnsupportedDimensionError("exact support L2 norm is 2D only")
    return K.support_l2_sq(body.vertices)


def centered_l2_sq(body):
    """Exact ||h_A||_2^2 = mean(f^2) - L^2 for a 2D polygon."""
    L = mean_radius(body)
    return support_l2_sq(body) - L * L
