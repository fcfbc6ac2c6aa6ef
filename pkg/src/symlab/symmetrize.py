"""Steiner and Minkowski symmetrization operators and iterated runs.

Both operators act on vertex-represented convex bodies. The 2D paths
are exact; 3D Steiner is chord-sampled with its Monte-Carlo volume
error surfaced. Iterated application records metrics per step against
the limit ball (equivalent radius for Steiner, mean radius for
Minkowski) rather than retaining bodies, with optional snapshots.
"""

import io
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import _kernels as K
from .bodies import (
    ConvexPolygon,
    VertexHull,
    body_dim,
    canonical_ring,
    make_hull,
    make_polygon,
    polygon_from_ring,
    reflect_body,
    require_direction,
    sphere_grid,
)
from .errors import (
    TrajectoryAbortedError,
    UnsupportedDimensionError,
    VertexBudgetExceededError,
)
from .metrics import (
    BallSpec,
    circumradius,
    equivalent_radius,
    hausdorff,
    inertia,
    mean_radius,
    nikodym,
    volume,
)

DEFAULT_VERTEX_BUDGET = 4096


class OperatorKind(Enum):
    STEINER = "steiner"
    MINKOWSKI = "minkowski"


def _as_polygon(body):
    if isinstance(body, ConvexPolygon):
        return body, False
    return ConvexPolygon(body.vertices, degenerate=body.degenerate,
                         prune_error=body.prune_error), True


def _back(poly, was_hull):
    if not was_hull:
        return poly
    return VertexHull(2, poly.vertices, degenerate=poly.degenerate,
                      prune_error=poly.prune_error)


def prune_polygon(poly, max_vertices, preserve="area"):
    """Reduce a polygon to at most max_vertices vertices.

    Vertices are removed greedily by smallest support coverage (the
    perpendicular sagitta their removal loses), then the result is
    rescaled about the origin so the conserved quantity of the calling
    operator (`area` or `perimeter`) is restored exactly. The induced
    Hausdorff perturbation is accumulated in `prune_error`.
    """
    V = poly.vertices
    if len(V) <= max_vertices or poly.degenerate:
        return poly
    acc = 0.0
    while len(V) > max_vertices:
        a = np.roll(V, 1, axis=0)
        c = np.roll(V, -1, axis=0)
        e = c - a
        ln = np.hypot(e[:, 0], e[:, 1])
        sag = np.abs(e[:, 0] * (V[:, 1] - a[:, 1]) - e[:, 1] * (V[:, 0] - a[:, 0]))
        sag /= np.where(ln > 0.0, ln, 1.0)
        # greedily drop the smallest-coverage vertices, never two
        # adjacent in the same pass: each surviving edge then spans at
        # most one removed vertex, so the pass's Hausdorff perturbation
        # is exactly the largest dropped sagitta
        order = np.argsort(sag, kind="stable")
        n = len(V)
        need = n - max_vertices
        dead = np.zeros(n, dtype=bool)
        taken = 0
        for i in order:
            if dead[(i - 1) % n] or dead[(i + 1) % n]:
                continue
            dead[i] = True
            taken += 1
            if taken >= need:
                break
        if taken == 0:
            break
        acc += float(sag[dead].max())
        V = V[~dead]
    W = V
    V0 = poly.vertices
    if preserve == "area":
        a0, a1 = K.polygon_area(V0), K.polygon_area(W)
        s = np.sqrt(a0 / a1) if a1 > 0.0 else 1.0
    elif preserve == "perimeter":
        p0, p1 = K.polygon_perimeter(V0), K.polygon_perimeter(W)
        s = p0 / p1 if p1 > 0.0 else 1.0
    else:
        raise ValueError(f"unknown preserve mode {preserve!r}")
    rmax = float(np.linalg.norm(W, axis=1).max())
    total = poly.prune_error + acc * s + abs(s - 1.0) * rmax
    return ConvexPolygon(canonical_ring(W * s), prune_error=total)


def steiner_2d(poly, u):
    """Exact Steiner symmetral of a 2D polygon along chord direction u.

    Every chord parallel to u is recentered on the line through the
    origin orthogonal to u; area is preserved to machine precision.
    """
    poly, was_hull = _as_polygon(poly)
    u = require_direction(u, 2)
    if poly.degenerate:
        verts = poly.vertices - np.outer(poly.vertices @ u, u)
        return _back(ConvexPolygon(verts, degenerate=True,
                                   prune_error=poly.prune_error), was_hull)
    ring = K.steiner_symmetral(poly.vertices, u[0], u[1])
    return _back(polygon_from_ring(ring, prune_error=poly.prune_error), was_hull)


def _orthonormal_completion(u):
    """Orthonormal basis (3x3) whose last column is u, via Householder."""
    d = len(u)
    e = np.zeros(d)
    e[-1] = 1.0
    w = u - e
    nw = np.linalg.norm(w)
    if nw < 1e-14:
        return np.eye(d)
    w /= nw
    return np.eye(d) - 2.0 * np.outer(w, w)


def steiner_sampled(hull, u, m=2000, return_volume_estimate=False):
    """Chord-sampled Steiner symmetral of a 3D hull.

    Samples m chord abscissae in the shadow polygon (projection of the
    hull onto the plane orthogonal to u: all projected vertices plus a
    regular grid clipped to the shadow), intersects each vertical line
    with the hull exactly via its facet halfspaces, and hulls the
    recentered chord endpoints. With return_volume_estimate, also
    returns the chord-average volume estimate (vol within O(m^-1/2)).
    """
    if body_dim(hull) != 3:
        raise UnsupportedDimensionError("steiner_sampled is 3D only")
    u = require_direction(u, 3)
    if m < 100:
        raise ValueError("need at least 100 sample chords")
    R = _orthonormal_completion(u)
    W = hull.vertices @ R  # last coordinate runs along u
    shadow = make_polygon(W[:, :2])
    from scipy.spatial import ConvexHull

    eq = ConvexHull(W).equations  # rows (a, b): a.x + b <= 0
    a12 = eq[:, :2]
    a3 = eq[:, 2]
    off = eq[:, 3]

    pts2 = [shadow.vertices]
    lo2 = shadow.vertices.min(axis=0)
    hi2 = shadow.vertices.max(axis=0)
    normals = _shadow_normals(shadow)
    h = K.support_values(shadow.vertices, normals)
    k = max(int(np.ceil(np.sqrt(2.0 * m))), 4)
    while True:
        gx = np.linspace(lo2[0], hi2[0], k)
        gy = np.linspace(lo2[1], hi2[1], k)
        G = np.column_stack([np.repeat(gx, k), np.tile(gy, k)])
        inside = (G @ normals.T <= h[None, :] + 1e-12).all(axis=1)
        G = G[inside]
        if len(G) + len(shadow.vertices) >= m or k > 400:
            pts2.append(G)
            break
        k = int(k * 1.5)
    P = np.concatenate(pts2, axis=0)

    rhs = -(P @ a12.T) - off[None, :]  # constraint a3 * z <= rhs
    pos = a3 > 1e-14
    neg = a3 < -1e-14
    hi = np.min(rhs[:, pos] / a3[None, pos], axis=1) if pos.any() else np.full(len(P), np.inf)
    lo = np.max(rhs[:, neg] / a3[None, neg], axis=1) if neg.any() else np.full(len(P), -np.inf)
    # side constraints (a3 ~ 0) can exclude boundary-noise points entirely
    side = ~pos & ~neg
    ok = (hi >= lo)
    if side.any():
        ok &= (rhs[:, side] >= -1e-9).all(axis=1)
    half = 0.5 * np.maximum(hi[ok] - lo[ok], 0.0)
    Pok = P[ok]
    top = np.column_stack([Pok, half])
    bot = np.column_stack([Pok, -half])
    out = make_hull(3, np.concatenate([top, bot], axis=0) @ R.T)
    if not return_volume_estimate:
        return out
    area = K.polygon_area(shadow.vertices)
    chords = 2.0 * half
    vol_est = area * float(chords.mean())
    stderr = area * float(chords.std(ddof=1) / np.sqrt(len(chords)))
    return out, (vol_est, stderr)


def _shadow_normals(poly):
    V = poly.vertices
    e = np.roll(V, -1, axis=0) - V
    n = np.column_stack([e[:, 1], -e[:, 0]])
    ln = np.linalg.norm(n, axis=1, keepdims=True)
    return n / np.where(ln > 0.0, ln, 1.0)


def minkowski(body, u, max_vertices=DEFAULT_VERTEX_BUDGET, on_overflow="prune"):
    """Minkowski symmetral: the half-sum of the body and its reflection.

    Support functions average, f = (f_A + f_{reflected A}) / 2, so the
    mean radius is invariant. 2D uses the linear-time convex edge-merge
    sum; d>=3 hulls the pairwise vertex half-sums. When the hull would
    exceed max_vertices, it is pruned (on_overflow="prune", with
    prune_error reporting) or VertexBudgetExceededError is raised
    (on_overflow="raise").
    """
    d = body_dim(body)
    u = require_direction(u, d)
    refl = reflect_body(body, u)
    if d == 2:
        poly, was_hull = _as_polygon(body)
        rpoly, _ = _as_polygon(refl)
        if poly.degenerate or len(poly.vertices) < 3:
            pts = 0.5 * (poly.vertices[:, None, :] + rpoly.vertices[None, :, :])
            out = make_polygon(pts.reshape(-1, 2))
            out = ConvexPolygon(out.vertices, degenerate=out.degenerate,
                                prune_error=poly.prune_error)
        else:
            ring = 0.5 * K.convex_minkowski_sum(poly.vertices, rpoly.vertices)
            out = polygon_from_ring(ring, prune_error=poly.prune_error)
        if len(out.vertices) > max_vertices:
            if on_overflow == "raise":
                raise VertexBudgetExceededError(
                    f"{len(out.vertices)} vertices > budget {max_vertices}")
            out = prune_polygon(out, max_vertices, preserve="perimeter")
        return _back(out, was_hull)
    pts = 0.5 * (body.vertices[:, None, :] + refl.vertices[None, :, :])
    out = make_hull(d, pts.reshape(-1, d))
    if len(out.vertices) > max_vertices:
        if on_overflow == "raise":
            raise VertexBudgetExceededError(
                f"{len(out.vertices)} vertices > budget {max_vertices}")
        # d>=3 pruning: keep the max_vertices vertices greedily farthest
        # in support coverage (largest norm first is a crude but
        # symmetric proxy; exact budget control matters, tightness less)
        keep = np.argsort(-np.linalg.norm(out.vertices, axis=1))[:max_vertices]
        sub = make_hull(d, out.vertices[np.sort(keep)])
        err = hausdorff(out, sub)
        out = VertexHull(d, sub.vertices, degenerate=sub.degenerate,
                         prune_error=body.prune_error + err)
    return out


def apply_operator(body, u, op, max_vertices=DEFAULT_VERTEX_BUDGET,
                   chords=2000, on_overflow="prune"):
    """One symmetrization step with the vertex budget enforced."""
    if op is OperatorKind.MINKOWSKI:
        return minkowski(body, u, max_vertices=max_vertices, on_overflow=on_overflow)
    d = body_dim(body)
    if d == 2:
        out = steiner_2d(body, u)
        poly, was_hull = _as_polygon(out)
        if len(poly.vertices) > max_vertices:
            if on_overflow == "raise":
                raise VertexBudgetExceededError(
                    f"{len(poly.vertices)} vertices > budget {max_vertices}")
            poly = prune_polygon(poly, max_vertices, preserve="area")
        return _back(poly, was_hull)
    if d == 3:
        return steiner_sampled(body, u, m=chords)
    raise UnsupportedDimensionError("Steiner symmetrization supports dim 2 and 3")


@dataclass
class Trajectory:
    """Per-step metrics of an iterated symmetrization run.

    Row 0 is the initial body (direction all-zero); row n >= 1 records
    the body after applying direction n. Distances are measured to the
    centered limit ball: radius r(A) for Steiner, L(A) for Minkowski.
    """

    operator: OperatorKind
    dim: int
    limit_radius: float
    directions: np.ndarray  # (N+1, dim); row 0 is zero
    mean_radius: np.ndarray
    volume: np.ndarray
    circumradius: np.ndarray
    hausdorff: np.ndarray
    nikodym: np.ndarray
    inertia: np.ndarray
    nikodym_stderr: np.ndarray = None
    prune_error: np.ndarray = None  # accumulated budget-pruning bound per step
    snapshots: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.mean_radius)

    @property
    def n(self):
        return np.arange(len(self))

    def to_csv(self, path_or_file):
        cols = [self.n.astype(np.float64)]
        cols += [self.directions[:, j] for j in range(self.dim)]
        cols += [self.mean_radius, self.volume, self.circumradius,
                 self.hausdorff, self.nikodym, self.inertia]
        data = np.column_stack(cols)
        ucols = ["ux", "uy", "uz"][: self.dim]
        header = ",".join(["n"] + ucols + ["L", "vol", "R", "dH", "dN", "I"])
        if hasattr(path_or_file, "write"):
            np.savetxt(path_or_file, data, fmt="%.17g", delimiter=",",
                       header=header, comments="")
        else:
            with open(path_or_file, "w") as fh:
                np.savetxt(fh, data, fmt="%.17g", delimiter=",",
                           header=header, comments="")

    @classmethod
    def from_csv(cls, path_or_file, operator=None, limit_radius=np.nan):
        if hasattr(path_or_file, "read"):
            text = path_or_file.read()
        else:
            with open(path_or_file) as fh:
                text = fh.read()
        lines = text.strip().splitlines()
        names = lines[0].split(",")
        dim = sum(1 for c in names if c in ("ux", "uy", "uz"))
        data = np.loadtxt(io.StringIO("\n".join(lines[1:])), delimiter=",", ndmin=2)
        cols = {name: data[:, j] for j, name in enumerate(names)}
        return cls(
            operator=operator,
            dim=dim,
            limit_radius=limit_radius,
            directions=np.column_stack([cols[c] for c in ("ux", "uy", "uz")[:dim]]),
            mean_radius=cols["L"],
            volume=cols["vol"],
            circumradius=cols["R"],
            hausdorff=cols["dH"],
            nikodym=cols["dN"],
            inertia=cols["I"],
        )


def iterate(body, seq, op, grid=None, max_vertices=DEFAULT_VERTEX_BUDGET,
            chords=2000, snapshot_every=None, rng=None, nikodym_samples=20_000,
            start_index=0):
    """Apply a direction sequence left-to-right, recording metrics.

    `seq` is an (N, d) array or list of unit directions; `start_index`
    shifts the recorded step indices (to realize runs started at step
    k). Metrics at each step are computed against the limit ball; in
    d=3 the Nikodym column is Monte-Carlo (pass rng; stderr recorded in
    nikodym_stderr). Failures mid-run raise TrajectoryAbortedError with
    the failing step index.
    """
    seq = np.atleast_2d(np.asarray(seq, dtype=np.float64))
    d = body_dim(body)
    if grid is None and d >= 3:
        grid = sphere_grid(d, 64)
    if d >= 3 and rng is None:
        rng = np.random.default_rng(np.random.Philox(key=0))
    if op is OperatorKind.STEINER:
        limit_radius = equivalent_radius(body)
    else:
        limit_radius = mean_radius(body, grid)
    ball = BallSpec(d, limit_radius)

    n_steps = len(seq)
    dirs = np.zeros((n_steps + 1, d))
    dirs[1:] = seq
    L = np.empty(n_steps + 1)
    vol = np.empty(n_steps + 1)
    R = np.empty(n_steps + 1)
    dH = np.empty(n_steps + 1)
    dN = np.empty(n_steps + 1)
    dN_se = np.full(n_steps + 1, np.nan)
    I = np.empty(n_steps + 1)
    perr = np.zeros(n_steps + 1)
    snapshots = {}

    def record(i, b):
        L[i] = mean_radius(b, grid)
        vol[i] = volume(b)
        R[i] = circumradius(b)
        dH[i] = hausdorff(b, ball, grid)
        dn = nikodym(b, ball, rng=rng, samples=nikodym_samples)
        if hasattr(dn, "stderr"):
            dN[i], dN_se[i] = dn.value, dn.stderr
        else:
            dN[i] = dn
        I[i] = inertia(b)
        perr[i] = b.prune_error
        if snapshot_every and i % snapshot_every == 0:
            snapshots[i + start_index] = b

    record(0, body)
    current = body
    for i, u in enumerate(seq):
        try:
            current = apply_operator(current, u, op, max_vertices=max_vertices,
                                     chords=chords)
            record(i + 1, current)
        except Exception as exc:  # noqa: BLE001 - re-tagged with step index
            raise TrajectoryAbortedError(i + start_index, exc) from exc

    return Trajectory(
        operator=op, dim=d, limit_radius=limit_radius, directions=dirs,
        mean_radius=L, volume=vol, circumradius=R, hausdorff=dH, nikodym=dN,
        inertia=I, nikodym_stderr=dN_se, prune_error=perr, snapshots=snapshots,
    )


def validate_trajectory(traj, tol=1e-9):
    """Cross-check the monotonicity/conservation columns of a run.

    Returns a list of violation strings (empty when clean). Vertex
    budget pruning perturbs each step by up to its recorded prune_error
    bound; the checks grant that allowance on top of tol.
    """
    problems = []
    allow = np.full(len(traj), tol)
    if traj.prune_error is not None:
        # a support perturbation of e moves volume by <= perimeter * e
        # (2D) and every other column by <= e directly
        step_err = np.diff(traj.prune_error, prepend=0.0)
        allow = allow + np.maximum(step_err, 0.0)
    scale = max(abs(traj.volume[0]), 1.0)
    vol_allow = tol * scale + 2.0 * np.pi * traj.circumradius * np.maximum(
        np.diff(traj.prune_error, prepend=0.0), 0.0
    ) if traj.prune_error is not None else np.full(len(traj), tol * scale)
    if traj.operator is OperatorKind.STEINER:
        drift = np.abs(traj.volume - traj.volume[0])
        if (drift > np.cumsum(vol_allow)).any():
            problems.append("Steiner volume not conserved")
        if (np.diff(traj.mean_radius) > allow[1:]).any():
            problems.append("Steiner mean radius increased")
    elif traj.operator is OperatorKind.MINKOWSKI:
        if (np.diff(traj.mean_radius) > allow[1:]).any() or (
            np.diff(traj.mean_radius) < -allow[1:]
        ).any():
            problems.append("Minkowski mean radius not conserved")
        if (np.diff(traj.volume) < -vol_allow[1:]).any():
            problems.append("Minkowski volume decreased")
    if (np.diff(traj.circumradius) > allow[1:]).any():
        problems.append("circumradius increased")
    return problems
