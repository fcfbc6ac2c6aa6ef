"""Pure-numpy reference implementation of the hot 2D polygon kernels.

All polygon arguments are (n, 2) float64 arrays of strictly convex
counterclockwise vertex rings. These functions are the correctness
reference; the optional compiled backend mirrors them exactly.
"""

import numpy as np

TWO_PI = 2.0 * np.pi


def polygon_area(V):
    """Shoelace area of a CCW polygon (positive)."""
    x, y = V[:, 0], V[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


def polygon_perimeter(V):
    e = np.roll(V, -1, axis=0) - V
    return float(np.hypot(e[:, 0], e[:, 1]).sum())


def polygon_inertia(V):
    """Second moment about the origin, exact by signed origin fans.

    Per edge (a, b): cross(a,b) * (|a|^2 + |b|^2 + a.b) / 12.
    """
    a = V
    b = np.roll(V, -1, axis=0)
    cr = a[:, 0] * b[:, 1] - a[:, 1] * b[:, 0]
    q = (a * a).sum(axis=1) + (b * b).sum(axis=1) + (a * b).sum(axis=1)
    return float((cr * q).sum() / 12.0)


def support_values(V, dirs):
    """Support function max_v <v, theta> for each row of dirs."""
    return np.max(dirs @ V.T, axis=-1)


def prune_collinear(V, tol=0.0):
    """Drop vertices whose adjacent edges are collinear within tol.

    tol=0.0 removes only exactly-collinear vertices, which keeps the
    enclosed area bit-identical.
    """
    while len(V) >= 3:
        a = np.roll(V, 1, axis=0)
        b = V
        c = np.roll(V, -1, axis=0)
        cr = (b[:, 0] - a[:, 0]) * (c[:, 1] - a[:, 1]) - (
            b[:, 1] - a[:, 1]
        ) * (c[:, 0] - a[:, 0])
        bad = np.flatnonzero(np.abs(cr) <= tol)
        if len(bad) == 0:
            break
        # never drop two cyclically adjacent vertices in one pass:
        # coincident points both read as collinear, but removing the
        # whole pair would delete a real corner
        drop = []
        prev = -2
        for i in bad:
            if i == prev + 1:
                continue
            drop.append(i)
            prev = i
        if len(drop) > 1 and drop[0] == 0 and drop[-1] == len(V) - 1:
            drop.pop()
        if len(V) - len(drop) < 3:
            break
        keep = np.ones(len(V), dtype=bool)
        keep[drop] = False
        V = V[keep]
    return V


def _roll_to_bottom(V):
    i = np.lexsort((V[:, 0], V[:, 1]))[0]
    return np.roll(V, -i, axis=0)


def convex_minkowski_sum(P, Q):
    """Minkowski sum of two convex CCW polygons by edge merging.

    O(n + m) edges; output is CCW starting at the bottom-most vertex of
    the sum. Consecutive parallel edges are left unmerged (callers prune
    exactly-collinear vertices when canonicalizing).
    """
    P = _roll_to_bottom(np.asarray(P, dtype=np.float64))
    Q = _roll_to_bottom(np.asarray(Q, dtype=np.float64))
    eP = np.roll(P, -1, axis=0) - P
    eQ = np.roll(Q, -1, axis=0) - Q
    e = np.concatenate([eP, eQ], axis=0)
    ang = np.arctan2(e[:, 1], e[:, 0])
    ang[ang < 0.0] += TWO_PI
    order = np.argsort(ang, kind="stable")
    e = e[order]
    start = P[0] + Q[0]
    verts = np.empty((len(e), 2), dtype=np.float64)
    verts[0] = start
    np.cumsum(e[:-1], axis=0, out=verts[1:])
    verts[1:] += start
    return verts


def _chains(pts):
    """Split a CCW vertex ring into x-increasing lower/upper chains."""
    n = len(pts)
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    i_min, i_max = order[0], order[-1]
    k = (i_max - i_min) % n
    lower = pts[(i_min + np.arange(k + 1)) % n]
    upper = pts[(i_max + np.arange(n - k + 1)) % n][::-1]
    # duplicate x only at the extremes (vertical edges); lower keeps the
    # first (smaller y), upper keeps the last (larger y)
    lm = np.concatenate([[True], np.diff(lower[:, 0]) > 0.0])
    um = np.concatenate([np.diff(upper[:, 0]) > 0.0, [True]])
    return lower[lm], upper[um]


def steiner_symmetral(V, c, s):
    """Exact 2D Steiner symmetral of a convex CCW polygon.

    u = (c, s) is the (unit) chord direction; chords parallel to u are
    recentered on the line through the origin orthogonal to u.
    """
    V = np.asarray(V, dtype=np.float64)
    # rotate so u maps to e2
    xr = s * V[:, 0] - c * V[:, 1]
    yr = c * V[:, 0] + s * V[:, 1]
    pts = np.column_stack([xr, yr])
    lower, upper = _chains(pts)
    X = np.union1d(lower[:, 0], upper[:, 0])
    lo = np.interp(X, lower[:, 0], lower[:, 1])
    up = np.interp(X, upper[:, 0], upper[:, 1])
    half = 0.5 * np.maximum(up - lo, 0.0)
    bottom = np.column_stack([X, -half])
    top = np.column_stack([X[::-1], half[::-1]])
    ring = np.concatenate([bottom, top], axis=0)
    out = np.column_stack(
        [s * ring[:, 0] + c * ring[:, 1], -c * ring[:, 0] + s * ring[:, 1]]
    )
    # drop coincident points (zero-length chords at the extremes, and
    # breakpoint pairs that collapse under the back-rotation rounding)
    d = np.roll(out, -1, axis=0) - out
    keep = (d[:, 0] != 0.0) | (d[:, 1] != 0.0)
    return prune_collinear(out[keep])


def _signed_sector(u, v, r2):
    """0.5 r^2 * signed angle from u to v (|angle| < pi per call)."""
    cr = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
    dt = (u * v).sum(axis=1)
    return 0.5 * r2 * np.arctan2(cr, dt)


def disk_overlap_area(V, r):
    """Exact area of polygon ∩ centered disk of radius r.

    Signed decomposition over origin fans: each edge (a, b) contributes
    the signed area of triangle(0, a, b) ∩ disk; chord crossings split
    the edge into inside (triangle) and outside (circular sector) parts.
    """
    V = np.asarray(V, dtype=np.float64)
    a = V
    b = np.roll(V, -1, axis=0)
    d = b - a
    r2 = r * r
    q = (d * d).sum(axis=1)
    p = 2.0 * (a * d).sum(axis=1)
    c0 = (a * a).sum(axis=1) - r2
    disc = p * p - 4.0 * q * c0
    has = disc > 0.0
    sq = np.sqrt(np.where(has, disc, 0.0))
    qs = np.where(q > 0.0, q, 1.0)
    t1 = np.where(has, (-p - sq) / (2.0 * qs), 0.0)
    t2 = np.where(has, (-p + sq) / (2.0 * qs), 0.0)
    t_lo = np.clip(t1, 0.0, 1.0)
    t_hi = np.clip(t2, 0.0, 1.0)
    t_hi = np.maximum(t_lo, t_hi)
    # no real chord inside the segment span -> empty inside part
    empty = ~has | (t2 <= 0.0) | (t1 >= 1.0)
    t_lo = np.where(empty, 0.0, t_lo)
    t_hi = np.where(empty, 0.0, t_hi)
    p_lo = a + t_lo[:, None] * d
    p_hi = a + t_hi[:, None] * d
    cr_in = p_lo[:, 0] * p_hi[:, 1] - p_lo[:, 1] * p_hi[:, 0]
    total = (
        _signed_sector(a, p_lo, r2)
        + 0.5 * cr_in
        + _signed_sector(p_hi, b, r2)
    )
    return float(total.sum())


def disk_hausdorff(V, r):
    """Exact Hausdorff distance between a convex polygon and r*D.

    d_H = ||f_P - r||_inf = max(max_v |v| - r, r - min_e h_e) where h_e
    is the signed origin-to-edge-line offset (f attains its max over the
    sphere at a vertex direction and its min at an edge normal).
    """
    V = np.asarray(V, dtype=np.float64)
    b = np.roll(V, -1, axis=0)
    cr = V[:, 0] * b[:, 1] - V[:, 1] * b[:, 0]
    e = b - V
    ln = np.hypot(e[:, 0], e[:, 1])
    h = cr / np.where(ln > 0.0, ln, 1.0)
    rad = np.hypot(V[:, 0], V[:, 1])
    return float(max(rad.max() - r, r - h.min(), 0.0))


def support_arc_angles(V):
    """Outward-normal angle of each edge (v_i -> v_{i+1}).

    Vertex i supports directions in the arc [phi_{i-1}, phi_i].
    """
    e = np.roll(V, -1, axis=0) - V
    return np.arctan2(-e[:, 0], e[:, 1])


def support_l2_sq(V):
    """Exact mean of f_P^2 over the unit circle (sigma-normalized)."""
    V = np.asarray(V, dtype=np.float64)
    phi = support_arc_angles(V)
    t0 = np.roll(phi, 1)
    span = np.mod(phi - t0, TWO_PI)
    t1 = t0 + span
    rad2 = (V * V).sum(axis=1)
    av = np.arctan2(V[:, 1], V[:, 0])
    term = 0.5 * span + 0.25 * (np.sin(2.0 * (t1 - av)) - np.sin(2.0 * (t0 - av)))
    return float((rad2 * term).sum() / TWO_PI)
