# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled implementations of the hot 2D polygon kernels.

Mirrors `_numpy_backend` function by function; the two backends are
interchangeable and tested for parity. Rings are (n, 2) float64 CCW.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport atan2, hypot, sqrt

from ._numpy_backend import prune_collinear

cnp.import_array()

cdef double TWO_PI = 6.283185307179586476925287


cdef Py_ssize_t _bottom_index(const double[:, ::1] V) noexcept:
    """Index of the bottom-most vertex (min y, then min x)."""
    cdef Py_ssize_t i, best = 0
    cdef Py_ssize_t n = V.shape[0]
    for i in range(1, n):
        if V[i, 1] < V[best, 1] or (V[i, 1] == V[best, 1] and V[i, 0] < V[best, 0]):
            best = i
    return best


def convex_minkowski_sum(P_in, Q_in):
    """Minkowski sum of two convex CCW polygons by edge merging."""
    cdef const double[:, ::1] P = np.ascontiguousarray(P_in, dtype=np.float64)
    cdef const double[:, ::1] Q = np.ascontiguousarray(Q_in, dtype=np.float64)
    cdef Py_ssize_t n = P.shape[0], m = Q.shape[0]
    cdef Py_ssize_t p0 = _bottom_index(P), q0 = _bottom_index(Q)
    cdef cnp.ndarray[cnp.float64_t, ndim=2] out = np.empty((n + m, 2))
    cdef double[:, ::1] o = out
    cdef Py_ssize_t i, j, k, ip, iq, ipn, iqn
    cdef double ax, ay, bx, by, aa, ab, x, y

    x = P[p0, 0] + Q[q0, 0]
    y = P[p0, 1] + Q[q0, 1]
    i = 0
    j = 0
    for k in range(n + m):
        o[k, 0] = x
        o[k, 1] = y
        if i < n:
            ip = (p0 + i) % n
            ipn = (p0 + i + 1) % n
            ax = P[ipn, 0] - P[ip, 0]
            ay = P[ipn, 1] - P[ip, 1]
            aa = atan2(ay, ax)
            if aa < 0.0:
                aa += TWO_PI
        if j < m:
            iq = (q0 + j) % m
            iqn = (q0 + j + 1) % m
            bx = Q[iqn, 0] - Q[iq, 0]
            by = Q[iqn, 1] - Q[iq, 1]
            ab = atan2(by, bx)
            if ab < 0.0:
                ab += TWO_PI
        if j >= m or (i < n and aa <= ab):
            x += ax
            y += ay
            i += 1
        else:
            x += bx
            y += by
            j += 1
    return out


def steiner_symmetral(V_in, double c, double s):
    """Exact 2D Steiner symmetral along unit chord direction u = (c, s)."""
    cdef const double[:, ::1] V = np.ascontiguousarray(V_in, dtype=np.float64)
    cdef Py_ssize_t n = V.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=2] pts_arr = np.empty((n, 2))
    cdef double[:, ::1] pts = pts_arr
    cdef Py_ssize_t i, i_min = 0, i_max = 0
    for i in range(n):
        pts[i, 0] = s * V[i, 0] - c * V[i, 1]
        pts[i, 1] = c * V[i, 0] + s * V[i, 1]
    for i in range(1, n):
        if pts[i, 0] < pts[i_min, 0] or (pts[i, 0] == pts[i_min, 0] and pts[i, 1] < pts[i_min, 1]):
            i_min = i
        if pts[i, 0] > pts[i_max, 0] or (pts[i, 0] == pts[i_max, 0] and pts[i, 1] > pts[i_max, 1]):
            i_max = i

    cdef Py_ssize_t klen = (i_max - i_min) % n
    if klen < 0:
        klen += n
    # lower chain i_min..i_max (CCW), upper chain reversed i_max..i_min,
    # keeping first (lower) / last (upper) of duplicate abscissae
    cdef cnp.ndarray[cnp.float64_t, ndim=2] lower = np.empty((klen + 1, 2))
    cdef cnp.ndarray[cnp.float64_t, ndim=2] upper = np.empty((n - klen + 1, 2))
    cdef double[:, ::1] lo_c = lower, up_c = upper
    cdef Py_ssize_t j, nl = 0, nu = 0
    for j in range(klen + 1):
        i = (i_min + j) % n
        if nl > 0 and pts[i, 0] <= lo_c[nl - 1, 0]:
            continue
        lo_c[nl, 0] = pts[i, 0]
        lo_c[nl, 1] = pts[i, 1]
        nl += 1
    for j in range(n - klen, -1, -1):
        i = (i_max + j) % n
        if nu > 0 and pts[i, 0] <= up_c[nu - 1, 0]:
            # duplicate abscissa: the upper chain keeps the last point
            up_c[nu - 1, 0] = pts[i, 0]
            up_c[nu - 1, 1] = pts[i, 1]
            continue
        up_c[nu, 0] = pts[i, 0]
        up_c[nu, 1] = pts[i, 1]
        nu += 1

    cdef cnp.ndarray[cnp.float64_t, ndim=2] ring_arr = np.empty((2 * (nl + nu), 2))
    cdef double[:, ::1] ring = ring_arr
    cdef Py_ssize_t a = 0, b = 0, cnt = 0
    cdef double xv, yl, yu, half
    while a < nl or b < nu:
        if b >= nu or (a < nl and lo_c[a, 0] < up_c[b, 0]):
            xv = lo_c[a, 0]
        elif a >= nl or up_c[b, 0] < lo_c[a, 0]:
            xv = up_c[b, 0]
        else:
            xv = lo_c[a, 0]
        # envelope values by linear interpolation (np.interp semantics:
        # clamped at the chain ends)
        yl = _interp(lo_c, nl, xv)
        yu = _interp(up_c, nu, xv)
        half = 0.5 * (yu - yl)
        if half < 0.0:
            half = 0.0
        ring[cnt, 0] = xv
        ring[cnt, 1] = half
        cnt += 1
        while a < nl and lo_c[a, 0] <= xv:
            a += 1
        while b < nu and up_c[b, 0] <= xv:
            b += 1

    cdef cnp.ndarray[cnp.float64_t, ndim=2] out_arr = np.empty((2 * cnt, 2))
    cdef double[:, ::1] o = out_arr
    for j in range(cnt):
        # bottom chain left to right
        o[j, 0] = s * ring[j, 0] - c * ring[j, 1]
        o[j, 1] = -c * ring[j, 0] - s * ring[j, 1]
        # top chain right to left
        i = 2 * cnt - 1 - j
        o[i, 0] = s * ring[j, 0] + c * ring[j, 1]
        o[i, 1] = -c * ring[j, 0] + s * ring[j, 1]
    d = np.roll(out_arr, -1, axis=0) - out_arr
    keep = (d[:, 0] != 0.0) | (d[:, 1] != 0.0)
    return prune_collinear(out_arr[keep])


cdef double _interp(double[:, ::1] chain, Py_ssize_t n, double x) noexcept:
    cdef Py_ssize_t lo = 0, hi = n - 1, mid
    if x <= chain[0, 0]:
        return chain[0, 1]
    if x >= chain[n - 1, 0]:
        return chain[n - 1, 1]
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if chain[mid, 0] <= x:
            lo = mid
        else:
            hi = mid
    if chain[hi, 0] == chain[lo, 0]:
        return chain[lo, 1]
    # same association as np.interp: slope first
    cdef double slope = (chain[hi, 1] - chain[lo, 1]) / (chain[hi, 0] - chain[lo, 0])
    return chain[lo, 1] + slope * (x - chain[lo, 0])


def disk_overlap_area(V_in, double r):
    """Exact area of polygon intersected with the centered disk of radius r."""
    cdef const double[:, ::1] V = np.ascontiguousarray(V_in, dtype=np.float64)
    cdef Py_ssize_t n = V.shape[0], i, j
    cdef double r2 = r * r
    cdef double ax, ay, bx, by, dx, dy, q, p, c0, disc, sq, t1, t2, tl, th
    cdef double plx, ply, phx, phy, total = 0.0
    cdef bint empty
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        ax = V[i, 0]; ay = V[i, 1]
        bx = V[j, 0]; by = V[j, 1]
        dx = bx - ax; dy = by - ay
        q = dx * dx + dy * dy
        p = 2.0 * (ax * dx + ay * dy)
        c0 = ax * ax + ay * ay - r2
        disc = p * p - 4.0 * q * c0
        if disc > 0.0 and q > 0.0:
            sq = sqrt(disc)
            t1 = (-p - sq) / (2.0 * q)
            t2 = (-p + sq) / (2.0 * q)
            empty = (t2 <= 0.0) or (t1 >= 1.0)
        else:
            t1 = 0.0; t2 = 0.0
            empty = True
        if empty:
            tl = 0.0; th = 0.0
        else:
            tl = t1 if t1 > 0.0 else 0.0
            if tl > 1.0:
                tl = 1.0
            th = t2 if t2 < 1.0 else 1.0
            if th < tl:
                th = tl
        plx = ax + tl * dx; ply = ay + tl * dy
        phx = ax + th * dx; phy = ay + th * dy
        total += 0.5 * r2 * atan2(ax * ply - ay * plx, ax * plx + ay * ply)
        total += 0.5 * (plx * phy - ply * phx)
        total += 0.5 * r2 * atan2(phx * by - phy * bx, phx * bx + phy * by)
    return total


def disk_hausdorff(V_in, double r):
    """Exact Hausdorff distance between a convex CCW polygon and r*D."""
    cdef const double[:, ::1] V = np.ascontiguousarray(V_in, dtype=np.float64)
    cdef Py_ssize_t n = V.shape[0], i, j
    cdef double rad_max = 0.0, h_min = 0.0, cr, ex, ey, ln, h, rad
    cdef bint first = True
    for i in range(n):
        j = i + 1
        if j == n:
            j = 0
        rad = hypot(V[i, 0], V[i, 1])
        if rad > rad_max:
            rad_max = rad
        ex = V[j, 0] - V[i, 0]
        ey = V[j, 1] - V[i, 1]
        ln = hypot(ex, ey)
        cr = V[i, 0] * V[j, 1] - V[i, 1] * V[j, 0]
        h = cr / ln if ln > 0.0 else cr
        if first or h < h_min:
            h_min = h
            first = False
    cdef double out = rad_max - r
    if r - h_min > out:
        out = r - h_min
    if out < 0.0:
        out = 0.0
    return out
