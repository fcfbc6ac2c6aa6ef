"""Harmonic analysis on S^1 and S^2 for centered support functions.

Real bases throughout, orthonormal with respect to the rotation-invariant
probability measure sigma:
  d=2: {1, sqrt(2) cos(k t), sqrt(2) sin(k t)};
  d=3: real spherical harmonics scaled so the sigma-mean of Y^2 is 1
       (standard unit-sphere-orthonormal Y times sqrt(4 pi)).
Parseval then reads sum of squared coefficients = sigma-mean of f^2.
"""

import json
import math
from dataclasses import dataclass

import numpy as np

from .bodies import require_direction, sphere_grid, support_profile, SupportProfile
from .errors import GridTooCoarseError, UnsupportedDimensionError
from .metrics import unit_ball_volume

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class HarmonicSpectrum:
    """Per-degree coefficient blocks of a function on the sphere.

    d=2: block_0 = [a_0], block_k = [a_k, b_k] (cos/sin);
    d=3: block_k has 2k+1 entries ordered m = 0, 1c, 1s, ..., kc, ks.
    """

    dim: int
    k_max: int
    blocks: tuple

    def block_norms_sq(self):
        return np.array([float(np.dot(b, b)) for b in self.blocks])

    def total_norm_sq(self):
        return float(self.block_norms_sq().sum())

    def to_json(self):
        return json.dumps(
            {"dim": self.dim, "k_max": self.k_max,
             "blocks": [[float(c) for c in b] for b in self.blocks]}
        )

    @classmethod
    def from_json(cls, text):
        obj = json.loads(text)
        return cls(int(obj["dim"]), int(obj["k_max"]),
                   tuple(np.asarray(b, dtype=np.float64) for b in obj["blocks"]))


def dim_spaces(dim, k):
    """(dim S_k, ell(k)) as exact integers.

    dim S_k = (d-2+2k)/(d-2+k) * C(d+k-2, d-2) and ell(k) = C(d+k-2, d-2),
    the dimension of the subspace fixed by rotations about an axis.
    """
    if k == 0:
        return 1, 1
    ell = math.comb(dim + k - 2, dim - 2)
    num = (dim - 2 + 2 * k) * ell
    den = dim - 2 + k
    assert num % den == 0
    return num // den, ell


def contraction_factor(dim, k):
    """(d-2+k)/(d-2+2k), the reflection-averaging contraction per degree."""
    if k == 0:
        return 1.0
    return (dim - 2 + k) / (dim - 2 + 2 * k)


def linf_l2_constant(dim, R):
    """c with ||h||_inf^d <= c * ||h||_2 for support differences in R(A)D:
    c = d R^(d-1) / kappa_{d-1}."""
    return dim * R ** (dim - 1) / unit_ball_volume(dim - 1)


def centered_support(body, grid):
    """h_A = f_A - L(A) sampled on the grid; quadrature mean exactly ~ 0.

    L(A) is evaluated by the same grid quadrature (it differs from the
    exact mean radius by the grid's aliasing error), so the recentered
    samples integrate to zero to machine precision.
    """
    prof = support_profile(body, grid)
    L = grid.integrate(prof.values)
    return SupportProfile(grid, prof.values - L)


def _sph_basis_degree(k, pts):
    """sigma-orthonormal real degree-k basis at unit points (n, 3)."""
    from scipy.special import lpmv

    ct = np.clip(pts[:, 2], -1.0, 1.0)
    phi = np.arctan2(pts[:, 1], pts[:, 0])
    cols = np.empty((len(pts), 2 * k + 1))
    j = 0
    for m in range(k + 1):
        norm = math.sqrt(
            (2 * k + 1) * math.factorial(k - m) / math.factorial(k + m))
        P = lpmv(m, k, ct)
        if m == 0:
            cols[:, j] = norm * P
            j += 1
        else:
            cols[:, j] = SQRT2 * norm * P * np.cos(m * phi)
            cols[:, j + 1] = SQRT2 * norm * P * np.sin(m * phi)
            j += 2
    return cols


def _circle_basis(k_max, angles):
    cols = [np.ones_like(angles)]
    for k in range(1, k_max + 1):
        cols.append(SQRT2 * np.cos(k * angles))
        cols.append(SQRT2 * np.sin(k * angles))
    return np.column_stack(cols)


def _require_resolution(grid, k_max):
    if grid.k_exact < 2 * k_max:
        raise GridTooCoarseError(
            f"grid exact to degree {grid.k_exact} < 2*k_max = {2 * k_max}")


def expand(profile, k_max):
    """Project grid samples onto degrees 0..k_max.

    Exact for band-limited inputs on grids with k_exact >= 2*k_max
    (products of degree <= k_max harmonics are integrated exactly).
    """
    grid = profile.grid
    _require_resolution(grid, k_max)
    wf = grid.weights * profile.values
    if grid.dim == 2:
        B = _circle_basis(k_max, grid.angles)
        c = B.T @ wf
        blocks = [c[:1]] + [c[1 + 2 * (k - 1) : 3 + 2 * (k - 1)] for k in range(1, k_max + 1)]
        return HarmonicSpectrum(2, k_max, tuple(blocks))
    if grid.dim == 3:
        blocks = []
        for k in range(k_max + 1):
            Y = _sph_basis_degree(k, grid.nodes)
            blocks.append(Y.T @ wf)
        return HarmonicSpectrum(3, k_max, tuple(blocks))
    raise UnsupportedDimensionError("harmonic expansion supports dim 2 and 3")


def evaluate(spectrum, pts):
    """Evaluate the band-limited function at arbitrary unit points."""
    pts = np.atleast_2d(np.asarray(pts, dtype=np.float64))
    if spectrum.dim == 2:
        ang = np.arctan2(pts[:, 1], pts[:, 0])
        B = _circle_basis(spectrum.k_max, ang)
        return B @ np.concatenate(spectrum.blocks)
    out = np.zeros(len(pts))
    for k, b in enumerate(spectrum.blocks):
        out += _sph_basis_degree(k, pts) @ b
    return out


def reconstruct(spectrum, grid):
    """Band-limited synthesis on a grid (inverse of expand)."""
    return SupportProfile(grid, evaluate(spectrum, grid.nodes))


def reflect_spectrum(spectrum, u, grid):
    """Spectrum of g composed with the reflection through u-perp.

    Reflection is orthogonal, so each degree block maps within its
    degree; the result is computed by resampling g at reflected nodes
    and re-expanding, exact for band-limited g on a fine-enough grid.
    """
    u = require_direction(u, spectrum.dim)
    _require_resolution(grid, spectrum.k_max)
    refl = grid.nodes - 2.0 * np.outer(grid.nodes @ u, u)
    vals = evaluate(spectrum, refl)
    return expand(SupportProfile(grid, vals), spectrum.k_max)


def random_harmonic(dim, k, rng):
    """Unit-norm g in S_k with isotropic (Gaussian) coefficients."""
    n = 2 if dim == 2 else 2 * k + 1
    c = rng.standard_normal(n)
    c /= np.linalg.norm(c)
    blocks = [np.zeros(1)] + [
        np.zeros(2 if dim == 2 else 2 * j + 1) for j in range(1, k)
    ] + [c]
    return HarmonicSpectrum(dim, k, tuple(blocks))


def _mc_mean_stderr(samples):
    m = float(np.mean(samples))
    se = float(np.std(samples, ddof=1) / math.sqrt(len(samples)))
    return m, se


def contraction_ratio(dim, k, trials, rng, chunk=4096):
    """MC estimate of E ||(g + g o pi_U)/2||_2^2 / ||g||_2^2, U ~ Haar.

    Uses ||(g + g o pi)/2||^2 = 1/2 ||g||^2 + 1/2 <g, g o pi> with the
    cross term in closed form (d=2, Fourier) or by degree-exact
    quadrature at reflected nodes (d=3). Returns (estimate, stderr).
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if trials < 1000:
        raise ValueError("need at least 1000 trials")
    if dim == 2:
        a, b = rng.standard_normal(2)
        nrm = math.hypot(a, b)
        a, b = a / nrm, b / nrm
        beta = rng.uniform(0.0, 2.0 * np.pi, size=trials)
        kc = k * (2.0 * beta + np.pi)
        cross = (a * a - b * b) * np.cos(kc) + 2.0 * a * b * np.sin(kc)
        return _mc_mean_stderr(0.5 + 0.5 * cross)
    if dim != 3:
        raise UnsupportedDimensionError("contraction_ratio supports dim 2 and 3")
    g = random_harmonic(3, k, rng)
    coef = g.blocks[k]
    grid = sphere_grid(3, max(2 * k + 2, 8))
    _require_resolution(grid, k)
    base = _sph_basis_degree(k, grid.nodes)
    gvals = base @ coef
    wg = grid.weights * gvals
    nodes = grid.nodes
    out = np.empty(trials)
    done = 0
    while done < trials:
        t = min(chunk, trials - done)
        U = rng.standard_normal((t, 3))
        U /= np.linalg.norm(U, axis=1, keepdims=True)
        proj = nodes @ U.T  # (n, t)
        refl = nodes[None, :, :] - 2.0 * proj.T[:, :, None] * U[:, None, :]
        Yr = _sph_basis_degree(k, refl.reshape(-1, 3)).reshape(t, len(nodes), -1)
        gref = Yr @ coef  # (t, n)
        cross = gref @ wg
        out[done : done + t] = 0.5 + 0.5 * cross
        done += t
    return _mc_mean_stderr(out)


def body_contraction_mc(body, trials, rng, k_max=512, grid_size=4096):
    """MC estimate of E ||h_{B_U A}||_2^2 / ||h_A||_2^2 for a 2D polygon.

    Works degree-by-degree through the Fourier coefficients of h_A: for
    a reflection with axis parameter c, <g_k, g_k o pi> =
    (a_k^2 - b_k^2) cos(kc) + 2 a_k b_k sin(kc), so each trial is a
    closed-form sum over degrees (band-limited at k_max; the support
    function's tail energy decays like k^-3 and is negligible here).
    Returns (estimate, stderr).
    """
    if body.dim != 2:
        raise UnsupportedDimensionError("body_contraction_mc is 2D only")
    grid = sphere_grid(2, grid_size)
    h = centered_support(body, grid).values
    c = np.fft.rfft(h) / grid_size
    a = SQRT2 * c.real[1 : k_max + 1]
    b = -SQRT2 * c.imag[1 : k_max + 1]
    norm_sq = float((a * a + b * b).sum())
    ks = np.arange(1, k_max + 1)
    beta = rng.uniform(0.0, 2.0 * np.pi, size=trials)
    kc = np.outer(beta * 2.0 + np.pi, ks)  # (trials, k)
    cross = np.cos(kc) @ (a * a - b * b) + np.sin(kc) @ (2.0 * a * b)
    ratios = 0.5 + 0.5 * cross / norm_sq
    return _mc_mean_stderr(ratios)
