"""Direction-sequence generators: Haar, bounded-density, Markov, deterministic.

All random samplers draw from an explicit numpy Generator (counter-based
Philox streams; see `make_rng`), never global state, so sequences are
reproducible and independent across parallel trajectories.
"""

import math
from dataclasses import dataclass

import numpy as np

from .bodies import unit
from .errors import (
    ConfigError,
    RejectionStallError,
    UnsupportedDimensionError,
)

GOLDEN_RATIO_FRAC = (math.sqrt(5.0) - 1.0) / 2.0


def make_rng(seed, stream=0):
    """Philox counter-based generator keyed by (seed, stream).

    Distinct streams are statistically independent, so each trajectory
    index owns stream=index under a shared experiment seed.
    """
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def sample_haar(rng, dim, size=None):
    """Uniform (Haar) unit vectors: normalized standard Gaussians.

    Returns shape (dim,) for size=None, else (size, dim).
    """
    if dim < 2:
        raise UnsupportedDimensionError("dim must be >= 2")
    n = 1 if size is None else size
    g = rng.standard_normal((n, dim))
    norms = np.linalg.norm(g, axis=1)
    bad = norms == 0.0
    while bad.any():  # probability-zero guard
        g[bad] = rng.standard_normal((bad.sum(), dim))
        norms = np.linalg.norm(g, axis=1)
        bad = norms == 0.0
    u = g / norms[:, None]
    return u[0] if size is None else u


@dataclass(frozen=True)
class DensityModel:
    """A direction law given by its density w.r.t. the Haar measure.

    `alpha` is the declared sup bound on the density. Sequences with
    alpha < d/(d-1) are in the rate-guaranteed regime; larger alpha is
    allowed but flagged.
    """

    dim: int
    density: callable
    alpha: float
    name: str = "custom"

    @property
    def rate_guaranteed(self):
        return self.alpha < self.dim / (self.dim - 1.0)


def sample_bounded_density(rng, model, size=None):
    """Rejection sampling from Haar proposals, acceptance density/alpha.

    Exact for any density bounded by alpha, including densities that
    vanish on open sets. Raises RejectionStallError when the acceptance
    rate over 1e6 proposals drops below 1e-4 (misdeclared alpha).
    """
    want = 1 if size is None else size
    out = np.empty((want, model.dim))
    got = 0
    proposals = 0
    accepts = 0
    while got < want:
        batch = max(256, int((want - got) * model.alpha * 1.2))
        cand = sample_haar(rng, model.dim, size=batch)
        dens = np.asarray(model.density(cand), dtype=np.float64)
        if (dens > model.alpha * (1.0 + 1e-12)).any():
            raise RejectionStallError(
                f"density exceeds declared bound alpha={model.alpha}")
        acc = rng.uniform(0.0, 1.0, size=batch) * model.alpha < dens
        take = cand[acc][: want - got]
        out[got : got + len(take)] = take
        got += len(take)
        proposals += batch
        accepts += int(acc.sum())
        if proposals >= 1_000_000 and accepts < 1e-4 * proposals:
            raise RejectionStallError(
                f"acceptance rate {accepts / proposals:.2e} after {proposals} proposals")
    return out[0] if size is None else out


def uniform_density(dim):
    return DensityModel(dim, lambda u: np.ones(len(np.atleast_2d(u))), 1.0, name="uniform")


def upper_lower_density(dim=2, hi=1.2, lo=0.8):
    """hi on the upper half-sphere, lo on the lower (hi*1/2 + lo*1/2 = 1)."""
    if abs(0.5 * (hi + lo) - 1.0) > 1e-12:
        raise ConfigError("upper/lower weights must average to 1")

    def density(u):
        u = np.atleast_2d(u)
        return np.where(u[:, -1] >= 0.0, hi, lo)

    return DensityModel(dim, density, max(hi, lo), name="upper_lower")


def cap_density(dim=3, c=1.4, height=0.5):
    """c on the polar cap {u_3 >= height}, normalized constant elsewhere.

    For d=3 the cap mass under sigma is (1 - height)/2 (the last
    coordinate is uniform on [-1, 1]).
    """
    if dim != 3:
        raise UnsupportedDimensionError("cap density is specified for d=3")
    sigma_cap = (1.0 - height) / 2.0
    rest = (1.0 - c * sigma_cap) / (1.0 - sigma_cap)
    if rest < 0.0:
        raise ConfigError("cap weight too large to normalize")

    def density(u):
        u = np.atleast_2d(u)
        return np.where(u[:, 2] >= height, c, rest)

    return DensityModel(dim, density, max(c, rest), name="cap")


NAMED_DENSITIES = {
    "uniform": uniform_density,
    "upper_lower": upper_lower_density,
    "cap": cap_density,
}


@dataclass(frozen=True)
class MarkovKernel:
    """Time-homogeneous chain on the sphere with a per-state density bound.

    `family(v)` returns the DensityModel of the conditional law P(v, .),
    so the stationary_bound holds by construction at every state.
    """

    dim: int
    family: callable
    stationary_bound: float
    name: str = "custom"

    def step(self, v, rng):
        return sample_bounded_density(rng, self.family(v))


def haar_kernel(dim):
    """Degenerate chain ignoring its state: i.i.d. Haar steps."""
    return MarkovKernel(dim, lambda v: uniform_density(dim), 1.0, name="haar")


def hemisphere_mix_kernel(dim, weight=0.5):
    """Mixture step: Haar with probability 1-weight, else Haar conditioned
    on the hemisphere facing the current state.

    Conditional density (1 - weight) + 2*weight on {<u, v> >= 0}, zero
    extra elsewhere; bound 1 + weight, which stays below d/(d-1) for
    weight < 1/(d-1).
    """

    def family(v):
        v = np.asarray(v, dtype=np.float64)

        def density(u):
            u = np.atleast_2d(u)
            return (1.0 - weight) + 2.0 * weight * (u @ v >= 0.0)

        return DensityModel(dim, density, 1.0 + weight, name="hemisphere_mix")

    return MarkovKernel(dim, family, 1.0 + weight, name="hemisphere_mix")


NAMED_KERNELS = {
    "haar": haar_kernel,
    "hemisphere_mix": hemisphere_mix_kernel,
}


def markov_sequence(rng, kernel, start, n):
    """n chain steps from `start` (excluded from the output)."""
    out = np.empty((n, kernel.dim))
    v = unit(start)
    for i in range(n):
        v = kernel.step(v, rng)
        out[i] = v
    return out


def deterministic_sequence(kind, n, cycle=None):
    """Non-random direction sequences.

    kind="golden_angle" (d=2): u_k = (cos 2 pi k phi, sin 2 pi k phi)
    with phi the golden-ratio fraction; equidistributed on the circle.
    kind="finite_cycle": repeats `cycle` (a nonempty list of unit
    directions) periodically.
    """
    if kind == "golden_angle":
        k = np.arange(1, n + 1, dtype=np.float64)
        t = 2.0 * np.pi * np.mod(k * GOLDEN_RATIO_FRAC, 1.0)
        return np.column_stack([np.cos(t), np.sin(t)])
    if kind == "finite_cycle":
        if cycle is None or len(cycle) == 0:
            raise ConfigError("finite_cycle needs a nonempty direction list")
        cyc = np.array([unit(c) for c in cycle])
        if n == 0:
            return cyc[:0]
        return np.tile(cyc, (int(np.ceil(n / len(cyc))), 1))[:n]
    raise ConfigError(f"unknown deterministic sequence kind {kind!r}")


@dataclass(frozen=True)
class DirectionSource:
    """Config-describable generator of direction sequences.

    tag in {"haar", "bounded_density", "markov", "deterministic"};
    `spec` names a density/kernel family or the deterministic kind.
    """

    tag: str
    dim: int
    spec: str = None
    alpha: float = None
    cycle: tuple = None
    kernel_weight: float = 0.5

    def generate(self, rng, n):
        """An (n, dim) array of unit directions."""
        if self.tag == "haar":
            return sample_haar(rng, self.dim, size=n)
        if self.tag == "bounded_density":
            model = self._model()
            return sample_bounded_density(rng, model, size=n)
        if self.tag == "markov":
            kernel = self._kernel()
            start = np.zeros(self.dim)
            start[0] = 1.0
            return markov_sequence(rng, kernel, start, n)
        if self.tag == "deterministic":
            return deterministic_sequence(self.spec, n, cycle=self.cycle)
        raise ConfigError(f"unknown direction source {self.tag!r}")

    def _model(self):
        if self.spec not in NAMED_DENSITIES:
            raise ConfigError(f"unknown density spec {self.spec!r}")
        if self.spec == "uniform":
            return uniform_density(self.dim)
        if self.spec == "upper_lower":
            hi = self.alpha if self.alpha is not None else 1.2
            return upper_lower_density(self.dim, hi=hi, lo=2.0 - hi)
        if self.spec == "cap":
            c = self.alpha if self.alpha is not None else 1.4
            return cap_density(self.dim, c=c)
        raise ConfigError(f"unknown density spec {self.spec!r}")

    def _kernel(self):
        if self.spec == "haar":
            return haar_kernel(self.dim)
        if self.spec in (None, "hemisphere_mix"):
            return hemisphere_mix_kernel(self.dim, weight=self.kernel_weight)
        raise ConfigError(f"unknown kernel spec {self.spec!r}")


def source_from_config(obj, dim):
    """Parse a DirectionSource from its JSON-config dict form.

    E.g. {"source": "bounded_density", "alpha": 1.2, "spec": "upper_lower"}.
    """
    if not isinstance(obj, dict) or "source" not in obj:
        raise ConfigError("direction source must be an object with a 'source' field")
    tag = obj["source"]
    if tag not in ("haar", "bounded_density", "markov", "deterministic"):
        raise ConfigError(f"unknown direction source {tag!r}")
    cycle = obj.get("cycle")
    return DirectionSource(
        tag=tag,
        dim=dim,
        spec=obj.get("spec"),
        alpha=obj.get("alpha"),
        cycle=tuple(map(tuple, cycle)) if cycle else None,
        kernel_weight=obj.get("kernel_weight", 0.5),
    )
