"""Experiment orchestration: runs, rate fits, n0 tails, equivalence probes.

Everything here is deterministic given (config, seed): each trajectory
draws from its own Philox stream (seed, trajectory_index), and CSV
output is written in seed order.
"""

import json
import math
import os
from dataclasses import dataclass, field

import numpy as np

from .bodies import body_from_json, make_hull, make_polygon, sphere_grid
from .directions import DirectionSource, make_rng, source_from_config
from .errors import (
    AllAtFloorError,
    AlphaTooLargeError,
    ConfigError,
    RateTooAggressiveError,
    TooFewPointsError,
    TrajectoryAbortedError,
)
from .metrics import BallSpec, equivalent_radius, unit_ball_volume, volume
from .symmetrize import (
    DEFAULT_VERTEX_BUDGET,
    OperatorKind,
    Trajectory,
    iterate,
    validate_trajectory,
)

FLOOR = 1e-12
FLOOR_DETECT = 1e-10


def _regular_polygon(n, radius=1.0):
    t = np.arange(n) * (2.0 * np.pi / n)
    return np.column_stack([radius * np.cos(t), radius * np.sin(t)])


def make_body(spec, dim=2):
    """Build a body from a named shape or an inline vertex spec.

    Named shapes: square ([-1,1]^2), unit_square ([0,1]^2), triangle,
    disk (regular 64-gon), cube ([-1,1]^3), ball (320-vertex sphere
    hull). A dict spec may carry {"name", "scale", "ngon"} or
    {"dim", "vertices"}.
    """
    scale = 1.0
    if isinstance(spec, dict):
        if "vertices" in spec:
            return body_from_json(json.dumps(spec))
        scale = float(spec.get("scale", 1.0))
        name = spec.get("name")
        dim = int(spec.get("dim", dim))
        ngon = int(spec.get("ngon", 64))
    else:
        name, ngon = spec, 64
    if name == "square":
        body = make_polygon([[-1, -1], [1, -1], [1, 1], [-1, 1]])
    elif name == "unit_square":
        body = make_polygon([[0, 0], [1, 0], [1, 1], [0, 1]])
    elif name == "square_area_pi":
        s = math.sqrt(math.pi) / 2.0
        body = make_polygon([[-s, -s], [s, -s], [s, s], [-s, s]])
    elif name == "triangle":
        body = make_polygon([[0, 0], [1, 0], [0, 1]])
    elif name == "disk":
        body = make_polygon(_regular_polygon(ngon))
    elif name == "cube":
        pts = np.array(np.meshgrid([-1, 1], [-1, 1], [-1, 1])).reshape(3, -1).T
        body = make_hull(3, pts.astype(np.float64))
    elif name == "ball":
        g = sphere_grid(3, 24)
        body = make_hull(3, g.nodes)
    else:
        raise ConfigError(f"unknown body spec {spec!r}")
    return body.scaled(scale) if scale != 1.0 else body


@dataclass(frozen=True)
class ExperimentConfig:
    dim: int
    body: object
    operator: OperatorKind
    source: DirectionSource
    n_steps: int
    n_seeds: int
    grid_resolution: int = 256
    snapshot_every: int = None
    output_path: str = None
    seed: int = 0
    vertex_budget: int = DEFAULT_VERTEX_BUDGET

    def validate(self):
        if self.dim not in (2, 3):
            raise ConfigError(f"dim must be 2 or 3, got {self.dim}")
        if self.n_steps < 1:
            raise ConfigError("n_steps must be >= 1")
        if self.n_seeds < 1:
            raise ConfigError("n_seeds must be >= 1")
        if self.grid_resolution < 8:
            raise ConfigError("grid_resolution must be >= 8")
        if self.vertex_budget < 8:
            raise ConfigError("vertex_budget must be >= 8")
        if self.source.dim != self.dim:
            raise ConfigError("direction source dim != config dim")
        make_body(self.body, self.dim)
        return self

    @classmethod
    def from_json(cls, text):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from exc
        try:
            dim = int(obj["dim"])
            op = OperatorKind(obj["operator"])
            source = source_from_config(obj["source"], dim)
            cfg = cls(
                dim=dim,
                body=obj["body"],
                operator=op,
                source=source,
                n_steps=int(obj["n_steps"]),
                n_seeds=int(obj["n_seeds"]),
                grid_resolution=int(obj.get("grid_resolution", 256)),
                snapshot_every=obj.get("snapshot_every"),
                output_path=obj.get("output_path"),
                seed=int(obj.get("seed", obj.get("source", {}).get("seed", 0) or 0)),
                vertex_budget=int(obj.get("vertex_budget", DEFAULT_VERTEX_BUDGET)),
            )
        except (KeyError, ValueError, TypeError) as exc:
            raise ConfigError(f"bad config field: {exc}") from exc
        return cfg.validate()


def run_experiment(config, audit=True):
    """One trajectory per seed; deterministic; streams CSV if configured.

    Per-trajectory aborts are recorded (None placeholder plus an entry
    in the returned aborts dict attribute) and the run continues.
    """
    config.validate()
    body = make_body(config.body, config.dim)
    grid = sphere_grid(config.dim, config.grid_resolution)
    out_dir = config.output_path
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    trajectories = []
    aborts = {}
    for i in range(config.n_seeds):
        rng = make_rng(config.seed, stream=i)
        seq = config.source.generate(rng, config.n_steps)
        try:
            traj = iterate(
                body, seq, config.operator, grid=grid,
                max_vertices=config.vertex_budget,
                snapshot_every=config.snapshot_every, rng=rng,
            )
        except TrajectoryAbortedError as exc:
            aborts[i] = exc
            trajectories.append(None)
            continue
        if audit:
            problems = validate_trajectory(traj)
            if problems:
                raise AssertionError(f"seed {i}: invariant violations {problems}")
        trajectories.append(traj)
        if out_dir:
            traj.to_csv(os.path.join(out_dir, f"traj_{i:04d}.csv"))
    run_experiment.last_aborts = aborts
    return trajectories


@dataclass(frozen=True)
class RateFit:
    """Least-squares decay fit of log d_H against n or sqrt(n)."""

    model: str
    rate: float
    prefactor: float
    fit_range: tuple
    residual: float
    floor_n: int = None

    def to_json(self):
        return json.dumps({
            "model": self.model, "rate": self.rate, "prefactor": self.prefactor,
            "fit_range": list(self.fit_range), "residual": self.residual,
            "floor_n": self.floor_n,
        })


def detect_floor(values, threshold=FLOOR_DETECT):
    """Index of the first of three consecutive non-decreasing values below
    threshold (the numerical floor of the decay), or None."""
    v = np.asarray(values, dtype=np.float64)
    below = v < threshold
    nondec = np.concatenate([np.diff(v) >= 0.0, [False]])
    for i in range(len(v) - 2):
        if below[i] and nondec[i] and below[i + 1] and nondec[i + 1] and below[i + 2]:
            return i
    return None


def fit_rate(traj, model, min_points=10, floor_threshold=FLOOR_DETECT):
    """Fit log(d_H) = log(prefactor) - rate * x, x = n or sqrt(n).

    Accepts a Trajectory or a plain d_H series. The window excludes the
    detected numerical floor (values plateauing below floor_threshold)
    and anything below 1e-12.
    """
    if model not in ("exp_n", "exp_sqrt_n"):
        raise ValueError(f"unknown model {model!r}")
    y = np.asarray(traj.hausdorff if isinstance(traj, Trajectory) else traj,
                   dtype=np.float64)
    n = np.arange(len(y))
    floor_n = detect_floor(y, threshold=floor_threshold)
    usable = y > FLOOR
    if floor_n is not None:
        usable &= n < floor_n
    if not usable.any():
        raise AllAtFloorError("every step is at the numerical floor")
    if usable.sum() < min_points:
        raise TooFewPointsError(
            f"{int(usable.sum())} usable steps < required {min_points}")
    nn, yy = n[usable], y[usable]
    x = np.sqrt(nn) if model == "exp_sqrt_n" else nn.astype(np.float64)
    A = np.column_stack([np.ones_like(x), -x])
    coef, *_ = np.linalg.lstsq(A, np.log(yy), rcond=None)
    resid = np.log(yy) - A @ coef
    return RateFit(
        model=model,
        rate=float(coef[1]),
        prefactor=float(np.exp(coef[0])),
        fit_range=(int(nn[0]), int(nn[-1])),
        residual=float(np.sqrt(np.mean(resid**2))),
        floor_n=floor_n,
    )


def theoretical_c_bound(dim, alpha):
    """Upper bound on admissible Minkowski rates: -(1/2d) log(alpha(d-1)/d)."""
    if alpha <= 0.0:
        raise AlphaTooLargeError("alpha must be positive")
    arg = alpha * (dim - 1) / dim
    if arg >= 1.0:
        raise AlphaTooLargeError(
            f"alpha={alpha} >= d/(d-1)={dim / (dim - 1)}: bound nonpositive")
    return -math.log(arg) / (2.0 * dim)


@dataclass(frozen=True)
class N0Estimate:
    """Per-seed stabilization times of the event {d_H <= r^n for n >= n0}."""

    threshold_rule: float
    samples: np.ndarray
    tail: np.ndarray  # tail[m] = P(n0 > m)
    floor_flags: np.ndarray = None

    def tail_log(self):
        with np.errstate(divide="ignore"):
            return np.log(self.tail)

    def to_json(self):
        return json.dumps({
            "threshold_rule": self.threshold_rule,
            "samples": [int(s) for s in self.samples],
            "tail": [float(t) for t in self.tail],
            "floor_flags": [bool(f) for f in self.floor_flags],
        })


def estimate_n0(trajectories, r):
    """n0 per trajectory: the first index from which d_H <= r^n onward.

    Trajectories whose last observed step still violates the threshold
    never stabilize within the observation window; if more than half do,
    the rate is too aggressive for the data.
    """
    if not 0.0 < r < 1.0:
        raise ValueError("r must be in (0, 1)")
    if len(trajectories) < 2:
        raise TooFewPointsError("need at least 2 trajectories")
    samples = []
    flags = []
    unstable = 0
    for traj in trajectories:
        y = traj.hausdorff if isinstance(traj, Trajectory) else np.asarray(traj)
        n = np.arange(len(y))
        viol = y > r**n
        if viol[-1]:
            unstable += 1
            continue
        n0 = int(np.max(n[viol]) + 1) if viol.any() else 0
        floor = detect_floor(y)
        flags.append(floor is not None and floor < n0)
        samples.append(n0)
    if unstable > 0.5 * len(trajectories):
        raise RateTooAggressiveError(
            f"{unstable}/{len(trajectories)} seeds never satisfied d_H <= r^n")
    samples = np.array(samples, dtype=np.int64)
    m = np.arange(int(samples.max()) + 1) if len(samples) else np.arange(1)
    tail = np.array([(samples > mm).mean() for mm in m])
    return N0Estimate(threshold_rule=r, samples=samples, tail=tail,
                      floor_flags=np.array(flags, dtype=bool))


def equivalence_probe(seq, bodies, tail_offsets, tol, grid=None,
                      vertex_budget=DEFAULT_VERTEX_BUDGET):
    """Do tails of one direction sequence round under both operators?

    For each body and offset k, iterates both operators on seq[k:] and
    reports the final Hausdorff distances to the respective limit balls
    with a (steiner_rounds, minkowski_rounds) verdict at tolerance tol.
    A disagreement where one operator converges while the other clearly
    diverges (final distance > 10 tol) is flagged as an anomaly.
    """
    seq = np.atleast_2d(np.asarray(seq, dtype=np.float64))
    entries = []
    anomaly = False
    for bi, body in enumerate(bodies):
        for k in tail_offsets:
            if k >= len(seq):
                raise ValueError(f"tail offset {k} >= sequence length {len(seq)}")
            tail = seq[k:]
            ts = iterate(body, tail, OperatorKind.STEINER, grid=grid,
                         max_vertices=vertex_budget, start_index=k)
            tm = iterate(body, tail, OperatorKind.MINKOWSKI, grid=grid,
                         max_vertices=vertex_budget, start_index=k)
            s_dh, m_dh = float(ts.hausdorff[-1]), float(tm.hausdorff[-1])
            s_ok, m_ok = s_dh <= tol, m_dh <= tol
            entry_anom = (s_ok and m_dh > 10.0 * tol) or (m_ok and s_dh > 10.0 * tol)
            anomaly |= entry_anom
            entries.append({
                "body_index": bi, "offset": int(k),
                "steiner_dh": s_dh, "minkowski_dh": m_dh,
                "steiner_rounds": s_ok, "minkowski_rounds": m_ok,
                "anomaly": entry_anom,
            })
    return {"tol": tol, "entries": entries, "anomaly": anomaly}


def mean_radius_decay(config, trajectories=None):
    """Fit the seed-mean mean-radius gap E L(S_n A) - r(A) to c1 e^{-c2 sqrt(n)}.

    Requires a Steiner config whose body has unit equivalent radius
    (volume kappa_d), the normalization under which the gap target is 1.
    Returns (RateFit, gap, stderr).
    """
    if config.operator is not OperatorKind.STEINER:
        raise ConfigError("mean_radius_decay requires a Steiner config")
    body = make_body(config.body, config.dim)
    if abs(volume(body) / unit_ball_volume(config.dim) - 1.0) > 1e-9:
        raise ConfigError("body must be pre-scaled to the unit ball's volume")
    if trajectories is None:
        trajectories = run_experiment(config)
    runs = [t for t in trajectories if t is not None]
    L = np.array([t.mean_radius for t in runs])
    gap = L.mean(axis=0) - 1.0
    stderr = L.std(axis=0, ddof=1) / math.sqrt(len(runs))
    if (gap < -1e-6).any():
        raise AssertionError("mean-radius gap significantly negative")
    pos = np.maximum(gap, FLOOR)
    # the gap bottoms out at the seed-noise/pruning plateau rather than
    # at machine precision; widen the floor detector accordingly
    threshold = max(FLOOR_DETECT, 10.0 * float(pos.min()))
    fit = fit_rate(pos, "exp_sqrt_n", floor_threshold=threshold)
    return fit, gap, stderr
