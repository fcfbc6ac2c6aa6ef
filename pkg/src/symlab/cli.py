"""Command-line interface.

Subcommands: run, fit, n0, probe, harmonics, bound. Exit codes:
0 success, 2 validation/config error, 3 anomaly flagged.
"""

import argparse
import glob
import json
import os
import sys

import numpy as np

from .directions import make_rng, sample_haar
from .errors import SymlabError
from .harmonics import contraction_ratio, contraction_factor
from .lab import (
    ExperimentConfig,
    N0Estimate,
    equivalence_probe,
    estimate_n0,
    fit_rate,
    make_body,
    run_experiment,
    theoretical_c_bound,
)
from .symmetrize import Trajectory

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ANOMALY = 3


def _cmd_run(args):
    with open(args.config) as fh:
        config = ExperimentConfig.from_json(fh.read())
    trajectories = run_experiment(config)
    aborted = sum(1 for t in trajectories if t is None)
    print(json.dumps({
        "seeds": config.n_seeds,
        "steps": config.n_steps,
        "aborted": aborted,
        "output_path": config.output_path,
    }))
    return EXIT_OK


def _cmd_fit(args):
    traj = Trajectory.from_csv(args.trajectory)
    fit = fit_rate(traj, args.model)
    print(fit.to_json())
    return EXIT_OK


def _cmd_n0(args):
    paths = sorted(glob.glob(os.path.join(args.csv_dir, "*.csv")))
    if not paths:
        print(f"no CSV files in {args.csv_dir}", file=sys.stderr)
        return EXIT_CONFIG
    trajectories = [Trajectory.from_csv(p) for p in paths]
    est = estimate_n0(trajectories, args.rate)
    print(est.to_json())
    return EXIT_OK


def _cmd_probe(args):
    with open(args.config) as fh:
        obj = json.loads(fh.read())
    config = ExperimentConfig.from_json(json.dumps(obj))
    rng = make_rng(config.seed, stream=0)
    seq = config.source.generate(rng, config.n_steps)
    body = make_body(config.body, config.dim)
    offsets = obj.get("tail_offsets", [0])
    tol = obj.get("tol", 0.02)
    report = equivalence_probe(seq, [body], offsets, tol,
                               vertex_budget=config.vertex_budget)
    print(json.dumps(report))
    return EXIT_ANOMALY if report["anomaly"] else EXIT_OK


def _cmd_harmonics(args):
    rng = make_rng(args.seed)
    est, se = contraction_ratio(args.dim, args.k, args.trials, rng)
    print(json.dumps({
        "dim": args.dim, "k": args.k, "trials": args.trials,
        "estimate": est, "stderr": se,
        "theoretical": contraction_factor(args.dim, args.k),
    }))
    return EXIT_OK


def _cmd_bound(args):
    value = theoretical_c_bound(args.dim, args.alpha)
    print(json.dumps({"dim": args.dim, "alpha": args.alpha, "bound": value}))
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(
        prog="symlab",
        description="Iterated Steiner/Minkowski symmetrization experiments.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("run", help="run an experiment config")
    sp.add_argument("config", help="path to JSON config")
    sp.set_defaults(func=_cmd_run)

    sp = sub.add_parser("fit", help="fit a decay rate to a trajectory CSV")
    sp.add_argument("trajectory", help="path to trajectory CSV")
    sp.add_argument("--model", choices=["exp_n", "exp_sqrt_n"], required=True)
    sp.set_defaults(func=_cmd_fit)

    sp = sub.add_parser("n0", help="estimate stabilization times from CSVs")
    sp.add_argument("csv_dir", help="directory of trajectory CSVs")
    sp.add_argument("--rate", type=float, required=True,
                    help="threshold rate r in (0,1)")
    sp.set_defaults(func=_cmd_n0)

    sp = sub.add_parser("probe", help="equivalence probe of both operators")
    sp.add_argument("config", help="path to JSON config")
    sp.set_defaults(func=_cmd_probe)

    sp = sub.add_parser("harmonics", help="MC contraction ratio estimate")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=_cmd_harmonics)

    sp = sub.add_parser("bound", help="theoretical rate bound")
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.set_defaults(func=_cmd_bound)

    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (SymlabError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
