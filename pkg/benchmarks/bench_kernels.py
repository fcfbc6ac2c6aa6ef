"""Benchmark the compiled kernel backend against the numpy fallback.

Times the four dispatched kernels on random convex polygons of several
sizes plus an end-to-end symmetrization trajectory. Run from the repo
root:

    python3 benchmarks/bench_kernels.py [--sizes 16 64 256 1024] [--repeat 200]
"""

import argparse
import time

import numpy as np
from scipy.spatial import ConvexHull

from symlab._kernels import _numpy_backend

try:
    from symlab._kernels import _core
except ImportError:
    _core = None


def random_polygon(rng, n):
    ang = np.sort(rng.uniform(0.0, 2.0 * np.pi, n))
    rad = rng.uniform(0.5, 2.0, n)
    pts = np.column_stack([rad * np.cos(ang), rad * np.sin(ang)])
    return pts[ConvexHull(pts).vertices]


def timeit(fn, args_list, repeat):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        for args in args_list:
            fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best / len(args_list)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[16, 64, 256, 1024])
    ap.add_argument("--repeat", type=int, default=50)
    ap.add_argument("--cases", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if _core is None:
        print("compiled backend unavailable; nothing to compare")
        return

    rng = np.random.default_rng(args.seed)
    kernels = [
        ("minkowski_sum", "convex_minkowski_sum",
         lambda P, Q, c, s, r: (P, Q)),
        ("steiner", "steiner_symmetral",
         lambda P, Q, c, s, r: (P, c, s)),
        ("disk_overlap", "disk_overlap_area",
         lambda P, Q, c, s, r: (P, r)),
        ("disk_hausdorff", "disk_hausdorff",
         lambda P, Q, c, s, r: (P, r)),
    ]

    print(f"{'kernel':<16}{'n':>6}{'numpy us':>12}{'cython us':>12}{'speedup':>9}")
    for n in args.sizes:
        cases = []
        for _ in range(args.cases):
            t = rng.uniform(0.0, 2.0 * np.pi)
            cases.append((random_polygon(rng, n), random_polygon(rng, n),
                          np.cos(t), np.sin(t), rng.uniform(0.5, 2.0)))
        for label, name, pick in kernels:
            args_list = [pick(*c) for c in cases]
            t_np = timeit(getattr(_numpy_backend, name), args_list, args.repeat)
            t_cy = timeit(getattr(_core, name), args_list, args.repeat)
            print(f"{label:<16}{n:>6}{t_np * 1e6:>12.1f}{t_cy * 1e6:>12.1f}"
                  f"{t_np / t_cy:>9.2f}x")


if __name__ == "__main__":
    main()
