"""Numba vs numpy timing for the swap-search kernels.

    python benchmarks/bench_kernels.py            # kernel table
    python benchmarks/bench_kernels.py --search   # also end-to-end searches per backend

The end-to-end mode runs each backend in its own interpreter, selected with
CELLPLAN_NO_NUMBA, exactly as a user would.
"""
import argparse
import json
import os
import subprocess
import sys
import time

import numpy as np

from cellplan import _kernels


def best_of(fn, reps):
    out = float("inf")
    for _ in range(reps):
        t = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t)
    return out


def kernel_table(sizes, k, reps, on_demand):
    if not _kernels.HAVE_NUMBA:
        sys.exit("numba is not installed; nothing to compare")
    print(f"swap evaluation, k={k}, distances {'on demand' if on_demand else 'precomputed'}")
    print(f"{'n':>6} {'numpy ms':>10} {'numba ms':>10} {'speedup':>8}  identical")
    for n in sizes:
        rng = np.random.default_rng(n)
        xy = rng.uniform(0, 1000, size=(n, 2))
        w = rng.integers(1, 100, size=n).astype(float)
        dmat = _kernels.empty_matrix() if on_demand else _kernels.pairwise_distances(xy)
        med = np.sort(rng.choice(n, size=k, replace=False)).astype(np.int64)
        cand = np.setdiff1d(np.arange(n), med).astype(np.int64)

        near_np = _kernels.nearest_two_numpy(xy, dmat, med)
        near_nb = _kernels.nearest_two_numba(xy, dmat, med)
        a = _kernels.swap_costs_numpy(xy, dmat, w, med, cand, *near_np)
        b = _kernels.swap_costs_numba(xy, dmat, w, med, cand, *near_nb)
        t_np = best_of(lambda: _kernels.swap_costs_numpy(xy, dmat, w, med, cand, *near_np), reps)
        t_nb = best_of(lambda: _kernels.swap_costs_numba(xy, dmat, w, med, cand, *near_nb), reps)
        print(f"{n:>6} {t_np * 1e3:>10.2f} {t_nb * 1e3:>10.2f} {t_np / t_nb:>8.1f}  {np.array_equal(a, b)}")


_SEARCH = """
import json, time
from cellplan import BACKEND, generate_map, run_swap_search, SyntheticSpec, CostModel
out = []
for n, k in {cases}:
    m = generate_map(SyntheticSpec(n, 20 * n, 1e6, "heterogeneous", seed=3))
    run_swap_search(m, 2, 0, CostModel.LOAD_WEIGHTED)  # warm-up / JIT
    t = time.perf_counter()
    res = run_swap_search(m, k, 0, CostModel.LOAD_WEIGHTED)
    out.append([n, k, time.perf_counter() - t, res.iterations, res.medoids])
print(json.dumps({{"backend": BACKEND, "rows": out}}))
"""


def search_table(cases):
    results = {}
    for flag in ("0", "1"):
        env = dict(os.environ, CELLPLAN_NO_NUMBA=flag)
        proc = subprocess.run([sys.executable, "-c", _SEARCH.format(cases=cases)],
                              env=env, capture_output=True, text=True, check=True)
        doc = json.loads(proc.stdout)
        results[doc["backend"]] = doc["rows"]
    print("\nfull load-weighted swap search")
    print(f"{'n':>6} {'k':>4} {'iters':>6} {'numpy s':>9} {'numba s':>9}  same medoids")
    for a, b in zip(results["numpy"], results["numba"]):
        print(f"{a[0]:>6} {a[1]:>4} {a[3]:>6} {a[2]:>9.3f} {b[2]:>9.3f}  {a[4] == b[4]}")


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--sizes", type=int, nargs="+", default=[100, 200, 400, 800, 1600])
    ap.add_argument("--k", type=int, default=8)
    ap.add_argument("--reps", type=int, default=5)
    ap.add_argument("--on-demand", action="store_true", help="compute distances inside the kernel")
    ap.add_argument("--search", action="store_true")
    args = ap.parse_args()
    kernel_table(args.sizes, args.k, args.reps, args.on_demand)
    if args.search:
        search_table([(100, 10), (300, 20), (600, 30)])


if __name__ == "__main__":
    main()
