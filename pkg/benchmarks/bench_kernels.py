"""Time the jitted kernels against the pure-Python fallback path.

The fallback is the exact mode users get with RANKBOUND_DISABLE_NUMBA=1,
so the comparison re-runs this script in a subprocess with that flag set
(calling `.py_func` in-process would still hit jitted inner kernels from
composite ones and flatter nobody).  Output is one aligned row per
kernel: best-of-N wall time for each mode and the speedup.

    python3 benchmarks/bench_kernels.py          # default sizes
    python3 benchmarks/bench_kernels.py --full   # larger inputs
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from rankbound import NUMBA_ENABLED
from rankbound import kernels as kn


def _best_of(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def _table(seed, nodes):
    rng = np.random.Generator(np.random.Philox(seed))
    xs = np.sort(rng.uniform(0.0, 1.0, nodes))
    xs[0], xs[-1] = 0.0, 1.0
    ys = np.concatenate(([0.0], np.cumsum(rng.uniform(0.0, 1.0, nodes - 1))))
    ys /= ys[-1]
    masses = np.diff(xs) * rng.uniform(0.5, 2.0, nodes - 1)
    return xs, ys, masses


def _cases(full):
    rng = np.random.Generator(np.random.Philox(41))
    n_keys = 10**5 if full else 2 * 10**4
    n_queries = 10**4 if full else 2000
    keys = np.sort(rng.uniform(0.0, 1.0, n_keys))
    queries = rng.uniform(0.0, 1.0, n_queries)
    k_model = 16
    bps = np.linspace(0.0, 1.0, k_model + 1)[1:-1]
    slopes = np.full(k_model, float(n_keys))
    intercepts = np.zeros(k_model)
    w = 2 * int(np.sqrt(n_keys))

    xs, ys, masses = _table(7, 600 if full else 300)
    xs1, ys1, masses1 = _table(8, 160 if full else 80)
    qz_nodes = 1500 if full else 600
    us = np.sort(rng.uniform(0.0, 1.0, qz_nodes))
    qmass = np.full(qz_nodes - 1, 1.0 / (qz_nodes - 1))

    batch = (keys, queries, bps, slopes, intercepts)
    return [
        ("rank_batch/linear", kn.rank_batch, batch + (0, w)),
        ("rank_batch/exp", kn.rank_batch, batch + (1, w)),
        ("rank_batch/binary", kn.rank_batch, batch + (2, w)),
        ("dp_p0", kn.dp_p0, (xs, ys, masses, 8)),
        ("p1_cost_matrix", kn.p1_cost_matrix, (xs1, ys1, masses1, 60)),
        ("dp_quantizer", kn.dp_quantizer, (us, qmass, 16)),
    ]


def _measure(repeat, full):
    rows = []
    for name, fn, fnargs in _cases(full):
        fn(*fnargs)  # warm up / compile outside the timed region
        rows.append((name, _best_of(fn, fnargs, repeat)))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3, help="take the best of this many runs")
    ap.add_argument("--full", action="store_true", help="larger inputs (slower fallback)")
    ap.add_argument("--emit", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    here = _measure(args.repeat, args.full)
    if args.emit:
        for name, t in here:
            print(f"{name};{t:.9f}")
        return

    if not NUMBA_ENABLED:
        print("numba acceleration is OFF; only the fallback path exists here")
        for name, t in here:
            print(f"{name:<20}{t * 1e3:>10.2f}ms")
        return

    cmd = [sys.executable, os.path.abspath(__file__), "--emit", "--repeat", str(args.repeat)]
    if args.full:
        cmd.append("--full")
    env = dict(os.environ, RANKBOUND_DISABLE_NUMBA="1")
    out = subprocess.run(cmd, capture_output=True, text=True, env=env, check=True).stdout
    pure = dict(line.split(";") for line in out.splitlines() if ";" in line)

    header = f"{'kernel':<20}{'jitted':>12}{'fallback':>12}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, jt in here:
        pt = float(pure[name])
        print(f"{name:<20}{jt * 1e3:>10.2f}ms{pt * 1e3:>10.2f}ms{pt / jt:>9.1f}x")


if __name__ == "__main__":
    main()
