"""Compare the compiled and pure-Python cascade kernels.

    python benchmarks/bench_backends.py --n 200 800 --sims 2000

Both kernels consume the same counter-based random stream, so besides timing
the script checks that they return identical (sum, sum of squares) totals.
"""

import argparse
import time

import numpy as np

from dycla import _kernels_py
from dycla.diffusion import SimStream
from dycla.graph import generate_synthetic

try:
    from dycla import _kernels as _kernels_cy
except ImportError:
    _kernels_cy = None


def time_batch(kernels, args, sims, repeat):
    best, result = float("inf"), None
    for _ in range(repeat):
        tic = time.perf_counter()
        result = kernels.cascade_batch(*args, 0, sims)
        best = min(best, time.perf_counter() - tic)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, nargs="+", default=[200, 800],
                        help="vertex counts to benchmark")
    parser.add_argument("--avg-degree", type=float, default=8.0,
                        help="expected out-degree of the random graph")
    parser.add_argument("--k", type=int, default=5, help="seed set size")
    parser.add_argument("--sims", type=int, default=2000, help="cascades per batch")
    parser.add_argument("--repeat", type=int, default=3, help="best-of repetitions")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if _kernels_cy is None:
        print("compiled extension not built; only the Python kernel is available")

    print(f"{'N':>6} {'edges':>7} {'python us/casc':>15} {'cython us/casc':>15} "
          f"{'speedup':>8} {'same':>5}")
    for n in args.n:
        snap = generate_synthetic(n, 1, min(args.avg_degree / (n - 1), 1.0),
                                  rng_seed=args.seed)[0]
        seeds = np.arange(args.k, dtype=np.int64)
        kargs = (snap.indptr, snap.indices, snap.probs, seeds, n, SimStream(args.seed).key)

        py_t, py_res = time_batch(_kernels_py, kargs, args.sims, args.repeat)
        py_us = py_t / args.sims * 1e6
        if _kernels_cy is not None:
            cy_t, cy_res = time_batch(_kernels_cy, kargs, args.sims, args.repeat)
            cy_us = cy_t / args.sims * 1e6
            print(f"{n:>6} {snap.n_edges:>7} {py_us:>15.2f} {cy_us:>15.3f} "
                  f"{py_us / cy_us:>7.0f}x {str(tuple(py_res) == tuple(cy_res)):>5}")
        else:
            print(f"{n:>6} {snap.n_edges:>7} {py_us:>15.2f} {'-':>15} {'-':>8} {'-':>5}")


if __name__ == "__main__":
    main()
