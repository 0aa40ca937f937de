"""Compare the numba and pure-numpy Monte-Carlo kernels.

    python3 benchmarks/bench_kernels.py [--trials 200000] [--repeat 5]

Both backends are called directly, so the environment flag is irrelevant here.
"""
import argparse
import time

import numpy as np

from oacqam import _kernels

CASES = [(10, 4, False), (100, 8, False), (100, 8, True)]


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=200_000)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not installed")

    print(f"{'K':>4} {'q':>3} {'mode':<16} {'numpy s':>9} {'numba s':>9} {'speedup':>8}  identical")
    for K, q, grid in CASES:
        call = (7, 0, args.trials, K, q, 0.3, 0.2, 0.05, grid)
        _kernels.squared_errors_numba(*call[:2], 16, *call[3:])  # compile outside the timer
        t_np, e_np = best_time(lambda: _kernels.squared_errors_numpy(*call), args.repeat)
        t_nb, e_nb = best_time(lambda: _kernels.squared_errors_numba(*call), args.repeat)
        mode = "uniform-grid" if grid else "per-node-uniform"
        print(f"{K:>4} {q:>3} {mode:<16} {t_np:>9.4f} {t_nb:>9.4f} {t_np / t_nb:>7.1f}x  {np.array_equal(e_np, e_nb)}")


if __name__ == "__main__":
    main()
