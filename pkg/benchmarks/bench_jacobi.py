"""Compare the compiled and pure-Python Jacobi kernels.

Usage: python3 benchmarks/bench_jacobi.py [--sizes 10 20 40 80] [--repeats 3]
"""
import argparse
import time

import numpy as np

from graph_cubature import build_laplacian, kernels
from graph_cubature.generators import gen_random_connected


def time_kernel(fn, lap, repeats):
    best = float("inf")
    for _ in range(repeats):
        a = np.ascontiguousarray(lap.copy())
        v = np.eye(lap.shape[0])
        t0 = time.perf_counter()
        fn(a, v, 1e-12 * np.linalg.norm(lap), 30)
        best = min(best, time.perf_counter() - t0)
    return best, a, v


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[10, 20, 40, 80])
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    if kernels.compiled_jacobi is None:
        print("compiled kernel not built; timing the Python kernel only")
    print(f"{'n':>5} {'python ms':>11} {'compiled ms':>12} {'speedup':>8} {'identical':>10}")
    for n in args.sizes:
        lap = build_laplacian(gen_random_connected(n, 0.3, args.seed + n))
        tp, ap_, vp = time_kernel(kernels.python_jacobi, lap, args.repeats)
        if kernels.compiled_jacobi is None:
            print(f"{n:>5} {tp * 1e3:>11.2f} {'-':>12} {'-':>8} {'-':>10}")
            continue
        tc, ac, vc = time_kernel(kernels.compiled_jacobi, lap, args.repeats)
        same = np.array_equal(ap_, ac) and np.array_equal(vp, vc)
        print(f"{n:>5} {tp * 1e3:>11.2f} {tc * 1e3:>12.3f} {tp / tc:>8.0f} {str(same):>10}")


if __name__ == "__main__":
    main()
