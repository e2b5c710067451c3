"""Timing comparison of the numba and numpy pair-sum kernels.

Usage: python benchmarks/bench_accel.py [--n 2000] [--d 64] [--repeats 3]
"""

import argparse
import time

import numpy as np

from pseudoeval import accel


def _time(func, args, repeats):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        func(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--n", type=int, default=2000)
    parser.add_argument("--d", type=int, default=64)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    x = rng.normal(size=(args.n, args.d))
    y = rng.normal(size=(args.n, args.d)) + 0.1

    cases = [
        ("linear", accel.pair_sums_linear_numpy, (x, y)),
        ("gaussian", accel.pair_sums_gaussian_numpy, (x, y, 2.0)),
        ("polynomial", accel.pair_sums_polynomial_numpy, (x, y, 1.0 / args.d, 1.0, 3)),
    ]
    numba_funcs = {}
    if accel.HAS_NUMBA:
        numba_funcs = {
            "linear": accel.pair_sums_linear_numba,
            "gaussian": accel.pair_sums_gaussian_numba,
            "polynomial": accel.pair_sums_polynomial_numba,
        }
        # trigger compilation outside the timed region
        tiny = np.zeros((2, 2))
        numba_funcs["linear"](tiny, tiny)
        numba_funcs["gaussian"](tiny, tiny, 1.0)
        numba_funcs["polynomial"](tiny, tiny, 1.0, 1.0, 3)
    else:
        print("numba unavailable or disabled; timing numpy path only")

    print(f"pair sums, n={args.n}, d={args.d}, best of {args.repeats}")
    for name, numpy_func, call_args in cases:
        t_np = _time(numpy_func, call_args, args.repeats)
        line = f"{name:>11}: numpy {t_np * 1e3:8.1f} ms"
        if name in numba_funcs:
            t_nb = _time(numba_funcs[name], call_args, args.repeats)
            line += f" | numba {t_nb * 1e3:8.1f} ms | speedup x{t_np / t_nb:.2f}"
        print(line)


if __name__ == "__main__":
    main()
