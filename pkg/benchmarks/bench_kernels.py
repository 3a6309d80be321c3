"""Compiled kernels vs the numpy fallback on representative inputs.

Run with ``python3 benchmarks/bench_kernels.py``; prints one line per kernel
with the best-of-N time of each backend and the speed-up.
"""

import argparse
import timeit

import numpy as np

from sbpcodes import _fallback

try:
    from sbpcodes import _kernels
except ImportError:
    _kernels = None

Q = 2**31 - 1


def cases(rng):
    M = rng.integers(0, Q, size=(120, 120), dtype=np.int64)
    rhs = rng.integers(0, Q, size=(120, 16), dtype=np.int64)
    A = rng.integers(0, Q, size=(96, 96), dtype=np.int64)
    B = rng.integers(0, Q, size=(96, 96), dtype=np.int64)
    d = 1e-3 + rng.exponential(0.01, size=(450, 500))
    c = np.cumsum(d, axis=1)
    return {
        "solve_mod 120x120, 16 rhs": ("solve_mod", (M, rhs, Q)),
        "matmul_mod 96x96x96": ("matmul_mod", (A, B, Q)),
        "kth_completion 450x500, k=49999": ("kth_completion", (d, 49999)),
        "kth_sorted_rows 450x500, k=25900": ("kth_sorted_rows", (c, 500, 25900)),
    }


def best(fn, args, repeat):
    return min(timeit.repeat(lambda: fn(*args), number=1, repeat=repeat))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if _kernels is None:
        print("compiled extension not built; only the fallback can be timed")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':40s} {'python':>10s} {'cython':>10s} {'speed-up':>9s}")
    for label, (name, fargs) in cases(rng).items():
        slow = best(getattr(_fallback, name), fargs, args.repeat)
        if _kernels is None:
            print(f"{label:40s} {slow * 1e3:9.2f}ms {'-':>10s} {'-':>9s}")
            continue
        fast = best(getattr(_kernels, name), fargs, args.repeat)
        a, b = getattr(_fallback, name)(*fargs), getattr(_kernels, name)(*fargs)
        if not np.array_equal(np.asarray(a), np.asarray(b)):
            raise SystemExit(f"{name}: backends disagree")
        print(f"{label:40s} {slow * 1e3:9.2f}ms {fast * 1e3:9.2f}ms {slow / fast:8.1f}x")


if __name__ == "__main__":
    main()
