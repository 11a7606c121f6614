#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times three representative workloads (steady-state integration, a small
density grid, one agent-based realization) on both backends and prints the
speedups. The backends are also cross-checked for exact agreement while
we're at it, since the numbers are already in hand.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from cprdyn.kernels import get_backend

ARGS = (0.0, 0.0, 0.0, 0.0, -1.0, 2.0, 0.7, 1.1)  # minimal model, w = -1


def time_best(fn, repeat):
    best = float("inf")
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_integrate(backend):
    return backend.integrate_terminal(*ARGS, 0.5, 0.5, 1e-3, 500000, 1001, 1e-9, 1e-6)


def bench_density(backend):
    r0 = np.linspace(0.1, 0.9, 6)
    x0 = np.linspace(0.3, 0.9, 6)
    out_r = np.empty((6, 6))
    out_x = np.empty((6, 6))
    out_c = np.empty((6, 6), dtype=np.int8)
    backend.density_chunk(*ARGS, r0, x0, 1e-3, 500000, 1001, 1e-9, 1e-6,
                          0, 6, out_r, out_x, out_c)
    return out_r, out_x, out_c


def bench_abm(backend):
    n, t_end = 500, 50
    strategies = np.zeros(n, dtype=np.int8)
    strategies[: n // 2] = 1
    out_r = np.empty(t_end + 1)
    out_x = np.empty(t_end + 1)
    backend.abm_realization(*ARGS, 0.5, n, t_end, 12345, strategies, True,
                            np.zeros(1, dtype=np.int64), np.empty(0, dtype=np.int32),
                            out_r, out_x)
    return out_r, out_x


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    compiled = get_backend("compiled")
    pure = get_backend("python")

    workloads = [
        ("integrate to steady state", bench_integrate),
        ("density grid 6x6", bench_density),
        ("abm realization N=500 t=50", bench_abm),
    ]
    print(f"{'workload':<30} {'compiled':>12} {'python':>12} {'speedup':>9}")
    for name, fn in workloads:
        t_c, r_c = time_best(lambda: fn(compiled), args.repeat)
        t_p, r_p = time_best(lambda: fn(pure), args.repeat)
        flat_c = np.hstack([np.ravel(np.asarray(part, dtype=float)) for part in r_c])
        flat_p = np.hstack([np.ravel(np.asarray(part, dtype=float)) for part in r_p])
        match = "" if np.array_equal(flat_c, flat_p) else "  (MISMATCH!)"
        print(f"{name:<30} {t_c:>11.4f}s {t_p:>11.4f}s {t_p / t_c:>8.1f}x{match}")


if __name__ == "__main__":
    main()
