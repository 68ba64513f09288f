#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Run as ``python benchmarks/bench_kernels.py``; both backends are imported
directly so the comparison works regardless of which one the package selects.
"""

import time

import numpy as np

from djcqsl._kernels import _fallback

try:
    from djcqsl._kernels import _core
except ImportError:
    _core = None

CASES = [
    ("weak coupling, long horizon", 0.1, 0.1, 1000.0, 200_000),
    ("strong coupling, oscillatory", 1e4, 0.1, 100.0, 200_000),
    ("critical damping", 0.5, 0.0, 50.0, 200_000),
]


def _time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    if _core is None:
        print("compiled backend unavailable; timing the fallback only")
    header = f"{'case':34s} {'kernel':16s} {'n':>8s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))
    for label, g, d, tmax, n in CASES:
        t = np.linspace(0.0, tmax, n)
        for kernel in ("propagator_table", "path_table"):
            if kernel == "propagator_table":
                py = lambda: _fallback.propagator_table(g, d, t)
                cy = (lambda: _core.propagator_table(g, d, t)) if _core else None
            else:
                py = lambda: _fallback.path_table(g, d, 0.5, 0.5 + 0.0j, t)
                cy = (lambda: _core.path_table(g, d, 0.5, 0.5 + 0.0j, t)) if _core else None
            t_py = _time(py) * 1e3
            if cy is None:
                print(f"{label:34s} {kernel:16s} {n:8d} {t_py:10.2f} {'-':>10s} {'-':>8s}")
            else:
                t_cy = _time(cy) * 1e3
                print(f"{label:34s} {kernel:16s} {n:8d} {t_py:10.2f} {t_cy:10.2f} {t_py / t_cy:7.1f}x")


if __name__ == "__main__":
    main()
