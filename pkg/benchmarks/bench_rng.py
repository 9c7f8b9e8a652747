#!/usr/bin/env python3
"""Compare the compiled variate-stream kernel against the pure-Python path.

Run after `python setup.py build_ext --inplace`:

    python benchmarks/bench_rng.py [count]

Also verifies the two paths agree bit for bit before timing them.
"""

import pathlib
import sys
import time

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).resolve().parents[1] / "src"))

from pathtrek import _rngpure

try:
    from pathtrek import _rngkernel
except ImportError:
    _rngkernel = None


def time_fill(fill, seed, out, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fill(seed, out)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    count = int(sys.argv[1]) if len(sys.argv) > 1 else 1_000_000
    seed = 42
    pure_out = np.empty(count)
    t_pure = time_fill(_rngpure.normal_fill, seed, pure_out)
    print(f"normal draws: {count:,}")
    print(f"  pure python : {t_pure * 1e3:9.1f} ms  ({count / t_pure / 1e6:.2f} M/s)")
    if _rngkernel is None:
        print("  cython      : not built (python setup.py build_ext --inplace)")
        return
    cy_out = np.empty(count)
    t_cy = time_fill(_rngkernel.normal_fill, seed, cy_out)
    match = "bit-identical" if pure_out.tobytes() == cy_out.tobytes() else "MISMATCH"
    print(f"  cython      : {t_cy * 1e3:9.1f} ms  ({count / t_cy / 1e6:.2f} M/s)")
    print(f"  speedup     : {t_pure / t_cy:9.1f} x  [{match}]")


if __name__ == "__main__":
    main()
