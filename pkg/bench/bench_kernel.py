#!/usr/bin/env python3
"""Benchmark: compiled scan kernel vs the pure-Python fallback.

Runs the bounded minimal-set scan over the primes with both kernels and
reports wall times and the speedup.  Usage:

    python3 bench/bench_kernel.py [--bound 10000000] [--base 10]
"""

import argparse
import time

import numpy as np

from minset._kernel import KERNEL, scan_segment_py
from minset.oracles import Primes


def run(bound: int, base: int, kernel) -> tuple[float, list[int]]:
    patterns: list[str] = []
    survivors: list[int] = []
    t0 = time.perf_counter()
    for block in Primes().value_blocks(bound):
        survivors.extend(kernel(np.ascontiguousarray(block, dtype=np.int64),
                                patterns, base))
    return time.perf_counter() - t0, survivors


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--bound", type=int, default=10**7)
    parser.add_argument("--base", type=int, default=10)
    args = parser.parse_args()

    py_time, py_result = run(args.bound, args.base, scan_segment_py)
    print(f"python kernel:   {py_time:8.3f} s  ({len(py_result)} elements)")

    if KERNEL == "compiled":
        from minset._scan import scan_segment
        c_time, c_result = run(args.bound, args.base, scan_segment)
        print(f"compiled kernel: {c_time:8.3f} s  ({len(c_result)} elements)")
        assert c_result == py_result, "kernels disagree"
        print(f"speedup: {py_time / c_time:.1f}x")
    else:
        print("compiled kernel not built; only the fallback was timed")


if __name__ == "__main__":
    main()
