#!/usr/bin/env python3
"""Benchmark the compiled convolution kernel against the numpy fallback.

The kernel is the package's hot loop: every exact tail, every containment
check and the whole ratio sweep funnel through it.  Run after installing:

    python benchmarks/bench_convolve.py
"""

import math
import time

import numpy as np

from sharptail._convolve_py import convolve_repeat as kernel_python

try:
    from sharptail._convolve import convolve_repeat as kernel_compiled
except ImportError:
    kernel_compiled = None

CASES = [
    # (label, offsets, probs, repetitions)
    ("+/-1 sum, n=10^4", np.array([0, 2], dtype=np.int64),
     np.array([0.5, 0.5]), 10_000),
    ("two-point v=0.25, n=2000", np.array([0, 5], dtype=np.int64),
     np.array([0.8, 0.2]), 2_000),
    ("five atoms on /20 grid, n=1000",
     np.array([0, 7, 19, 28, 40], dtype=np.int64),
     np.array([0.25, 0.20, 0.15, 0.25, 0.15]), 1_000),
]


def run(kernel, offsets, probs, times):
    start = np.ones(1)
    t0 = time.perf_counter()
    out = kernel(start, offsets, probs, times)
    return time.perf_counter() - t0, out


def main():
    kernels = [("python", kernel_python)]
    if kernel_compiled is not None:
        kernels.insert(0, ("compiled", kernel_compiled))
    else:
        print("compiled kernel not built; benchmarking the fallback only")

    header = f"{'case':36s} "
    for name, _ in kernels:
        header += f"{name + ' time':>16s}{name + ' drift':>16s}"
    print(header + f"{'max diff':>12s}")
    for label, offsets, probs, times in CASES:
        outs = []
        row = f"{label:36s} "
        for _, kernel in kernels:
            dt, out = run(kernel, offsets, probs, times)
            outs.append(out)
            drift = abs(math.fsum(out) - 1.0)
            row += f"{dt * 1e3:14.1f}ms{drift:16.1e}"
        diff = float(np.max(np.abs(outs[0] - outs[-1]))) if len(outs) > 1 else 0.0
        print(row + f"{diff:12.1e}")


if __name__ == "__main__":
    main()
