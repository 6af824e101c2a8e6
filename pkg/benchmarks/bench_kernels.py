"""Time each compiled kernel against its numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from slicepressure import kernels
from slicepressure.arith import make_slope


def _cases():
    rng = np.random.default_rng(0)
    digits = np.array(make_slope(3, 5).digit_values)
    values = kernels.get_kernel("enumerate_values", "numpy")(digits, 12)
    mat = rng.integers(0, 5, size=(40, 40)).astype(np.float64) + np.eye(40)
    m4 = rng.integers(1, 6, size=(4, 4)).astype(np.float64)
    xs = rng.dirichlet(np.ones(4), 20_000)
    ys = rng.dirichlet(np.ones(4), 20_000)
    blocks = rng.integers(0, 4, size=(200_000, 3))
    table = rng.random(64) < 0.3
    return {
        "enumerate_values (n=12)": ("enumerate_values", (digits, 12)),
        "class_counts (3^12 values)": ("class_counts", (values,)),
        "value_histogram (n=16)": ("value_histogram", (digits, 16)),
        "power_iterate (40x40)": ("power_iterate", (mat, 100_000, 1e-13)),
        "contraction_ratios (20k pairs)": ("contraction_ratios", (m4, xs, ys)),
        "count_flagged_blocks (200k)": ("count_flagged_blocks", (blocks, table)),
    }


def _best(fn, args, repeat):
    fn(*args)
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = kernels.available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'kernel':<32}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    for label, (name, call) in _cases().items():
        t = {b: _best(kernels.get_kernel(name, b), call, args.repeat) for b in backends}
        row = f"{label:<32}" + "".join(f"{t[b] * 1e3:>10.2f}ms" for b in backends)
        if len(backends) > 1:
            row += f"{t['numpy'] / t['numba']:>11.1f}x"
        print(row)


if __name__ == "__main__":
    main()
