#!/usr/bin/env python3
"""Benchmark: compiled kernels vs the pure-Python/numpy fallback.

Times the three reduction kernels and the per-coordinate mixing kernel on
representative table sizes, then one end-to-end operation (a full
decomposition on 2^10 points) through each backend.

Run after building the extension:

    python setup.py build_ext --inplace
    python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from hypercheck import _kernels_py

try:
    from hypercheck import _kernels
except ImportError:
    _kernels = None


def timeit(fn, *args, repeat=5, number=3):
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - start) / number)
    return best


def bench_kernels():
    rng = np.random.default_rng(0)
    rows = []
    for size in (1 << 10, 1 << 16, 1 << 20):
        w = rng.random(size)
        w /= w.sum()
        v = rng.standard_normal(size)
        g = rng.standard_normal(size)
        mu = np.array([0.25, 0.75])
        cases = [
            (f"weighted_sum[{size}]", "weighted_sum", (w, v)),
            (f"weighted_dot[{size}]", "weighted_dot", (w, v, g)),
            (f"weighted_pow_sum[{size}, q=4]", "weighted_pow_sum", (w, v, 4.0)),
            (f"axis_mix[{size}]", "axis_mix", (v, mu, size // 8, 0.3)),
        ]
        for label, name, args in cases:
            pure = timeit(getattr(_kernels_py, name), *args)
            fast = timeit(getattr(_kernels, name), *args) if _kernels else None
            rows.append((label, pure, fast))
    return rows


def bench_end_to_end():
    import os
    import subprocess
    import sys

    code = (
        "import time, numpy as np\n"
        "from hypercheck.space import Domain, FunctionTable, biased_space\n"
        "from hypercheck.operators import efron_stein\n"
        "from hypercheck.kernels import BACKEND\n"
        "dom = Domain(biased_space(0.3), 10)\n"
        "f = FunctionTable(dom, np.random.default_rng(1).standard_normal(dom.size))\n"
        "start = time.perf_counter()\n"
        "efron_stein(f)\n"
        "print(BACKEND, time.perf_counter() - start)\n"
    )
    rows = []
    for env_extra in ({}, {"HYPERCHECK_PURE": "1"}):
        env = dict(os.environ, **env_extra)
        out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                             text=True, env=env, check=True)
        backend, seconds = out.stdout.split()
        rows.append((backend, float(seconds)))
    return rows


def main():
    print(f"{'kernel':38s} {'pure (ms)':>11s} {'cython (ms)':>12s} {'speedup':>8s}")
    for label, pure, fast in bench_kernels():
        if fast is None:
            print(f"{label:38s} {pure * 1e3:11.3f} {'n/a':>12s} {'':>8s}")
        else:
            print(f"{label:38s} {pure * 1e3:11.3f} {fast * 1e3:12.3f} "
                  f"{pure / fast:7.1f}x")
    if _kernels is None:
        print("\ncompiled extension not built; run "
              "`python setup.py build_ext --inplace` to compare backends")
        return
    print("\nend-to-end: full decomposition, 10 coordinates, 1024 points")
    for backend, seconds in bench_end_to_end():
        print(f"  {backend:8s} {seconds * 1e3:10.1f} ms")


if __name__ == "__main__":
    main()
