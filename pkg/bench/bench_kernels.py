#!/usr/bin/env python3
"""Benchmark the numba kernels against their pure-numpy fallbacks.

Run from the repository root:

    python3 bench/bench_kernels.py

The numpy path is always measured; the numba path is measured when numba
imports cleanly (i.e. DIALOG_ANNOTATE_NO_NUMBA is unset).
"""

import time

import numpy as np

from dialog_annotate import _kernels


def bench(fn, *args, repeats=5):
    fn(*args)  # warmup / JIT
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    rng = np.random.default_rng(0)
    rows = []

    for m, n in [(200, 200), (800, 800)]:
        a = rng.integers(0, 50, size=m).astype(np.int64)
        b = rng.integers(0, 50, size=n).astype(np.int64)
        case = f"lcs_length {m}x{n}"
        rows.append((case, "numpy", bench(_kernels.lcs_length_numpy, a, b)))
        if _kernels.HAS_NUMBA:
            rows.append((case, "numba", bench(_kernels.lcs_length_numba, a, b)))

    for n in [100, 310]:
        sim = rng.uniform(-1, 1, size=(n, n))
        sim = (sim + sim.T) / 2
        case = f"rank_matrix {n}x{n} (11x11 mask)"
        rows.append((case, "numpy", bench(_kernels.rank_matrix_numpy, sim, 5)))
        if _kernels.HAS_NUMBA:
            rows.append((case, "numba", bench(_kernels.rank_matrix_numba, sim, 5)))

    width = max(len(r[0]) for r in rows)
    print(f"{'kernel':<{width}}  path   best of 5")
    for case, path, seconds in rows:
        print(f"{case:<{width}}  {path:<5}  {seconds * 1e3:9.3f} ms")
    if not _kernels.HAS_NUMBA:
        print("\nnumba unavailable or disabled; only the numpy path was measured.")


if __name__ == "__main__":
    main()
