"""Time the numba and numpy kernels side by side and check they agree.

    python3 benchmarks/bench_kernels.py [--n 1000000] [--repeat 3]

Both backends live in the same module, so one process can call each directly
regardless of ``AACPLAN_DISABLE_NUMBA``.
"""
import argparse
import time

import numpy as np

from aacplan import _kernels as K


def best_of(fn, repeat):
    out, best = None, float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return out, best


def bench_pipeline(n, repeat):
    acc = np.full(6, 0.85)
    retries = np.array([0, 1, 2, 0, 1, 2], dtype=np.int64)
    boost = np.full(6, 0.05)
    rows = []
    for name, fn in (("numba", K.simulate_pipeline_numba), ("numpy", K.simulate_pipeline_numpy)):
        if name == "numba" and not K.HAVE_NUMBA:
            continue
        if name == "numba":
            fn(acc, retries, boost, 1, 0, 16)  # compile
        res, t = best_of(lambda: fn(acc, retries, boost, 1, 0, n), repeat)
        rows.append((name, t, res))
    return rows


def bench_cover(m, repeat):
    rnd = np.random.default_rng(0)
    masks = np.array([int(rnd.integers(1, 32)) for _ in range(m)], dtype=np.int64)
    costs = rnd.uniform(1.0, 5.0, m)
    rows = []
    for name, fn in (("numba", K.exact_cover_numba), ("numpy", K.exact_cover_numpy)):
        if name == "numba" and not K.HAVE_NUMBA:
            continue
        if name == "numba":
            fn(masks[:3], costs[:3], 1)
        res, t = best_of(lambda: fn(masks, costs, 31), repeat)
        rows.append((name, t, res))
    return rows


def report(title, rows, unit, work):
    print(title)
    for name, t, _ in rows:
        print(f"  {name:6s} {t * 1e3:9.2f} ms  {work / t / 1e6:8.2f} M{unit}/s")
    if len(rows) == 2:
        (_, ta, ra), (_, tb, rb) = rows
        same = all(np.array_equal(np.asarray(x), np.asarray(y)) for x, y in zip(ra, rb)) \
            if isinstance(ra, tuple) else ra == rb
        print(f"  speedup numba/numpy {tb / ta:.1f}x, results identical: {same}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=1_000_000, help="travellers for the pipeline kernel")
    ap.add_argument("--cols", type=int, default=18, help="columns for the subset enumeration")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"default backend: {K.BACKEND}")
    report(f"simulate_pipeline, 6 points, n={args.n}", bench_pipeline(args.n, args.repeat), "trials", args.n)
    report(f"exact_cover, {args.cols} columns", bench_cover(args.cols, args.repeat), "subsets", 2 ** args.cols)


if __name__ == "__main__":
    main()
