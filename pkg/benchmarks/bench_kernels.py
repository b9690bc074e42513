"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]

Each kernel runs once untimed (so numba compiles), then ``repeat`` times
per backend; the table shows the best time in milliseconds.
"""

import argparse
import os
import time

import numpy as np

from mmso import _kernels as K
from mmso import corpus
from mmso import matroid as MT
from mmso.branchdec import all_trees, connectivity_table


def cases():
    fano = corpus.get("fano")
    big = MT.linear(3, [[1, 0, 0, 1, 1, 1, 0, 1, 2, 1], [0, 1, 0, 1, 2, 0, 1, 1, 1, 2],
                        [0, 0, 1, 0, 1, 2, 2, 1, 0, 1]])
    t8 = corpus.get("path8")
    splits = all_trees(8)[1]
    cost = (connectivity_table(t8) + 1).astype(np.int64)
    yield "rank_table (n=10)", lambda: K.rank_table(big.table, big.n)
    yield "class_counts (fano)", lambda: K.class_counts(fano.table, fano.n)
    yield "class_counts (n=10)", lambda: K.class_counts(big.table, big.n)
    yield "signature_ids (n=10, |U|=5)", lambda: K.signature_ids(big.table, big.n, 0b0000011111)
    yield f"tree_minmax (n=8, {len(splits)} trees)", lambda: K.tree_minmax(splits, cost, t8.full)


def best(fn, repeat):
    out = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        out = min(out, time.perf_counter() - t)
    return out * 1e3


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not K.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':36} {'numba ms':>10} {'numpy ms':>10} {'speedup':>8}")
    for name, fn in cases():
        os.environ["MMSO_NO_NUMBA"] = "0"
        fn()
        nb = best(fn, args.repeat)
        os.environ["MMSO_NO_NUMBA"] = "1"
        npv = best(fn, args.repeat)
        print(f"{name:36} {nb:10.2f} {npv:10.2f} {npv / nb:7.1f}x")
    os.environ.pop("MMSO_NO_NUMBA")


if __name__ == "__main__":
    main()
