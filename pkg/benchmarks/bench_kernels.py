"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--keys 2000] [--repeat 3]

Each kernel runs on identical inputs under both backends; outputs are checked
for equality before timings are reported.
"""

from __future__ import annotations

import argparse
import random
import sys
import time

import numpy as np

from rcsynth import _pykernels, database, kernels
from rcsynth.core import Permutation

try:
    from rcsynth import _ckernels
except ImportError:  # pragma: no cover
    _ckernels = None


def random_keys(n: int, k: int, seed: int) -> np.ndarray:
    rng = random.Random(seed)
    out = []
    for _ in range(k):
        t = list(range(1 << n))
        rng.shuffle(t)
        out.append(Permutation(n, tuple(t)).key)
    return np.array(out, dtype=np.uint64)


def best_of(fn, repeat: int) -> tuple[float, object]:
    best, result = float("inf"), None
    for _ in range(repeat):
        t = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t)
    return best, result


def same(a, b) -> bool:
    if isinstance(a, tuple):
        return all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, np.ndarray):
        return np.array_equal(a, b)
    return a == b


def main(argv=None) -> int:
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--keys", type=int, default=2000, help="random functions for the canonicalization kernel")
    p.add_argument("--repeat", type=int, default=3)
    p.add_argument("--depth", type=int, default=4, help="4-line database depth used for lookups")
    args = p.parse_args(argv)
    if _ckernels is None:
        print("compiled extension not available; nothing to compare", file=sys.stderr)
        return 1

    db = database.build(4, args.depth)
    keys = random_keys(4, args.keys, 1)
    parents = db.level_keys[min(3, args.depth)][:200]
    probe = int(random_keys(4, 1, 2)[0])
    split = db.level_keys[min(2, args.depth)]

    cases = [
        (f"canon_keys x{len(keys)}", lambda impl: kernels.canon_keys(keys, 4, impl=impl)),
        (f"expand x{len(parents)}", lambda impl: kernels.expand(parents, 4, impl=impl)),
        ("children x1", lambda impl: kernels.children(probe, 4, db.keys, db.gcs, impl=impl)),
        (f"mitm_scan over {len(split)} classes",
         lambda impl: kernels.mitm_scan(probe, 4, split, db.keys, db.gcs, args.depth, False, impl=impl)),
    ]
    print(f"{'kernel':<30}{'python [s]':>12}{'cython [s]':>12}{'speedup':>10}")
    for name, fn in cases:
        tp, rp = best_of(lambda: fn(_pykernels), args.repeat)
        tc, rc = best_of(lambda: fn(_ckernels), args.repeat)
        if not same(rp, rc):
            print(f"{name}: backends disagree", file=sys.stderr)
            return 2
        print(f"{name:<30}{tp:>12.4f}{tc:>12.4f}{tp / tc:>9.0f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
