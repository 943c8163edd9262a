"""Compare the numba and numpy elimination kernels.

    python benchmarks/bench_gf2.py [--sizes 64,256,1024] [--repeat 5]

Both kernels run in the same process on identical random matrices; the
ranks are checked for agreement before any timing is reported.
"""

import argparse
import time

import numpy as np

from ldic.gf2 import HAVE_NUMBA, rank_bits
from ldic.gf2 import _kernels


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", default="64,256,1024")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    if not HAVE_NUMBA:
        print("numba unavailable (or LDIC_NO_NUMBA set); timing numpy only")
    rng = np.random.default_rng(args.seed)
    print(f"{'n':>6} " + " ".join(f"{b:>12}" for b in backends) + "   speedup")
    for n in (int(s) for s in args.sizes.split(",")):
        m = rng.integers(0, 2, size=(n, n), dtype=np.uint8)
        ranks = {b: rank_bits(m, b) for b in backends}  # also warms up the jit
        if len(set(ranks.values())) != 1:
            raise SystemExit(f"backends disagree on rank at n={n}: {ranks}")
        words = _kernels.pack_rows(m)
        times = {}
        for b in backends:
            times[b] = best_time(lambda: _kernels.rref_packed(words.copy(), n, b), args.repeat)
        row = " ".join(f"{times[b] * 1e3:10.3f}ms" for b in backends)
        speed = f"{times['numpy'] / times['numba']:8.1f}x" if "numba" in times else ""
        print(f"{n:>6} {row} {speed}")


if __name__ == "__main__":
    main()
