"""Time the numba and pure-numpy variants of each kernel on the same inputs.

    python3 benchmarks/bench_kernels.py [--repeat R] [--scale S]

The jit variants are called once before timing so compilation is excluded.
Every pair of results is compared; a mismatch aborts the run.
"""

import argparse
import sys
import time

import numpy as np

from kfree import _accel, kernels
from kfree.strata import make_context, stratum_elements


def best_of(fn, args, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def cases(scale):
    n = 10**5 * scale
    succ = (2 * np.arange(n, dtype=np.int64)) % n
    yield "pseudoforest_mis k=2", "pseudoforest_mis", (succ,)
    rng = np.random.default_rng(0)
    yield "pseudoforest_mis random", "pseudoforest_mis", (rng.integers(0, n, n).astype(np.int64),)

    m = 18
    img = np.array([1 << (3 * x % m) for x in range(m)], dtype=np.int64)
    yield "max_free_subset n=18", "max_free_subset", (img,)

    big = 10**6 * scale
    yield f"interval_orbit_sum n={big}", "interval_orbit_sum", (big, 2)

    p = 1000003 if scale == 1 else 10000019
    ctx = make_context(10, p)
    elems = stratum_elements(1, ctx)
    yield f"alternating_picks n={p}", "alternating_picks", (elems, p, 10)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--scale", type=int, default=1, help="multiply problem sizes")
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        print("numba is not importable; only the numpy variants exist", file=sys.stderr)
        return 1

    print(f"{'kernel':<32}{'numba s':>12}{'numpy s':>12}{'speedup':>10}")
    for label, name, fargs in cases(args.scale):
        jit = getattr(kernels, name + "_jit")
        ref = getattr(kernels, name + "_numpy")
        jit(*fargs)  # compile
        tj, a = best_of(jit, fargs, args.repeat)
        tn, b = best_of(ref, fargs, args.repeat)
        if not np.array_equal(np.asarray(a), np.asarray(b)):
            print(f"{label}: results differ ({a!r} vs {b!r})", file=sys.stderr)
            return 1
        print(f"{label:<32}{tj:>12.4f}{tn:>12.4f}{tn / tj:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
