"""Compare the compiled and pure-Python hull kernels.

    python benchmarks/bench_kernels.py [--sizes 1000,10000,100000] [--repeat 5]

Both backends run on the same uniform samples from the unit disc; their
outputs are checked for equality before timing.
"""
import argparse
import time

import numpy as np

from spindle import _kernels
from spindle.body import parse_body


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def r_hull_with(backend, pts, r):
    idx = backend.linear_hull(pts)
    return backend.prune_r_hull(pts, idx, r, 1e-12 * r)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", default="1000,10000,100000")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--body", default="disc:1")
    ap.add_argument("--r", type=float, default=1.0)
    args = ap.parse_args(argv)

    compiled = _kernels.compiled_backend
    python = _kernels.python_backend
    if compiled is None:
        print("compiled backend not built; only the Python kernels are available")
    body = parse_body(args.body)
    rng = np.random.default_rng(0)

    print(f"{'n':>8} {'python ms':>10} {'compiled ms':>12} {'speedup':>8}")
    for n in (int(s) for s in args.sizes.split(",")):
        pts = np.ascontiguousarray(body.sample_uniform(rng, n))
        t_py = best_time(lambda: r_hull_with(python, pts, args.r), args.repeat)
        if compiled is not None:
            assert np.array_equal(r_hull_with(python, pts, args.r), r_hull_with(compiled, pts, args.r))
            t_c = best_time(lambda: r_hull_with(compiled, pts, args.r), args.repeat)
            print(f"{n:>8} {1e3 * t_py:>10.3f} {1e3 * t_c:>12.3f} {t_py / t_c:>7.1f}x")
        else:
            print(f"{n:>8} {1e3 * t_py:>10.3f} {'-':>12} {'-':>8}")


if __name__ == "__main__":
    main()
