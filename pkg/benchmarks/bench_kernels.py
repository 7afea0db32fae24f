"""Time the numba and numpy backends of the integer kernels on grid inputs.

    python benchmarks/bench_kernels.py --m 64 --repeat 5

Each kernel is run once per backend to warm up (numba compiles on first
call), then timed; outputs of the two backends are compared for equality.
"""

import argparse
import time

import numpy as np

from udlab import kernels


def _grid(m):
    a, b = np.meshgrid(np.arange(m, dtype=np.int64), np.arange(m, dtype=np.int64), indexing="ij")
    return a.ravel(), b.ravel()


def _equal(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(_equal(x, y) for x, y in zip(a, b))
    return np.array_equal(a, b)


def _best(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=int, default=64, help="grid side")
    ap.add_argument("--rsq", type=int, default=325)
    ap.add_argument("--N", type=int, default=32, help="box side for the product histogram")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args(argv)

    X, Y = _grid(args.m)
    A, B = _grid(args.N)
    cases = {
        "unit_pairs": lambda: kernels.unit_pairs(X, Y, args.rsq),
        "sqdist_histogram": lambda: kernels.sqdist_histogram(X, Y),
        "circle_counts": lambda: kernels.circle_counts(X, Y, X, Y, args.rsq),
        "product_histogram": lambda: kernels.product_histogram(A, B),
    }
    if not kernels.HAVE_NUMBA:
        print("numba not importable; only the numpy backend is timed")
    backends = ["numba", "numpy"] if kernels.HAVE_NUMBA else ["numpy"]
    previous = kernels.BACKEND
    print(f"{'kernel':<18} " + " ".join(f"{b:>10}" for b in backends) + "   speedup  same")
    try:
        for name, fn in cases.items():
            times, outs = [], []
            for b in backends:
                kernels.set_backend(b)
                times.append(_best(fn, args.repeat))
                outs.append(fn())
            same = all(_equal(outs[0], o) for o in outs[1:])
            speed = times[-1] / times[0] if len(times) > 1 and times[0] > 0 else 1.0
            cols = " ".join(f"{t * 1e3:>8.2f}ms" for t in times)
            print(f"{name:<18} {cols}   {speed:7.1f}x  {same}")
    finally:
        kernels.set_backend(previous)


if __name__ == "__main__":
    main()
