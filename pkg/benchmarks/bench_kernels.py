"""Time the compiled kernels against the numpy fallback.

Usage: python3 benchmarks/bench_kernels.py [--repeat N] [--seed S]
"""

import argparse
import sys
import timeit

import numpy as np

from regbench import _pykernels

try:
    from regbench import _ckernels
except ImportError:
    _ckernels = None

QR_SHAPES = [(200, 5), (1000, 20), (5000, 40)]
EIG_SIZES = [5, 20, 40]


def best_of(fn, repeat):
    number = 1
    while timeit.timeit(fn, number=number) < 0.05:
        number *= 2
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def cases(rng):
    for n, p in QR_SHAPES:
        X = rng.normal(size=(n, p))
        y = rng.normal(size=n)
        yield f"householder_qr {n}x{p}", lambda k, X=X, y=y: k.householder_qr(X, y)
    for p in EIG_SIZES:
        A = rng.normal(size=(p, p))
        S = A + A.T
        yield f"jacobi_eigh {p}x{p}", lambda k, S=S: k.jacobi_eigh(S, 1e-12, 100)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args(argv)
    if _ckernels is None:
        print("compiled kernels not built; run `pip install -e . --no-build-isolation`",
              file=sys.stderr)
        return 1
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':<28}{'cython (ms)':>14}{'numpy (ms)':>14}{'speedup':>10}")
    for label, call in cases(rng):
        tc = best_of(lambda: call(_ckernels), args.repeat)
        tp = best_of(lambda: call(_pykernels), args.repeat)
        print(f"{label:<28}{tc * 1e3:>14.3f}{tp * 1e3:>14.3f}{tp / tc:>9.1f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
