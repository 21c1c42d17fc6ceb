"""Compare the compiled kernels with their pure-Python twins.

    python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import random
import timeit

from latref import kernels
from latref.lattice import e8, lattice_L


def cases():
    L10 = lattice_L(10)
    sigma = [[-20]]
    E8m2 = e8(-2).gram
    rng = random.Random(0)
    rows_e = [tuple(rng.randint(-50, 50) for _ in range(3)) for _ in range(20000)]
    rows_f = [tuple(rng.randint(-50, 50) for _ in range(3)) for _ in range(20000)]
    x = (81, 40, 18)
    return [
        ("split_vectors L_10 box 256", lambda b: kernels.split_vectors(sigma, 1, 256, backend=b)),
        ("box_vectors L_10 box 40", lambda b: kernels.box_vectors(L10.gram, 2, 40, backend=b)),
        ("box_vectors E8(-2) box 1", lambda b: kernels.box_vectors(E8m2, -8, 1, backend=b)),
        ("argmin_height 20000 rows", lambda b: kernels.argmin_height(rows_e, rows_f, x, backend=b)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    compiled = kernels.BACKEND == "cython"
    print(f"compiled backend available: {compiled}")
    print(f"{'kernel':32s} {'python [s]':>12s} {'cython [s]':>12s} {'speedup':>8s}")
    for name, fn in cases():
        py = min(timeit.repeat(lambda: fn("python"), number=1, repeat=args.repeat))
        if compiled:
            assert fn("python") == fn("cython") or sorted(fn("python")) == sorted(fn("cython"))
            cy = min(timeit.repeat(lambda: fn("cython"), number=1, repeat=args.repeat))
            print(f"{name:32s} {py:12.4f} {cy:12.4f} {py / cy:8.1f}x")
        else:
            print(f"{name:32s} {py:12.4f} {'-':>12s} {'-':>8s}")


if __name__ == "__main__":
    main()
