"""Compare the compiled kernels with the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

import numpy as np

from bisorenyi import _kernels_py as py

try:
    from bisorenyi import _kernels as compiled
except ImportError:  # extension not built
    compiled = None


def _grid_case(n_pairs, n_x, rng):
    mass, q = rng.random(n_pairs), rng.random(n_pairs)
    xs = np.linspace(0, 1, n_x)
    return lambda k: k.biso_sum_grid(mass, q, 1 - q, xs, 1 - xs, 0.4)


def _kinv_case(n, rng):
    p = rng.uniform(0, 0.5, n)
    v = p ** 2.5 + (1 - p) ** 2.5
    return lambda k: k.k_inverse_array(v, 2.5)


def cases():
    # small and iterative workloads are typical of the library; the large
    # batches show where numpy's vectorised pow catches up
    rng = np.random.default_rng(0)
    v = rng.uniform(1.05, 1.3, 1000)
    w = rng.random(12) + 1e-3
    return {
        "k_inverse_scalar (1k calls)": lambda k: [k.k_inverse_scalar(t, 0.4) for t in v],
        "pair_descent (12 outputs)": lambda k: k.pair_descent(w, 3.0, 5000, 1e-13),
        "k_inverse_array (41 values)": _kinv_case(41, rng),
        "k_inverse_array (10k values)": _kinv_case(10_000, rng),
        "biso_sum_grid (2 pairs x 21 x)": _grid_case(2, 21, rng),
        "biso_sum_grid (6 pairs x 1001 x)": _grid_case(6, 1001, rng),
        "biso_sum_grid (64 pairs x 1001 x)": _grid_case(64, 1001, rng),
    }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    print(f"{'kernel':36s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speedup':>8s}")
    for name, fn in cases().items():
        t_py = min(timeit.repeat(lambda: fn(py), number=1, repeat=args.repeat)) * 1e3
        if compiled is None:
            print(f"{name:36s} {t_py:12.3f} {'n/a':>14s} {'':>8s}")
            continue
        t_c = min(timeit.repeat(lambda: fn(compiled), number=1, repeat=args.repeat)) * 1e3
        print(f"{name:36s} {t_py:12.3f} {t_c:14.3f} {t_py / t_c:7.1f}x")


if __name__ == "__main__":
    main()
