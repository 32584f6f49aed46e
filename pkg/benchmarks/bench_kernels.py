"""Time the numba and numpy kernel backends on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 5] [--quick]

Each kernel is called once untimed first so numba compilation (or cache
loading) is excluded. Prints one line per kernel with the best wall time of
each backend and the speedup.
"""
import argparse
import time

import numpy as np

from complex_ou import _accel, kernels
from complex_ou.polynomial import random_polynomial


def best_time(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(quick):
    rng = np.random.default_rng(0)
    n_pts = 20_000 if quick else 200_000
    p = random_polynomial(rng, 3, 6, n_terms=40)
    a, b, c = p.to_arrays()
    pts = rng.standard_normal((n_pts, 3)) + 1j * rng.standard_normal((n_pts, 3))
    yield "eval_terms (40 terms, 3 vars, %d pts)" % n_pts, (
        lambda: kernels.eval_terms_numba(a, b, c, pts),
        lambda: kernels.eval_terms_numpy(a, b, c, pts),
    )

    steps, paths = (50, 10_000) if quick else (200, 100_000)
    z0 = np.zeros(paths, complex)
    g_re, g_im = rng.standard_normal((2, steps, paths))
    out = np.empty((0, paths), complex)
    f, s = np.exp(-0.01 - 0.005j), 0.1
    yield "linear_recursion (%d steps x %d paths)" % (steps, paths), (
        lambda: kernels.linear_recursion_numba(z0, f, s, g_re, g_im, out),
        lambda: kernels.linear_recursion_numpy(z0, f, s, g_re, g_im, out),
    )

    r2 = rng.exponential(2.0, size=(10_000 if quick else 100_000, 20))
    yield "pow_moments (%d x 20, h=1.7)" % r2.shape[0], (
        lambda: kernels.pow_moments_numba(r2, 1.7),
        lambda: kernels.pow_moments_numpy(r2, 1.7),
    )


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--quick", action="store_true", help="small inputs")
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not installed; nothing to compare")
    print(f"{'kernel':48s} {'numba [s]':>10s} {'numpy [s]':>10s} {'speedup':>8s}")
    for name, (fast, slow) in cases(args.quick):
        tn = best_time(fast, args.repeat)
        tp = best_time(slow, args.repeat)
        print(f"{name:48s} {tn:10.4f} {tp:10.4f} {tp / tn:7.1f}x")


if __name__ == "__main__":
    main()
