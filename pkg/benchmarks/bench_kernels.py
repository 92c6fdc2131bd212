"""Compare the numpy and numba root-finding backends.

Usage::

    python3 benchmarks/bench_kernels.py [--repeat 3] [--res 200]

Two workloads: random monic polynomials of several degrees, and the fiber
polynomials ``q - u`` of a raster over the target plane (what
``classify_raster`` solves).  Timings are best-of-``repeat`` after one
warm-up call, so numba compilation is excluded.
"""

import argparse
import time

import numpy as np

from qapolar._accel import HAVE_NUMBA
from qapolar._kernels import aberth_batch
from qapolar.regions import pixel_centers


def random_rows(rng, m, d):
    c = rng.uniform(-2, 2, (m, d + 1)) + 1j * rng.uniform(-2, 2, (m, d + 1))
    c[:, d] = 1.0
    return c


def raster_rows(q, bbox, res):
    us = pixel_centers(bbox, res).ravel()
    rows = np.repeat(np.asarray(q, dtype=complex)[None, :], us.size, axis=0)
    rows[:, 0] -= us
    return rows


def best_time(rows, backend, repeat):
    aberth_batch(rows[:8], backend=backend)
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        aberth_batch(rows, backend=backend)
        best = min(best, time.perf_counter() - t0)
    return best


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--res", type=int, default=200)
    ap.add_argument("--batch", type=int, default=20000)
    args = ap.parse_args(argv)

    rng = np.random.default_rng(0)
    workloads = [(f"random d={d}, {args.batch} polys", random_rows(rng, args.batch, d)) for d in (2, 4, 8)]
    workloads.append(
        (f"raster z^3+z/2, {args.res}x{args.res}", raster_rows([0, 0.5, 0, 1], (-2, -2, 2, 2), args.res))
    )
    backends = ["numpy"] + (["numba"] if HAVE_NUMBA else [])
    print(f"{'workload':<34}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if HAVE_NUMBA else ""))
    for name, rows in workloads:
        times = [best_time(rows, b, args.repeat) for b in backends]
        line = f"{name:<34}" + "".join(f"{t:>11.3f}s" for t in times)
        if HAVE_NUMBA:
            line += f"{times[0] / times[1]:>11.1f}x"
        print(line)
    if not HAVE_NUMBA:
        print("numba not installed; install the 'fast' extra to compare")


if __name__ == "__main__":
    main()
