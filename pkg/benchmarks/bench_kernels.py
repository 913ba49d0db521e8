"""Compare the numba and numpy kernel backends on production-sized grids.

Usage: python benchmarks/bench_kernels.py [points] [repeats]

Times every hot kernel on a dense frequency grid with both backends and
prints the per-call wall time and the speedup.  The first numba call
includes JIT compilation and is excluded from the timing.
"""

import math
import sys
import time

import numpy as np

from photonpressure import kernels

TWO_PI = 2 * math.pi

CASES = {
    "s11_bare": (
        TWO_PI * np.linspace(5.842e9, 5.846e9, 1),
        (TWO_PI * 5.844e9, TWO_PI * 163e3, TWO_PI * 28e3),
    ),
    "s11_pumped": (
        TWO_PI * np.linspace(5.842e9, 5.846e9, 1),
        (TWO_PI * 5.844e9, TWO_PI * 163e3, TWO_PI * 28e3,
         TWO_PI * 391e6, TWO_PI * 22e3, TWO_PI * 250e3, -TWO_PI * 391e6),
    ),
    "lf_s11_pumped": (
        TWO_PI * np.linspace(390.5e6, 391.5e6, 1),
        (TWO_PI * 391e6, TWO_PI * 7.4e3, TWO_PI * 13.8e3,
         TWO_PI * 30e3, -TWO_PI * 391e6, TWO_PI * 250e3),
    ),
    "psd_blue": (
        TWO_PI * np.linspace(-391.3e6, -390.7e6, 1),
        (TWO_PI * 250e3, TWO_PI * 25e3, TWO_PI * 22e3, TWO_PI * 391e6,
         TWO_PI * 27e3, TWO_PI * 391e6, 10.0, 0.0, 28.8),
    ),
}


def time_call(fn, grid, args, repeats):
    fn(grid, *args)  # warm up (JIT compile on the numba path)
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(grid, *args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    points = int(sys.argv[1]) if len(sys.argv) > 1 else 2_000_001
    repeats = int(sys.argv[2]) if len(sys.argv) > 2 else 5
    try:
        kernels.set_backend("numba")
        have_numba = True
    except ImportError:
        have_numba = False

    print(f"grid points: {points}, repeats: {repeats}")
    print(f"{'kernel':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>9}")
    for name, (proto, args) in CASES.items():
        grid = np.linspace(proto[0], proto[0] + TWO_PI * 4e6, points)
        fn = getattr(kernels, name)
        kernels.set_backend("numpy")
        t_np = time_call(fn, grid, args, repeats)
        if have_numba:
            kernels.set_backend("numba")
            t_nb = time_call(fn, grid, args, repeats)
            print(f"{name:<16}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}"
                  f"{t_np / t_nb:>9.2f}")
        else:
            print(f"{name:<16}{t_np * 1e3:>12.2f}{'n/a':>12}{'n/a':>9}")


if __name__ == "__main__":
    main()
