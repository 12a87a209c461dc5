"""Benchmark the compiled kernels against their pure-numpy twins.

Run:  python3 benchmarks/bench_kernels.py
(or with MUELLERKIT_DISABLE_NUMBA=1 to confirm the fallback path alone).
"""

import time

import numpy as np

from muellerkit import kernels


def _time(fn, args, repeat=5, number=2000):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / number)
    return best


def main():
    rng = np.random.default_rng(0)
    kre = rng.normal(size=4)
    kim = rng.normal(size=4)
    rows = rng.normal(size=(4, 6))
    e = rng.normal(size=4)
    starts = rng.uniform(-2, 2, size=(64, 4))

    cases = [
        ("mueller_product", (kre, kim), 2000),
        ("quad_residual", (rows, e), 2000),
        ("quad_jacobian", (rows, e), 2000),
        ("newton_multistart", (rows, starts, 1e-10, 80), 20),
    ]

    print(f"numba available: {kernels.HAS_NUMBA}")
    print(f"{'kernel':<20} {'numpy (us)':>12} {'numba (us)':>12} {'speedup':>9}")
    for name, args, number in cases:
        py = getattr(kernels, name + "_py")
        t_py = _time(py, args, number=number)
        if kernels.HAS_NUMBA:
            jit = getattr(kernels, name + "_jit")
            jit(*args)  # warm up / compile
            t_jit = _time(jit, args, number=number)
            print(f"{name:<20} {t_py * 1e6:>12.2f} {t_jit * 1e6:>12.2f} "
                  f"{t_py / t_jit:>8.1f}x")
        else:
            print(f"{name:<20} {t_py * 1e6:>12.2f} {'-':>12} {'-':>9}")


if __name__ == "__main__":
    main()
