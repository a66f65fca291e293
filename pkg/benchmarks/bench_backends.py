#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Representative production shapes for each hot kernel; prints a table with
per-call times and the speedup.  Run from the repository root:

    python3 benchmarks/bench_backends.py
"""

import time

import numpy as np

from iontomo import _kernels
from iontomo._backend import USE_NUMBA


def timeit(fn, *args, repeat=5):
    fn(*args)  # warm up (and JIT-compile the numba flavour)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_wigner():
    x = np.linspace(-9.0, 9.0, 1801)
    psi = (np.exp(-x * x / 2 + 0.4j * x * x) / np.pi**0.25).astype(np.complex128)
    q_idx = np.arange(400, 1401, 10, dtype=np.int64)
    p = np.linspace(-5.0, 5.0, 101)
    args = (psi, x[1] - x[0], q_idx, p)
    return "wigner_sum 101q x 101p x ~1400u", args, _kernels.wigner_sum, \
        _kernels.wigner_sum_numpy


def bench_line_integral():
    grid = np.linspace(-7.0, 7.0, 2001)
    qm, pm = np.meshgrid(grid, grid, indexing="ij")
    w = 2.0 * np.exp(-qm**2 - pm**2) * np.cos(2.83 * pm)
    x_vals = np.linspace(-6.0, 6.0, 401)
    args = (w, grid[0], grid[1] - grid[0], grid[0], grid[1] - grid[0],
            0.8, -0.6, 0.2, x_vals, 0.0035)
    return "line_integral_batch 401X x ~4000 samples", args, \
        _kernels.line_integral_batch, _kernels.line_integral_batch_numpy


def bench_phase_profile():
    # the production binding is the BLAS matmul path on both backends; the
    # explicit-loop numba flavour is timed here to document why
    n = 121
    mus = (np.arange(n) - 60) * 0.1
    rng = np.random.default_rng(0)
    f_tab = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    wts = np.full(n, 0.1)
    q = np.linspace(-5.0, 5.0, 101)
    args = (f_tab, mus, mus, wts, wts, q, q)
    return "phase_profile 121x121 -> 101x101 (loop)", args, \
        _kernels.phase_profile_numba, _kernels.phase_profile_numpy


def bench_chirp():
    x = np.linspace(-11.0, 11.0, 2201)
    vals = (np.exp(-x * x / 2) * (1.0 + 0.3j * x)).astype(np.complex128)
    wts = np.full(len(x), x[1] - x[0])
    freqs = np.linspace(-12.0, 12.0, 401)
    args = (vals, x, wts, 0.6, freqs)
    return "chirp_amplitude 401f x 2201x", args, \
        _kernels.chirp_amplitude, _kernels.chirp_amplitude_numpy


def main():
    if not USE_NUMBA:
        print("numba backend disabled (IONTOMO_BACKEND=numpy?) -- nothing to "
              "compare; timing the numpy fallbacks only")
    print(f"{'kernel':44s} {'numba':>10s} {'numpy':>10s} {'speedup':>8s}")
    for bench in (bench_wigner, bench_line_integral, bench_phase_profile,
                  bench_chirp):
        label, args, fast, fallback = bench()
        t_numpy = timeit(fallback, *args)
        if USE_NUMBA:
            t_numba = timeit(fast, *args)
            a = np.asarray(fast(*args))
            b = np.asarray(fallback(*args))
            if isinstance(a, tuple):
                a, b = a[0], b[0]
            drift = float(np.max(np.abs(a - b)))
            print(f"{label:44s} {t_numba * 1e3:8.2f}ms {t_numpy * 1e3:8.2f}ms "
                  f"{t_numpy / t_numba:7.1f}x   (max |diff| {drift:.1e})")
        else:
            print(f"{label:44s} {'-':>10s} {t_numpy * 1e3:8.2f}ms")


if __name__ == "__main__":
    main()
