"""Benchmark the numba kernels against their pure-numpy fallbacks.

Times the three hot kernels on realistic workloads and prints a table with
the per-path best-of-N wall times and the speedup. Run from the repo root:

    python3 benchmarks/bench_kernels.py          # quick sizes
    python3 benchmarks/bench_kernels.py --full   # acceptance-sized grid scan

If VADSPHERE_NO_NUMBA is set (or numba is missing) only the numpy column is
reported.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from vadsphere import _kernels


def best_of(fn, repeats: int = 3) -> float:
    fn()  # warmup (also triggers JIT compilation for numba variants)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def build_workloads(full: bool):
    rng = np.random.default_rng(0)
    targets = np.clip(rng.normal((0.8, 0.7, 0.6), 0.1, (200, 3)), 0, 1)
    neutrals = np.clip(rng.normal((0.5, 0.5, 0.5), 0.08, (200, 3)), 0, 1)
    m = np.array([0.45, 0.5, 0.55])

    step = 0.01 if full else 0.02
    n_axis = int(round(1.0 / step)) + 1
    axis = np.minimum(np.arange(n_axis, dtype=float) * step, 1.0)

    sr = 22050
    seconds = 10 if full else 2
    audio = rng.normal(0.0, 0.3, sr * seconds)
    window, tau_max, hop = 1024, 442, 256
    frames = np.ascontiguousarray(
        np.lib.stride_tricks.sliding_window_view(audio, window + tau_max)[::hop])

    return {
        "distance_ratio (x1000 calls)": (
            lambda fn: lambda: [fn(m, targets, neutrals, 1e-6) for _ in range(1000)]),
        f"grid_objective_values ({n_axis}^3 lattice)": (
            lambda fn: lambda: fn(axis, targets, neutrals, 1e-6)),
        f"yin_difference ({frames.shape[0]} frames)": (
            lambda fn: lambda: fn(frames, window, tau_max)),
    }, {
        "distance_ratio (x1000 calls)": (
            _kernels.distance_ratio_numpy, _kernels.distance_ratio_numba),
        f"grid_objective_values ({n_axis}^3 lattice)": (
            _kernels.grid_objective_values_numpy, _kernels.grid_objective_values_numba),
        f"yin_difference ({frames.shape[0]} frames)": (
            _kernels.yin_difference_numpy, _kernels.yin_difference_numba),
    }


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--full", action="store_true",
                        help="acceptance-sized workloads (slower)")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    wrappers, impls = build_workloads(args.full)
    have_numba = _kernels.USING_NUMBA

    name_width = max(len(name) for name in wrappers)
    print(f"{'kernel':<{name_width}}  {'numpy':>10}  {'numba':>10}  {'speedup':>8}")
    for name, wrap in wrappers.items():
        numpy_impl, numba_impl = impls[name]
        t_numpy = best_of(wrap(numpy_impl), args.repeats)
        if have_numba and numba_impl is not None:
            t_numba = best_of(wrap(numba_impl), args.repeats)
            print(f"{name:<{name_width}}  {t_numpy:>9.4f}s  {t_numba:>9.4f}s  "
                  f"{t_numpy / t_numba:>7.1f}x")
        else:
            print(f"{name:<{name_width}}  {t_numpy:>9.4f}s  {'-':>10}  {'-':>8}")
    if not have_numba:
        print("\nnumba path unavailable "
              f"(missing numba or {_kernels.ENV_FLAG} set); numpy fallback only.")


if __name__ == "__main__":
    main()
