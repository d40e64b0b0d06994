#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from bcnfchaos import _kernels_py as pure

try:
    from bcnfchaos import _kernels_cy as compiled
except ImportError:
    compiled = None


def time_call(fn, *args, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench_scan_grid(mod, repeat):
    def run():
        for tau_L in np.linspace(0.0, 1.6, 32):
            for tau_R in np.linspace(-3.4, -1.0, 16):
                mod.scan_beta(float(tau_L), float(tau_R), 0.3, 0.3,
                              0.01, 0.01, 5.0, 15, 15, 1e-12)
    return time_call(run, repeat=repeat)


def bench_tangent(mod, repeat):
    return time_call(
        mod.tangent_stretch, 1.0, -2.0, 0.3, 0.3, 0.3, 0.1, 1.0, -0.12,
        1_000_000, 32, 1e-12, repeat=repeat,
    )


def bench_word_stats(mod, repeat):
    return time_call(
        mod.tangent_word_stats, 1.0, -2.0, 0.3, 0.3, 0.3, 0.1, 1.0, -0.12,
        1_000_000, 32, 1e-12, 0.1745, repeat=repeat,
    )


def bench_simulate(mod, repeat):
    out = np.empty((1_000_000, 2))
    return time_call(
        mod.simulate_into, 1.0, -2.0, 0.3, 0.3, 0.0, 0.0, 1_000_000, 1e8, out,
        repeat=repeat,
    )


def bench_escape(mod, repeat):
    def run():
        for x2 in np.linspace(-40.0, -1.0, 2000):
            mod.escape_steps(0.7, 0.3, -0.5, float(x2), 100_000)
    return time_call(run, repeat=repeat)


BENCHES = [
    ("scan_beta 32x16 grid", bench_scan_grid),
    ("tangent_stretch 1e6 steps", bench_tangent),
    ("tangent_word_stats 1e6 steps", bench_word_stats),
    ("simulate_into 1e6 steps", bench_simulate),
    ("escape_steps 2000 points", bench_escape),
]


def main() -> None:
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    if compiled is None:
        print("compiled kernels not built; showing pure backend only")
    header = f"{'benchmark':<30} {'pure':>10} {'compiled':>10} {'speedup':>9}"
    print(header)
    print("-" * len(header))
    for name, bench in BENCHES:
        t_pure = bench(pure, args.repeat)
        if compiled is not None:
            t_comp = bench(compiled, args.repeat)
            print(f"{name:<30} {t_pure * 1e3:>8.1f}ms {t_comp * 1e3:>8.1f}ms {t_pure / t_comp:>8.1f}x")
        else:
            print(f"{name:<30} {t_pure * 1e3:>8.1f}ms {'-':>10} {'-':>9}")


if __name__ == "__main__":
    main()
