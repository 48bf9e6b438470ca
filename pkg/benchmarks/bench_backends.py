#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Each backend runs in its own subprocess (the choice is fixed at import time
by MAGCOH_NUMBA).  The child warms up once, so numba JIT compilation is not
billed to the timed pass.

Usage: python3 benchmarks/bench_backends.py [--preset fig3] [--repeats 3]
"""

import argparse
import os
import subprocess
import sys

CHILD = r"""
import sys, time
from magcoh import figure_preset, run_sweep
from magcoh import kernels

preset = sys.argv[1]
repeats = int(sys.argv[2])
spec = figure_preset(preset)
n_points = spec.axis1.points * (spec.axis2.points if spec.axis2 else 1)
if spec.pair_barnett:
    n_points *= 2

run_sweep(spec)  # warm-up (JIT compile on the numba path)
best = float("inf")
for _ in range(repeats):
    t0 = time.perf_counter()
    run_sweep(spec)
    best = min(best, time.perf_counter() - t0)
print(f"{kernels.BACKEND} {n_points} {best:.6f}")
"""


def run_backend(flag: str, preset: str, repeats: int):
    env = dict(os.environ, MAGCOH_NUMBA=flag)
    out = subprocess.run(
        [sys.executable, "-c", CHILD, preset, str(repeats)],
        env=env,
        capture_output=True,
        text=True,
        check=True,
    )
    backend, n_points, seconds = out.stdout.split()
    return backend, int(n_points), float(seconds)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--preset", default="fig3",
                        choices=("fig2", "fig3", "fig4", "fig5", "fig6"))
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"preset {args.preset}, best of {args.repeats} timed passes\n")
    print(f"{'backend':<10} {'points':>8} {'total s':>10} {'us/point':>10}")
    results = {}
    for flag in ("0", "1"):
        try:
            backend, n, seconds = run_backend(flag, args.preset, args.repeats)
        except subprocess.CalledProcessError as exc:
            print(f"{'numba' if flag == '1' else 'numpy':<10} failed: {exc.stderr.strip()}")
            continue
        results[backend] = seconds
        print(f"{backend:<10} {n:>8} {seconds:>10.4f} {seconds / n * 1e6:>10.1f}")
    if len(results) == 2:
        print(f"\nspeedup (numpy/numba): {results['numpy'] / results['numba']:.2f}x")


if __name__ == "__main__":
    main()
