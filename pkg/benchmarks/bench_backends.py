#!/usr/bin/env python3
"""Benchmark the compiled evaluation kernel against the pure-Python twin.

Times the program VM on batched evaluation (the hot loop of grid scans)
and on a realistic scan workload (power-table traces).  Run after an
editable install:

    python3 benchmarks/bench_backends.py [--points 200000]
"""

import argparse
import time

import numpy as np

from fracvarlab import _evalcore_py, backend
from fracvarlab.expr import compile_expr, parse

WORKLOADS = [
    ("power family", "powabs(x, 0.3)"),
    ("trig pole", "tan(x) / (1 + x^2)"),
    ("mixed", "sin(x)*powabs(x, 0.5) + exp(x/8) - cot(x + 4)"),
]


def time_once(fn, *args):
    t0 = time.perf_counter()
    fn(*args)
    return time.perf_counter() - t0


def bench_eval_many(points):
    rng = np.random.default_rng(0)
    xs = rng.uniform(-3.0, 3.0, points)
    print(f"batched evaluation, {points} points per expression")
    print(f"{'workload':<14} {'python':>12} {'compiled':>12} {'speedup':>9}")
    for name, text in WORKLOADS:
        code, consts = compile_expr(parse(text))
        t_py = min(time_once(_evalcore_py.eval_program_many, code, consts, xs)
                   for _ in range(3))
        if backend.HAVE_COMPILED:
            from fracvarlab import _evalcore
            t_c = min(time_once(_evalcore.eval_program_many, code, consts, xs)
                      for _ in range(3))
            print(f"{name:<14} {t_py:>10.4f}s {t_c:>10.4f}s {t_py / t_c:>8.1f}x")
        else:
            print(f"{name:<14} {t_py:>10.4f}s {'n/a':>12} {'n/a':>9}")
    print()


def bench_scan():
    import os

    from fracvarlab.exponents import verify_power_table
    from fracvarlab.limits import make_schedule

    sched = make_schedule(2.0 ** -4, 0.5, 30)
    alphas = [0.1 * k for k in range(1, 20)]
    betas = [0.3, 0.5, 0.7, 1.0]
    xs = [0.0, 0.5, -0.5]
    label = "compiled" if backend.HAVE_COMPILED else "python"
    t = time_once(verify_power_table, "pow", alphas, betas, xs, sched)
    cells = len(alphas) * len(betas) * len(xs)
    print(f"power-table scan, {cells} cells, {label} backend "
          f"(FRACVARLAB_BACKEND={os.environ.get('FRACVARLAB_BACKEND', 'auto')}): "
          f"{t:.3f}s")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--points", type=int, default=200_000)
    args = ap.parse_args()
    print(f"active backend: {backend.backend_name()}")
    bench_eval_many(args.points)
    bench_scan()


if __name__ == "__main__":
    main()
