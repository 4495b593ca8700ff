#!/usr/bin/env python3
"""Time the compiled kernels against their plain-Python/numpy references.

Run with numba installed to see both paths side by side; under
``CPASS_DISABLE_NUMBA=1`` only the reference path exists and the script
says so.  Timings are best-of-``repeats`` over ``loops`` calls each, so
one-off JIT compilation never lands inside a measured window.

    python3 benchmarks/bench_kernels.py --sizes 64 512 4096
"""

import argparse
import time

import numpy as np

from cpass import _kernels as k

K_G = 821.5696824425885
K0 = 586.8354874589918


def best_of(fn, loops, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        for _ in range(loops):
            fn()
        best = min(best, (time.perf_counter() - t0) / loops)
    return best


def make_cases(n, rng):
    delta = rng.uniform(0.001, 0.5, n)
    spacings = rng.uniform(0.1, 2.0, n)
    wg = np.cumsum(spacings)
    r = rng.uniform(1.0, 80.0, n)
    amp = rng.uniform(0.0, 0.2, n)
    x_nom = np.arange(1.0, n + 1.0)
    target = k.phase_total(1.0, 35.0, 0.0, 1.0, K_G, K0)
    return {
        "chain": lambda f: f(1.0 + 0.0j, delta, spacings, K_G),
        "radiated_sum": lambda f: f(wg, r, amp, 8.52e-4, K_G, K0),
        "align_offsets": lambda f: f(x_nom, 35.0, 0.0, 1.0, K_G, K0, 0.01, target),
    }


PAIRS = {
    "chain": (k.chain_jit, k._chain_py),
    "radiated_sum": (k.radiated_sum_jit, k._radiated_sum_py),
    "align_offsets": (k.align_jit, k._align_py),
}


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[64, 512, 4096])
    parser.add_argument("--loops", type=int, default=20)
    parser.add_argument("--repeats", type=int, default=5)
    args = parser.parse_args()

    print(f"backend: {k.backend()}")
    if k.backend() != "numba":
        print("numba inactive; timing the reference path only\n")
    else:
        k.warmup()
        print()

    header = f"{'kernel':<14}{'n':>6}  {'reference':>12}  {'compiled':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    rng = np.random.default_rng(0)
    for n in args.sizes:
        cases = make_cases(n, rng)
        for name, call in cases.items():
            jit_fn, py_fn = PAIRS[name]
            t_py = best_of(lambda: call(py_fn), args.loops, args.repeats)
            if jit_fn is None:
                print(f"{name:<14}{n:>6}  {t_py * 1e6:>10.1f}us  {'-':>12}  {'-':>8}")
                continue
            call(jit_fn)  # make sure this shape is compiled
            t_jit = best_of(lambda: call(jit_fn), args.loops, args.repeats)
            print(f"{name:<14}{n:>6}  {t_py * 1e6:>10.1f}us  {t_jit * 1e6:>10.1f}us"
                  f"  {t_py / t_jit:>7.1f}x")


if __name__ == "__main__":
    main()
