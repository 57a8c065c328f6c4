"""Benchmark the numba and numpy simulation kernels against each other.

Both backends must produce identical integer aggregates; this script
verifies that on every run and reports wall-clock throughput so the
speedup of the jitted path stays visible.

    python3 benchmarks/bench_backends.py --trials 200000 --d 6
"""

import argparse
import importlib
import time

import numpy as np


def load(name: str):
    return importlib.import_module(f"couponlab._mc_{name}")


def time_kernel(module, kernel: str, args: tuple, repeats: int) -> tuple[float, tuple]:
    fn = getattr(module, kernel)
    result = tuple(int(v) for v in fn(*args))  # warm-up (and jit compile)
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    assert tuple(int(v) for v in out) == result
    return best, result


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--d", type=int, default=6, help="coupon types")
    parser.add_argument("--h", type=int, default=2, help="copies required (collector)")
    parser.add_argument("--trials", type=int, default=200000)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--repeats", type=int, default=3, help="timed runs per cell")
    args = parser.parse_args(argv)

    backends = {}
    for name in ("numpy", "numba"):
        try:
            backends[name] = load(name)
        except ImportError:
            print(f"{name}: not importable, skipping")
    if not backends:
        print("no backend available")
        return 1

    seed = np.uint64(args.seed)
    jobs = {
        "race_counts": (args.d, args.trials, 0, seed),
        "collector_stats": (args.d, args.h, args.trials, 0, seed),
    }

    print(f"d={args.d} h={args.h} trials={args.trials} seed={args.seed}")
    print(f"{'kernel':<16} {'backend':<8} {'best (s)':>10} {'trials/s':>12}")
    for kernel, job in jobs.items():
        results = {}
        for name, module in backends.items():
            elapsed, agg = time_kernel(module, kernel, job, args.repeats)
            results[name] = agg
            print(f"{kernel:<16} {name:<8} {elapsed:>10.4f} {args.trials / elapsed:>12.0f}")
        if len(results) == 2 and results["numpy"] != results["numba"]:
            print(f"MISMATCH in {kernel}: {results}")
            return 1
    if len(backends) == 2:
        print("aggregates identical across backends")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
