"""Compare the compiled and pure-Python scan kernels.

Usage: python benchmarks/bench_kernels.py [--x N] [--budget N]
"""
import argparse
import time

import numpy as np

from indexdensity.kernel import pure

try:
    from indexdensity.kernel import _fast as fast
except ImportError:
    fast = None


def time_scan(mod, x, nums, dens):
    t0 = time.perf_counter()
    primes = indices = 0
    checksum = 0
    for p, ind in mod.scan_index_segments(x, nums, dens):
        primes += len(p)
        checksum ^= int(np.bitwise_xor.reduce(ind))
    return time.perf_counter() - t0, primes, checksum


def time_split(mod, m, n, nums, dens, budget):
    t0 = time.perf_counter()
    samples, splits = mod.split_counts(m, n, nums, dens, budget)
    return time.perf_counter() - t0, samples, splits


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--x", type=int, default=10**6,
                    help="scan primes up to x (default 1e6)")
    ap.add_argument("--budget", type=int, default=10**6,
                    help="prime budget for the splitting counter")
    args = ap.parse_args()

    mods = [("pure", pure)] + ([("fast", fast)] if fast else [])
    if fast is None:
        print("compiled kernel not built; benchmarking pure only")

    print(f"index scan, G = <2>, x = {args.x}")
    base = None
    for name, mod in mods:
        dt, primes, chk = time_scan(mod, args.x, [2], [1])
        speed = f"  ({base / dt:.1f}x)" if base else ""
        base = base or dt
        print(f"  {name:5s} {dt:8.3f}s  primes={primes}  checksum={chk}{speed}")

    print(f"index scan, G = <2, 3>, x = {args.x}")
    base = None
    for name, mod in mods:
        dt, primes, chk = time_scan(mod, args.x, [2, 3], [1, 1])
        speed = f"  ({base / dt:.1f}x)" if base else ""
        base = base or dt
        print(f"  {name:5s} {dt:8.3f}s  primes={primes}  checksum={chk}{speed}")

    print(f"splitting counts, G = <2>, m = n = 8, budget = {args.budget}")
    base = None
    for name, mod in mods:
        dt, samples, splits = time_split(mod, 8, 8, [2], [1], args.budget)
        speed = f"  ({base / dt:.1f}x)" if base else ""
        base = base or dt
        print(f"  {name:5s} {dt:8.3f}s  samples={samples}  "
              f"splits={splits}{speed}")


if __name__ == "__main__":
    main()
