"""Pure-Python scan kernel.

Same interface as the compiled kernel (`_fast`): segment-wise index scans
and complete-splitting counts.  Numpy does the sieving and the batch
trial-division bookkeeping; the per-prime order descent uses Python pow,
which is C-speed anyway.  Roughly 10x slower than the compiled kernel.
"""
from __future__ import annotations

import math

import numpy as np

from .. import arith

NAME = "pure"


def _gen_residues(p: int, nums, dens):
    """Generators reduced mod p, or None if p divides a numerator/denominator."""
    out = []
    for nu, de in zip(nums, dens):
        if nu % p == 0 or de % p == 0:
            return None
        out.append(nu % p * pow(de, p - 2, p) % p)
    return out


def _index_of(p: int, residues, factors) -> int:
    """(p-1) / ord(<residues> mod p), given the factorization of p-1."""
    ind = 1
    for q, e in factors:
        step = (p - 1) // q
        lift = 0
        while lift < e and all(pow(g, step, p) == 1 for g in residues):
            ind *= q
            lift += 1
            if lift < e:
                step //= q
    return ind


def scan_index_segments(x, nums, dens):
    """Yield (primes, indices) uint64 array pairs over all primes <= x.

    indices[i] == 0 marks an excluded prime (divides some generator).
    """
    x = int(x)
    nums = [int(v) for v in nums]
    dens = [int(v) for v in dens]
    base = arith.sieve_primes(math.isqrt(x))
    base_list = [int(p) for p in base]
    lo = 2
    while lo <= x:
        hi = min(lo + arith.SEGMENT, x + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base_list:
            first = max(p * p, (lo + p - 1) // p * p)
            if first < hi:
                flags[first - lo :: p] = False
        if lo <= 1:
            flags[: 2 - lo] = False
        pos = np.flatnonzero(flags)
        primes = (pos + lo).astype(np.uint64)
        npr = len(primes)
        if npr == 0:
            lo = hi
            continue
        # batch-factor p-1 over the base primes
        rem = primes - 1
        fac = [[] for _ in range(npr)]
        for q in base_list:
            if q * q > x:
                break
            qa = np.uint64(q)
            idx = np.flatnonzero(rem % qa == 0)
            if len(idx) == 0:
                continue
            sub = rem[idx]
            exp = np.zeros(len(idx), dtype=np.int64)
            while True:
                m = sub % qa == 0
                if not m.any():
                    break
                sub[m] //= qa
                exp[m] += 1
            rem[idx] = sub
            for j, e in zip(idx.tolist(), exp.tolist()):
                fac[j].append((q, e))
        big = rem > 1  # leftover prime factor > sqrt(x)
        for j in np.flatnonzero(big).tolist():
            fac[j].append((int(rem[j]), 1))

        out = np.zeros(npr, dtype=np.uint64)
        plist = primes.tolist()
        for j, p in enumerate(plist):
            residues = _gen_residues(p, nums, dens)
            if residues is None:
                continue  # excluded, leave 0
            out[j] = _index_of(p, residues, fac[j])
        yield primes, out
        lo = hi


def split_counts(m, n, nums, dens, budget):
    """Count primes p <= budget with p = 1 (mod m) and all generators
    n-th powers mod p.  Returns (samples, splits).  Requires n | m."""
    m, n, budget = int(m), int(n), int(budget)
    if m % n:
        raise ValueError("n must divide m")
    nums = [int(v) for v in nums]
    dens = [int(v) for v in dens]
    samples = splits = 0
    for seg in arith.prime_segments(budget):
        if m > 1:
            seg = seg[(seg % np.uint64(m)) == 1]
        for p in seg.tolist():
            residues = _gen_residues(p, nums, dens)
            if residues is None:
                continue
            samples += 1
            e = (p - 1) // n
            if all(pow(g, e, p) == 1 for g in residues):
                splits += 1
    return samples, splits
