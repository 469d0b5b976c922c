"""Elementary arithmetic: sieves, factorization, multiplicative functions.

Everything here is exact integer arithmetic.  Sieve outputs are numpy
arrays (the large scans need them); the scalar functions take and return
plain Python ints and work for arbitrary precision inputs.
"""
from __future__ import annotations

import math
import os
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import ResourceLimitError, ValidationError

#: hard cap for sieve ranges; above this we refuse rather than thrash.
MAX_SIEVE_X = int(os.environ.get("INDEXDENSITY_MAX_X", 2 * 10**9))

#: segment length for segmented sieving (numbers per block).
SEGMENT = 1 << 22

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def _check_limit(x) -> int:
    x = int(x)
    if x > MAX_SIEVE_X:
        raise ResourceLimitError(
            f"sieve limit {x} exceeds configured maximum {MAX_SIEVE_X}"
        )
    return x


def _simple_sieve(x: int) -> np.ndarray:
    """Primes <= x via a plain odd-only sieve (x small enough for one array)."""
    if x < 2:
        return np.empty(0, dtype=np.uint64)
    # odd composites only; index i represents 2i+1
    n = (x - 1) // 2 + 1
    flags = np.ones(n, dtype=bool)
    flags[0] = False  # 1
    for i in range(1, (math.isqrt(x) - 1) // 2 + 1):
        if flags[i]:
            p = 2 * i + 1
            flags[(p * p - 1) // 2 :: p] = False
    odds = 2 * np.flatnonzero(flags).astype(np.uint64) + 1
    return np.concatenate([np.array([2], dtype=np.uint64), odds])


def prime_segments(x, start: int = 2) -> Iterator[np.ndarray]:
    """Yield numpy arrays of primes in [start, x], in blocks of SEGMENT numbers.

    Memory stays bounded regardless of x, so this is the entry point for
    scans past 10**8.
    """
    x = _check_limit(x)
    if x < start:
        return
    base = _simple_sieve(math.isqrt(x))
    if start <= math.isqrt(x):
        head = base[base >= start]
        if len(head):
            yield head
        start = math.isqrt(x) + 1
    base_i = base.astype(np.int64)
    lo = start
    while lo <= x:
        hi = min(lo + SEGMENT, x + 1)
        flags = np.ones(hi - lo, dtype=bool)
        for p in base_i:
            p = int(p)
            first = max(p * p, (lo + p - 1) // p * p)
            if first < hi:
                flags[first - lo :: p] = False
        if lo <= 1:
            flags[: 2 - lo] = False
        seg = np.flatnonzero(flags).astype(np.uint64) + np.uint64(lo)
        if len(seg):
            yield seg
        lo = hi


def sieve_primes(x) -> np.ndarray:
    """All primes <= x as a uint64 array (segmented above 10**8)."""
    x = _check_limit(x)
    if x <= 10**8:
        return _simple_sieve(x)
    parts = list(prime_segments(x))
    return np.concatenate(parts) if parts else np.empty(0, dtype=np.uint64)


def prime_count(x) -> int:
    """pi(x), by sieving."""
    return sum(len(seg) for seg in prime_segments(x))


def spf_table(x) -> np.ndarray:
    """Smallest-prime-factor table for 0..x (uint32, so x < 2**32)."""
    x = int(x)
    if x >= 2**32:
        raise ResourceLimitError("spf table limited to 32-bit entries")
    spf = np.zeros(x + 1, dtype=np.uint32)
    for p in range(2, math.isqrt(x) + 1):
        if spf[p] == 0:
            view = spf[p::p]
            view[view == 0] = p
    rest = np.flatnonzero(spf == 0)
    spf[rest] = rest
    if x >= 1:
        spf[1] = 1
    return spf


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all 64-bit n (and beyond, w.h.p.)."""
    n = int(n)
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        y = pow(a, d, n)
        if y in (1, n - 1):
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=1 << 16)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 as a sorted tuple of (p, e) pairs."""
    n = int(n)
    if n < 1:
        raise ValidationError("factorize expects n >= 1")
    out = []
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    # wheel over 6k+-1
    p = 5
    while p * p <= n:
        for q in (p, p + 2):
            if n % q == 0:
                e = 0
                while n % q == 0:
                    n //= q
                    e += 1
                out.append((q, e))
        p += 6
    if n > 1:
        out.append((n, 1))
    return tuple(sorted(out))


def divisors(n: int) -> list[int]:
    """All positive divisors of n (unsorted order is fine for callers)."""
    ds = [1]
    for p, e in factorize(n):
        ds = [d * p**k for d in ds for k in range(e + 1)]
    return ds


def moebius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n: int) -> int:
    out = 1
    for p, e in factorize(n):
        out *= (p - 1) * p ** (e - 1)
    return out


def radical(n: int) -> int:
    out = 1
    for p, _ in factorize(n):
        out *= p
    return out


def omega(n: int) -> int:
    return len(factorize(n))


def valuation(n: int, p: int) -> int:
    """Exponent of prime p in n (n >= 1)."""
    if n < 1:
        raise ValidationError("valuation expects n >= 1")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def multiplicative_order(a: int, p: int, factors=None) -> int:
    """Order of a modulo prime p.  `factors` may pass a factorization of p-1."""
    a = a % p
    if a == 0:
        raise ValidationError(f"{p} divides the base; order undefined")
    if not is_prime(p):
        raise ValidationError(f"{p} is not prime")
    t = p - 1
    for q, e in factors if factors is not None else factorize(p - 1):
        t //= q**e
        y = pow(a, t, p)
        while y != 1:
            y = pow(y, q, p)
            t *= q
    return t


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n)."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -sign
    v = 0
    while n % 2 == 0:
        n //= 2
        v += 1
    if v:
        if a % 2 == 0:
            return 0
        if v % 2 and a % 8 in (3, 5):
            sign = -sign
    # Jacobi symbol on odd n > 0 (periodic in a mod n)
    a %= n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a, n = n % a, a
    return sign if n == 1 else 0
