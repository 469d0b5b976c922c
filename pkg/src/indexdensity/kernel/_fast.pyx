# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled scan kernel: segmented index scans and splitting counts.

Mirrors kernel/pure.py.  All moduli must fit in 32 bits (enforced by the
wrapper); 64-bit intermediates are then exact.
"""
from libc.stdint cimport uint64_t, int64_t, uint8_t, int32_t
from libc.stdlib cimport malloc, free

import math

import numpy as np

from .. import arith

NAME = "fast"

DEF MAXFAC = 16


cdef inline uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) nogil:
    cdef uint64_t r = 1
    b %= m
    while e:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


def _scan_segment(uint64_t lo, uint64_t hi, int64_t[::1] base,
                  uint64_t[::1] nums, uint64_t[::1] dens,
                  uint8_t[::1] negs):
    """Primes and generator indices for the window [lo, hi)."""
    cdef Py_ssize_t seglen = <Py_ssize_t>(hi - lo)
    cdef Py_ssize_t nbase = base.shape[0]
    cdef Py_ssize_t ngen = nums.shape[0]

    flags_arr = np.ones(seglen, dtype=np.uint8)
    cdef uint8_t[::1] flags = flags_arr
    cdef Py_ssize_t i, j, k
    cdef uint64_t p, q, first, v
    # sieve the window
    for i in range(nbase):
        p = <uint64_t>base[i]
        first = p * p
        if first < lo:
            first = (lo + p - 1) // p * p
        j = <Py_ssize_t>(first - lo)
        while j < seglen:
            flags[j] = 0
            j += <Py_ssize_t>p
    if lo == 0:
        flags[0] = 0
        if seglen > 1:
            flags[1] = 0
    elif lo == 1:
        flags[0] = 0

    cdef Py_ssize_t npr = 0
    for i in range(seglen):
        if flags[i]:
            npr += 1
    primes_arr = np.empty(npr, dtype=np.uint64)
    cdef uint64_t[::1] primes = primes_arr
    # ordinal map: position of p-1 in window -> prime ordinal (or -1)
    posmap_arr = np.full(seglen, -1, dtype=np.int32)
    cdef int32_t[::1] posmap = posmap_arr
    k = 0
    for i in range(seglen):
        if flags[i]:
            primes[k] = lo + <uint64_t>i
            if i > 0:
                posmap[i - 1] = <int32_t>k
            k += 1
    # note: if p-1 falls in the previous window (p == lo) we factor it
    # directly below instead of via the sieve pass.

    rem_arr = np.empty(npr, dtype=np.uint64)
    cdef uint64_t[::1] rem = rem_arr
    for k in range(npr):
        rem[k] = primes[k] - 1
    facp_arr = np.zeros(npr * MAXFAC, dtype=np.uint64)
    face_arr = np.zeros(npr * MAXFAC, dtype=np.uint8)
    nfac_arr = np.zeros(npr, dtype=np.int32)
    cdef uint64_t[::1] facp = facp_arr
    cdef uint8_t[::1] face = face_arr
    cdef int32_t[::1] nfac = nfac_arr

    cdef int32_t ordi
    cdef uint64_t val
    cdef int e
    for i in range(nbase):
        q = <uint64_t>base[i]
        first = (lo + q - 1) // q * q  # multiples of q in [lo, hi): these are p-1 values
        # p-1 values live at window positions (p-1)-lo for p in [lo+1, hi]
        v = first
        while v < hi:
            if v >= lo and v > 0:
                ordi = posmap[<Py_ssize_t>(v - lo)]
                if ordi >= 0:
                    val = rem[ordi]
                    e = 0
                    while val % q == 0:
                        val //= q
                        e += 1
                    if e > 0:
                        rem[ordi] = val
                        j = nfac[ordi]
                        facp[ordi * MAXFAC + j] = q
                        face[ordi * MAXFAC + j] = <uint8_t>e
                        nfac[ordi] = <int32_t>(j + 1)
            v += q
    # first prime of the window: p-1 sits in the previous window
    if npr > 0 and primes[0] == lo and lo > 2:
        ordi = 0
        nfac[0] = 0
        val = lo - 1
        rem[0] = 1
        for i in range(nbase):
            q = <uint64_t>base[i]
            e = 0
            while val % q == 0:
                val //= q
                e += 1
            if e > 0:
                j = nfac[0]
                facp[j] = q
                face[j] = <uint8_t>e
                nfac[0] = <int32_t>(j + 1)
            if q * q > val:
                break
        rem[0] = val if val > 1 else 1
        if rem[0] == 1:
            rem[0] = 1
    for k in range(npr):
        if rem[k] > 1:
            j = nfac[k]
            facp[k * MAXFAC + j] = rem[k]
            face[k * MAXFAC + j] = 1
            nfac[k] = <int32_t>(j + 1)

    ind_arr = np.zeros(npr, dtype=np.uint64)
    cdef uint64_t[::1] ind = ind_arr
    cdef uint64_t g, step, indval
    cdef bint excluded, allone
    cdef int lift, ecap
    cdef uint64_t res[64]
    with nogil:
        for k in range(npr):
            p = primes[k]
            excluded = False
            for j in range(ngen):
                if nums[j] % p == 0 or dens[j] % p == 0:
                    excluded = True
                    break
                res[j] = nums[j] % p * powmod(dens[j] % p, p - 2, p) % p
                if negs[j]:
                    res[j] = p - res[j]
            if excluded:
                continue
            indval = 1
            for i in range(nfac[k]):
                q = facp[k * MAXFAC + i]
                ecap = <int>face[k * MAXFAC + i]
                step = (p - 1) // q
                lift = 0
                while lift < ecap:
                    allone = True
                    for j in range(ngen):
                        if powmod(res[j], step, p) != 1:
                            allone = False
                            break
                    if not allone:
                        break
                    indval *= q
                    lift += 1
                    if lift < ecap:
                        step //= q
            ind[k] = indval
    return primes_arr, ind_arr


def scan_index_segments(x, nums, dens):
    """Yield (primes, indices) uint64 pairs; indices==0 marks excluded."""
    x = int(x)
    if x >= 1 << 32:
        raise ValueError("compiled kernel handles x < 2^32")
    nums_a = np.array([abs(int(v)) for v in nums], dtype=np.uint64)
    dens_a = np.array([int(v) for v in dens], dtype=np.uint64)
    negs_a = np.array([1 if int(v) < 0 else 0 for v in nums], dtype=np.uint8)
    if len(nums_a) > 64:
        raise ValueError("at most 64 generators")
    base = arith.sieve_primes(math.isqrt(x)).astype(np.int64)
    lo = 2
    while lo <= x:
        hi = min(lo + arith.SEGMENT, x + 1)
        primes, ind = _scan_segment(lo, hi, base, nums_a, dens_a, negs_a)
        if len(primes):
            yield primes, ind
        lo = hi


def _split_batch(uint64_t[::1] primes, uint64_t n,
                 uint64_t[::1] nums, uint64_t[::1] dens,
                 uint8_t[::1] negs):
    cdef Py_ssize_t npr = primes.shape[0]
    cdef Py_ssize_t ngen = nums.shape[0]
    cdef int64_t samples = 0, splits = 0
    cdef Py_ssize_t k, j
    cdef uint64_t p, e, g
    cdef bint excluded, allone
    with nogil:
        for k in range(npr):
            p = primes[k]
            excluded = False
            allone = True
            for j in range(ngen):
                if nums[j] % p == 0 or dens[j] % p == 0:
                    excluded = True
                    break
            if excluded:
                continue
            samples += 1
            e = (p - 1) // n
            for j in range(ngen):
                g = nums[j] % p * powmod(dens[j] % p, p - 2, p) % p
                if negs[j]:
                    g = p - g
                if powmod(g, e, p) != 1:
                    allone = False
                    break
            if allone:
                splits += 1
    return samples, splits


def split_counts(m, n, nums, dens, budget):
    """Count primes p <= budget, p = 1 (mod m), with all generators n-th
    powers mod p.  Returns (samples, splits).  Requires n | m."""
    m, n, budget = int(m), int(n), int(budget)
    if m % n:
        raise ValueError("n must divide m")
    nums_a = np.array([abs(int(v)) for v in nums], dtype=np.uint64)
    dens_a = np.array([int(v) for v in dens], dtype=np.uint64)
    negs_a = np.array([1 if int(v) < 0 else 0 for v in nums], dtype=np.uint8)
    samples = splits = 0
    for seg in arith.prime_segments(budget):
        if m > 1:
            seg = seg[(seg % np.uint64(m)) == 1]
        if not len(seg):
            continue
        s, sp = _split_batch(np.ascontiguousarray(seg), n, nums_a, dens_a,
                             negs_a)
        samples += s
        splits += sp
    return samples, splits
