"""Empirical index statistics over primes up to x.

The kernel scans primes segment by segment and returns the index of the
reduction of the group modulo each prime (0 marks primes dividing a
generator, which are excluded).  Counting then reduces to numpy masks;
membership in a valuation-described set is evaluated once per distinct
index value, since indices repeat heavily.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np

from . import arith, kernel
from .errors import ValidationError
from .index_sets import IndexSetSpec
from .kummer import FrobeniusCondition, RationalGroup


@dataclass(frozen=True)
class EmpiricalCount:
    x: int
    total: int  # primes considered (scanned minus excluded)
    matched: int
    excluded: int
    in_class: int | None = None  # primes in the allowed residue classes

    @property
    def ratio(self) -> float:
        return self.matched / self.total if self.total else math.nan

    @property
    def class_ratio(self) -> float:
        """matched / (primes in the residue classes), when filtering."""
        if self.in_class is None:
            return self.ratio
        return self.matched / self.in_class if self.in_class else math.nan

    def to_dict(self) -> dict:
        d = {"x": self.x, "total": self.total, "matched": self.matched,
             "excluded": self.excluded, "ratio": self.ratio}
        if self.in_class is not None:
            d["in_class"] = self.in_class
        return d


def _gen_arrays(group: RationalGroup):
    nums = [g.numerator for g in group.generators]
    dens = [g.denominator for g in group.generators]
    return nums, dens


def index_of(group: RationalGroup, p: int) -> int:
    """(p-1) / ord(G mod p); raises for primes meeting a generator."""
    p = int(p)
    if not arith.is_prime(p):
        raise ValidationError(f"{p} is not prime")
    nums, dens = _gen_arrays(group)
    for ps, inds in kernel.scan_index_segments(p, nums, dens):
        if len(ps) and ps[-1] == p:
            ind = int(inds[-1])
            if ind == 0:
                raise ValidationError(f"{p} divides a generator")
            return ind
    raise ValidationError(f"{p} not reached in scan")


def _frob_masks(p: np.ndarray, frob: FrobeniusCondition | None):
    """(excluded-by-conductor mask, in-class mask)."""
    if frob is None or frob.is_trivial:
        return np.zeros(len(p), dtype=bool), np.ones(len(p), dtype=bool)
    f = frob.conductor
    exc = np.zeros(len(p), dtype=bool)
    for q, _ in arith.factorize(f):
        exc |= p == q
    res = p % np.uint64(f)
    cls = np.zeros(len(p), dtype=bool)
    for c in frob.residues:
        cls |= res == c
    return exc, cls & ~exc


def count_index_in_set(group: RationalGroup, spec: IndexSetSpec, x: int,
                       frob: FrobeniusCondition | None = None) -> EmpiricalCount:
    """Count primes p <= x with index in the set (and residue in the class)."""
    nums, dens = _gen_arrays(group)
    total = matched = excluded = in_class = 0
    chi_cache: dict[int, bool] = {}
    for p, ind in kernel.scan_index_segments(x, nums, dens):
        bad = ind == 0
        fexc, cls = _frob_masks(p, frob)
        bad |= fexc
        excluded += int(bad.sum())
        good = ~bad
        total += int(good.sum())
        sel = good & cls
        in_class += int(sel.sum())
        vals, counts = np.unique(ind[sel], return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            hit = chi_cache.get(v)
            if hit is None:
                hit = chi_cache[v] = bool(spec.contains(int(v)))
            if hit:
                matched += int(c)
    return EmpiricalCount(int(x), total, matched, excluded,
                          in_class=in_class if frob and not frob.is_trivial else None)


def count_divisible(group: RationalGroup, n: int, x: int) -> EmpiricalCount:
    """Count primes p <= x with n dividing the index."""
    n = int(n)
    if n < 1:
        raise ValidationError("n must be >= 1")
    nums, dens = _gen_arrays(group)
    total = matched = excluded = 0
    for p, ind in kernel.scan_index_segments(x, nums, dens):
        bad = ind == 0
        excluded += int(bad.sum())
        good = ~bad
        total += int(good.sum())
        matched += int((good & (ind % np.uint64(n) == 0)).sum())
    return EmpiricalCount(int(x), total, matched, excluded)


def valuation_histogram(group: RationalGroup, l: int, x: int) -> tuple[EmpiricalCount, dict[int, int]]:
    """Distribution of v_l(index) over primes p <= x."""
    l = int(l)
    if not arith.is_prime(l):
        raise ValidationError(f"{l} is not prime")
    nums, dens = _gen_arrays(group)
    total = excluded = 0
    hist: dict[int, int] = {}
    for p, ind in kernel.scan_index_segments(x, nums, dens):
        bad = ind == 0
        excluded += int(bad.sum())
        good = ~bad
        total += int(good.sum())
        vals, counts = np.unique(ind[good], return_counts=True)
        for v, c in zip(vals.tolist(), counts.tolist()):
            hist_v = 0
            while v % l == 0:
                hist_v += 1
                v //= l
            hist[hist_v] = hist.get(hist_v, 0) + int(c)
    return EmpiricalCount(int(x), total, total, excluded), dict(sorted(hist.items()))


def li(x) -> float:
    """Logarithmic integral, the smooth model for pi(x)."""
    with mpmath.workdps(30):
        return float(mpmath.li(x))


@dataclass(frozen=True)
class Comparison:
    observed: float
    expected_lo: float
    expected_hi: float
    samples: int
    band: float  # 3 sigma binomial band around the expected value
    ok: bool

    def to_dict(self) -> dict:
        return {"observed": self.observed, "expected_lo": self.expected_lo,
                "expected_hi": self.expected_hi, "samples": self.samples,
                "band": self.band, "ok": self.ok}


def compare(observed_ratio: float, samples: int, expected_lo: float,
            expected_hi: float | None = None, nsigma: float = 3.0) -> Comparison:
    """Is the observed frequency within nsigma binomial deviations of the
    expected density (plus the width of its certified bracket)?"""
    if expected_hi is None:
        expected_hi = expected_lo
    d = 0.5 * (expected_lo + expected_hi)
    d = min(max(d, 0.0), 1.0)
    band = nsigma * math.sqrt(d * (1 - d) / samples) if samples else math.inf
    lo = expected_lo - band
    hi = expected_hi + band
    return Comparison(observed_ratio, expected_lo, expected_hi, samples, band,
                      lo <= observed_ratio <= hi)
