"""Local index-valuation probabilities and certified Euler products.

E(v, r, l) is the density of primes p (with p = 1 mod whatever is needed)
whose index has l-adic valuation exactly v, for a rank-r group in generic
position; the values over v = 0, 1, 2, ... partition 1.  A_local sums E
over a valuation set, and A_global multiplies the local factors over all
primes with a rigorous two-sided error: exceptional and small primes are
handled in exact rational arithmetic, a middle range in floating point
with an inflated rounding allowance, and the tail by nonnegative series
envelopes against explicit prime-counting bounds.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ResourceLimitError, UnsupportedSetError, ValidationError
from .index_sets import IndexSetSpec, ValuationSet
from . import arith
from .tails import NonnegSeries, series_prime_tail


def E(v: int, r: int, l: int) -> Fraction:
    """Density of l-adic index valuation exactly v for a generic rank-r group."""
    if v < 0 or r < 1 or l < 2:
        raise ValidationError("need v >= 0, r >= 1, prime l")
    y = Fraction(1, l)
    if v == 0:
        return 1 - Fraction(1, l**r * (l - 1))
    return y ** (v * (r + 1)) * sum(y**j for j in range(r + 1))


def _defect_fraction(vset: ValuationSet, r: int, y: Fraction):
    """1 - A_local as a function of y = 1/l, exact in y's arithmetic.

    Works for Fraction y or numpy arrays.  Requires 0 in vset.
    """
    s = r + 1
    block = sum(y**j for j in range(s))  # 1 + y + ... + y^r
    total = 0 * y
    for lo, hi in vset.complement().intervals:
        if hi is None:
            total = total + block * y ** (lo * s) / (1 - y**s)
        else:
            total = total + block * (y ** (lo * s) - y ** ((hi + 1) * s)) / (1 - y**s)
    return total


def A_local(vset: ValuationSet, r: int, l: int) -> Fraction:
    """Density of primes whose l-adic index valuation lies in vset."""
    if vset.is_full():
        return Fraction(1)
    y = Fraction(1, l)
    if 0 in vset:
        return 1 - _defect_fraction(vset, r, y)
    # 0 not in vset: sum E directly (the defect of the complement)
    return _defect_fraction(vset.complement(), r, y)


def defect_series(vset: ValuationSet, r: int, order: int, ymax: Fraction) -> NonnegSeries:
    """1 - A_local(vset, r, 1/y) as a nonnegative truncated series; 0 in vset."""
    if 0 not in vset:
        raise ValidationError("series form requires 0 in the valuation set")
    s = r + 1
    block = NonnegSeries.zero(order, ymax)
    for j in range(s):
        block = block + NonnegSeries.monomial(order, ymax, j)
    total = NonnegSeries.zero(order, ymax)
    for lo, hi in vset.complement().intervals:
        if hi is None:
            piece = NonnegSeries.geometric(order, ymax, step=s, start=lo * s) * block
        else:
            piece = NonnegSeries.zero(order, ymax)
            for v in range(lo, hi + 1):
                piece = piece + NonnegSeries.monomial(order, ymax, v * s) * block
        total = total + piece
    return total


@dataclass(frozen=True)
class BoundedValue:
    """A real number known to lie in [lo, hi]."""

    lo: float
    hi: float

    @property
    def value(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def error(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def __contains__(self, x) -> bool:
        return self.lo <= float(x) <= self.hi

    def contains_interval(self, other: "BoundedValue") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def overlaps(self, other: "BoundedValue") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi


#: candidate tail cutoffs, smallest adequate one is used
CUTOFF_LADDER = (10**6, 3 * 10**6, 10**7, 3 * 10**7, 10**8)
HEAD_CUTOFF = 1000
SERIES_ORDER = 12


def _tail_enclosure(vset: ValuationSet, r: int, L: int) -> tuple[float, float]:
    """Bounds for sum over primes l > L of -log A_local(vset, r, l)."""
    series = defect_series(vset, r, SERIES_ORDER, Fraction(1, HEAD_CUTOFF))
    return series_prime_tail(series.neg_log_one_minus(), L)


def A_global(spec: IndexSetSpec, r: int, target_error: float = 1e-9,
             cutoff: int | None = None) -> BoundedValue:
    """prod over all primes l of A_local at l, with certified error.

    Per-prime factors come from the spec's per-prime valuation sets; joint
    constraints (q0 > 1) do not factor over primes and are rejected here.
    """
    if spec.q0 != 1:
        raise UnsupportedSetError("joint constraints do not admit an Euler product")
    default = spec.default
    if default.is_full() and not spec.exceptions:
        return BoundedValue(1.0, 1.0)
    exc = dict(spec.exception_map)

    head = Fraction(1)
    for l, vset in sorted(exc.items()):
        f = A_local(vset, r, l)
        if f == 0:
            return BoundedValue(0.0, 0.0)
        if l <= HEAD_CUTOFF:
            head *= f
        else:
            # mid/tail below treat every large prime as default; fold in
            # the exact correction here
            head *= f / A_local(default, r, l)
    if 0 not in default:
        # A_local ~ 1/l^(r+1) for large l: the product vanishes
        return BoundedValue(0.0, 0.0)
    if default.is_full():
        v = float(head)
        return BoundedValue(v * (1 - 1e-14), v * (1 + 1e-14))

    for seg in arith.prime_segments(HEAD_CUTOFF):
        for l in seg.tolist():
            if l in exc:
                continue
            f = A_local(default, r, int(l))
            if f == 0:
                return BoundedValue(0.0, 0.0)
            head *= f

    if cutoff is not None:
        cutoffs = (int(cutoff),)
    else:
        cutoffs = CUTOFF_LADDER
    chosen = None
    tail_lo = tail_hi = 0.0
    for L in cutoffs:
        if L > arith.MAX_SIEVE_X:
            break
        tail_lo, tail_hi = _tail_enclosure(default, r, L)
        if tail_hi - tail_lo <= target_error / 4 or cutoff is not None:
            chosen = L
            break
    if chosen is None:
        raise ResourceLimitError(
            f"no cutoff up to {cutoffs[-1]} reaches tail width {target_error / 4:g}"
        )

    # middle range in float64: exact closed form per prime, fsum for the total
    mid_terms = []
    mid_abs = 0.0
    for seg in arith.prime_segments(chosen, start=HEAD_CUTOFF + 1):
        y = 1.0 / seg.astype(np.float64)
        m = _defect_fraction(default, r, y)
        t = np.log1p(-m)
        mid_terms.append(-math.fsum(t.tolist()))
        mid_abs += float(np.abs(t).sum())
    mid = math.fsum(mid_terms)
    mid_err = 100.0 * mid_abs * 2.0 ** -52  # inflated float rounding allowance

    head_f = float(head)
    head_rel = 1e-14
    lo = head_f * (1 - head_rel) * math.exp(-(mid + mid_err) - tail_hi)
    hi = head_f * (1 + head_rel) * math.exp(-(mid - mid_err) - tail_lo)
    return BoundedValue(lo, hi)
