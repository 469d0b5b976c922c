"""Densities of primes whose index lies in a valuation-described set.

Everything reduces to sums of g(n) * c(n) / [F K_{n,n} : Q] over the
support of the Moebius transform g: the term at n is the (signed) density
of primes splitting completely in the cyclotomic-Kummer field at level n,
filtered by an optional congruence condition.  The series method sums the
support directly with a Rankin-style certified tail; the product method
splits off an exact finite sum at the entangled primes and multiplies by
a certified Euler product over the rest; special shapes (finitely many
constrained primes, a single prime, finite-Q truncations) are exact.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import arith, kummer
from .constants import A_global, A_local, BoundedValue, HEAD_CUTOFF
from .errors import ResourceLimitError, UnsupportedSetError, ValidationError
from .index_sets import INF, IndexSetSpec, ValuationSet, custom
from .kummer import FrobeniusCondition, RationalGroup
from .tails import prime_tail_bounds


@dataclass(frozen=True)
class DensityResult:
    lo: float
    hi: float
    method: str
    terms: int
    certified: bool
    exact: Fraction | None = None
    detail: tuple = field(default_factory=tuple)

    @property
    def value(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def error(self) -> float:
        return 0.5 * (self.hi - self.lo)

    def overlaps(self, other: "DensityResult", slack: float = 0.0) -> bool:
        return self.lo - slack <= other.hi and other.lo - slack <= self.hi

    def to_dict(self) -> dict:
        d = {
            "value": self.value,
            "lo": self.lo,
            "hi": self.hi,
            "method": self.method,
            "terms": self.terms,
            "certified": self.certified,
        }
        if self.exact is not None:
            d["exact"] = str(self.exact)
        if self.detail:
            d["detail"] = {k: v for k, v in self.detail}
        return d


def _full_condition(frob: FrobeniusCondition) -> FrobeniusCondition:
    if frob.is_trivial:
        return frob
    f = frob.conductor
    return FrobeniusCondition.make(f, [c for c in range(1, f) if math.gcd(c, f) == 1])


def _term(group: RationalGroup, spec: IndexSetSpec, frob: FrobeniusCondition,
          frob_full: FrobeniusCondition, n: int) -> Fraction:
    """g(n) * c(n) / [F K_{n,n} : Q], the signed density at level n."""
    gval = spec.g(n)
    if gval == 0:
        return Fraction(0)
    deg = kummer.degree(group, n, n)
    if frob.is_trivial:
        return Fraction(gval, deg)
    c_sel = kummer.c_coefficient(frob, group, n)
    if c_sel == 0:
        return Fraction(0)
    c_all = kummer.c_coefficient(frob_full, group, n)
    return Fraction(gval * c_sel, c_all * deg)


# -- support enumeration ---------------------------------------------------------


def _menu_for(spec: IndexSetSpec, l: int) -> tuple[int, ...]:
    """Exponents e >= 1 at which the local weight of g can be nonzero."""
    if l in spec.q0_primes:
        vq = arith.valuation(spec.q0, l)
        jmax = 0
        for box in spec.boxes:
            for p, vset in box:
                if p == l:
                    js = vset.jumps()
                    if js:
                        jmax = max(jmax, max(js))
        exc = spec.exception_map.get(l)
        if exc is not None:
            js = exc.jumps()
            if js:
                jmax = max(jmax, max(js))
        return tuple(range(1, vq + jmax + 1))
    vset = spec.exception_map.get(l, spec.default)
    return tuple(vset.jumps())


def _support(spec: IndexSetSpec, N: int, max_terms: int,
             primes_filter=None) -> list[int]:
    """All n <= N where g(spec, n) can be nonzero, ascending."""
    special = sorted(set(spec.constrained_primes()))
    default_jumps = spec.default.jumps()
    plist: list[tuple[int, tuple[int, ...]]] = []
    for l in special:
        menu = _menu_for(spec, l)
        menu = tuple(e for e in menu if l**e <= N)
        if menu:
            plist.append((l, menu))
    if default_jumps:
        kmin = min(default_jumps)
        lmax = int(round(N ** (1.0 / kmin))) + 1
        for seg in arith.prime_segments(lmax):
            for l in seg.tolist():
                l = int(l)
                if l in special:
                    continue
                menu = tuple(e for e in default_jumps if l**e <= N)
                if menu:
                    plist.append((l, menu))
    if primes_filter is not None:
        plist = [(l, m) for l, m in plist if primes_filter(l)]
    plist.sort(key=lambda lm: lm[0] ** lm[1][0])
    out = [1]

    def rec(i: int, n: int):
        if len(out) > max_terms:
            raise ResourceLimitError(f"series support exceeds {max_terms} terms")
        for j in range(i, len(plist)):
            l, menu = plist[j]
            if n * l ** menu[0] > N:
                break  # sorted by minimal contribution
            for e in menu:
                m = n * l**e
                if m <= N:
                    out.append(m)
                    rec(j + 1, m)

    rec(0, 1)
    return sorted(out)


# -- Rankin-style certified tail ---------------------------------------------------


def _rankin_tail(spec: IndexSetSpec, r: int, bound_B: int, N: int) -> float:
    """Upper bound for sum over support n > N of |g(n)| * B / (phi(n) n^r).

    Each |term| is at most that quantity, so this bounds the omitted tail
    of the series.  Minimized over a grid of Rankin exponents.
    """
    default_jumps = spec.default.jumps()
    if not default_jumps:
        return 0.0
    kmin = min(default_jumps)
    # convergence of the prime sums requires sigma < r + 1 - 1/e for all
    # default exponents e; kmin is binding
    smax = (r + 1) - 1.0 / kmin
    if smax <= 0.1:
        raise UnsupportedSetError("series tail does not converge fast enough")
    w_joint = 2.0 ** len(spec.q0_primes)
    best = math.inf
    special = sorted(set(spec.constrained_primes()))
    grid = [smax * t for t in (0.3, 0.5, 0.7, 0.85, 0.93, 0.97)]
    for sigma in grid:
        logP = 0.0
        ok = True
        for l in special:
            w = 0.0
            for e in _menu_for(spec, l):
                w += l ** (sigma * e) / (arith.euler_phi(l**e) * float(l) ** (r * e))
            logP += math.log1p(w)
        L0 = 1000
        for seg in arith.prime_segments(L0):
            for l in seg.tolist():
                l = int(l)
                if l in special:
                    continue
                w = 0.0
                for e in default_jumps:
                    w += l ** (sigma * e) / (arith.euler_phi(l**e) * float(l) ** (r * e))
                logP += math.log1p(w)
        # primes > L0: w <= sum_e 2 l^(sigma e - e(r+1)); sum over primes
        # bounded by the integer sum integral L0^(1-a)/(a-1)
        for e in default_jumps:
            a = e * (r + 1) - sigma * e
            if a <= 1.0:
                ok = False
                break
            logP += 2.0 * L0 ** (1 - a) / (a - 1)
        if not ok:
            continue
        bound = bound_B * w_joint * N ** (-sigma) * math.exp(logP)
        best = min(best, bound)
    if not math.isfinite(best):
        raise UnsupportedSetError("no valid Rankin exponent")
    return best


# -- methods -----------------------------------------------------------------------


MAX_SERIES_TERMS = 400_000


def density_series(group: RationalGroup, spec: IndexSetSpec,
                   frob: FrobeniusCondition | None = None,
                   eps: float = 1e-6,
                   max_terms: int = MAX_SERIES_TERMS) -> DensityResult:
    """Direct summation over the support of g with a certified tail."""
    frob = frob or FrobeniusCondition.trivial()
    frob_full = _full_condition(frob)
    r = group.rank
    B = kummer.entanglement_bound(group)
    default_jumps = spec.default.jumps()
    if not default_jumps:
        # finite support: exact
        N = 1
        for l in sorted(set(spec.constrained_primes())):
            menu = _menu_for(spec, l)
            if menu:
                N *= l ** max(menu)
        support = _support(spec, N, max_terms)
        total = Fraction(0)
        nterms = 0
        for n in support:
            t = _term(group, spec, frob, frob_full, n)
            if t:
                nterms += 1
            total += t
        return DensityResult(float(total) - abs(float(total)) * 1e-15,
                             float(total) + abs(float(total)) * 1e-15,
                             "series", nterms, True, exact=total,
                             detail=(("support", len(support)),))
    # pick N so the Rankin tail is below eps/2
    N = 4096
    tail = math.inf
    while True:
        tail = _rankin_tail(spec, r, B, N)
        if tail <= eps / 2:
            break
        if N > 2**62:
            raise ResourceLimitError("series cutoff exceeds enumeration range")
        N *= 4
    support = _support(spec, N, max_terms)
    total = Fraction(0)
    ftotal = 0.0
    use_exact = True
    nterms = 0
    fslop = 0.0
    for n in support:
        t = _term(group, spec, frob, frob_full, n)
        if not t:
            continue
        nterms += 1
        if use_exact:
            total += t
            if nterms > 400:
                use_exact = False
                ftotal = float(total)
        else:
            ftotal += float(t)
            fslop += (abs(float(t)) + abs(ftotal)) * 2.0 ** -50
    if use_exact:
        v = float(total)
        lo, hi = v - abs(v) * 1e-15 - tail, v + abs(v) * 1e-15 + tail
        return DensityResult(lo, hi, "series", nterms, True, exact=None,
                             detail=(("support", len(support)), ("cutoff", N),
                                     ("tail_bound", tail)))
    return DensityResult(ftotal - fslop - tail, ftotal + fslop + tail,
                         "series", nterms, True,
                         detail=(("support", len(support)), ("cutoff", N),
                                 ("tail_bound", tail)))


def density_product(group: RationalGroup, spec: IndexSetSpec,
                    frob: FrobeniusCondition | None = None,
                    eps: float = 1e-6) -> DensityResult:
    """Exact entangled factor times a certified Euler product.

    The level sum factors as (sum over n supported on the entangled
    primes) * (product of local factors elsewhere); the first factor is an
    exact rational, the second a bracketed real.
    """
    frob = frob or FrobeniusCondition.trivial()
    frob_full = _full_condition(frob)
    r = group.rank
    B = kummer.entanglement_bound(group)
    bprime = B * spec.q0
    for l in spec.constrained_primes():
        bprime = math.lcm(bprime, l)
    if not frob.is_trivial:
        bprime = math.lcm(bprime, arith.radical(frob.conductor))
    bset = {p for p, _ in arith.factorize(bprime)}

    # finite entangled sum: support restricted to primes dividing bprime
    N = 1
    for l in sorted(bset):
        if l in set(spec.constrained_primes()):
            menu = _menu_for(spec, l)
        else:
            menu = tuple(e for e in spec.default.jumps())
        if menu:
            N *= l ** max(menu)
    support = _support(spec, max(N, 1), MAX_SERIES_TERMS,
                       primes_filter=lambda l: l in bset)
    s_b = Fraction(0)
    for n in support:
        s_b += _term(group, spec, frob, frob_full, n)

    # certified product over the remaining primes (default factor there)
    tail_spec = custom(default=spec.default)
    bv = A_global(tail_spec, r, target_error=eps / 2)
    corr = Fraction(1)
    for l in sorted(bset):
        corr /= A_local(spec.default, r, l)
    lo = float(s_b) * bv.lo * float(corr)
    hi = float(s_b) * bv.hi * float(corr)
    if lo > hi:
        lo, hi = hi, lo
    slack = max(abs(lo), abs(hi)) * 1e-13
    return DensityResult(lo - slack, hi + slack, "product", len(support), True,
                         detail=(("entangled_sum", str(s_b)),
                                 ("entangled_modulus", bprime),
                                 ("euler_lo", bv.lo), ("euler_hi", bv.hi)))


def density_finiteQ(group: RationalGroup, spec: IndexSetSpec, Q: int,
                    frob: FrobeniusCondition | None = None) -> DensityResult:
    """Exact density for the spec with constraints kept only at primes dividing Q."""
    Q = int(Q)
    if Q < 1:
        raise ValidationError("Q must be positive")
    if spec.q0 != 1 and Q % spec.q0:
        raise ValidationError("Q must be a multiple of the joint modulus")
    qset = {p for p, _ in arith.factorize(Q)}
    frob = frob or FrobeniusCondition.trivial()
    frob_full = _full_condition(frob)
    N = 1
    for l in sorted(qset):
        if l in set(spec.constrained_primes()):
            menu = _menu_for(spec, l)
        else:
            menu = spec.default.jumps()
        if menu:
            N *= l ** max(menu)
    support = _support(spec, max(N, 1), MAX_SERIES_TERMS,
                       primes_filter=lambda l: l in qset)
    total = Fraction(0)
    for n in support:
        total += _term(group, spec, frob, frob_full, n)
    v = float(total)
    slack = abs(v) * 1e-15
    return DensityResult(v - slack, v + slack, "finiteQ", len(support), True,
                         exact=total, detail=(("Q", Q),))


def density_limit_sequence(group: RationalGroup, spec: IndexSetSpec,
                           ladder=(2, 6, 30, 210, 2310),
                           frob: FrobeniusCondition | None = None) -> list[DensityResult]:
    """Exact densities along a ladder of finite-Q truncations."""
    return [density_finiteQ(group, spec, Q, frob=frob) for Q in ladder]


def omitted_tail_bound(group: RationalGroup, spec: IndexSetSpec, Q: int) -> float:
    """Bound for |density(spec) - density_finiteQ(spec, Q)|.

    Union bound: a prime can move between the two sets only if its
    valuation at some l not dividing Q leaves the default set, an event of
    density at most sum over complement-interval starts of B/(phi(l^v) l^(rv)).
    """
    r = group.rank
    B = kummer.entanglement_bound(group)
    starts = [lo for lo, _ in spec.default.complement().intervals]
    if not starts:
        return 0.0
    if min(starts) < 1:
        return 1.0
    qset = {p for p, _ in arith.factorize(Q)}
    total = 0.0
    for seg in arith.prime_segments(HEAD_CUTOFF):
        for l in seg.tolist():
            l = int(l)
            if l in qset or l in set(spec.constrained_primes()):
                continue
            for v in starts:
                total += B / (arith.euler_phi(l**v) * float(l) ** (r * v))
    for l in set(spec.constrained_primes()):
        if l in qset:
            continue
        # constrained primes outside Q contribute their own defect
        vset = spec.vset_at(l) if l in spec.q0_primes else spec.exception_map[l]
        for v in [lo for lo, _ in vset.complement().intervals]:
            if v >= 1:
                total += B / (arith.euler_phi(l**v) * float(l) ** (r * v))
            else:
                total += 1.0
    for v in starts:
        # l > HEAD_CUTOFF: phi(l^v) l^(rv) >= l^(v(r+1))/2
        _, hi = prime_tail_bounds(v * (r + 1), HEAD_CUTOFF)
        total += 2.0 * B * hi
    return total


def density_single_prime(group: RationalGroup, l: int, vset: ValuationSet,
                         frob: FrobeniusCondition | None = None) -> DensityResult:
    """Exact density of {p : v_l(ind) in vset} by telescoping level sums."""
    if not arith.is_prime(l):
        raise ValidationError(f"{l} is not prime")
    frob = frob or FrobeniusCondition.trivial()
    frob_full = _full_condition(frob)

    def p_at_least(v: int) -> Fraction:
        # density of v_l(ind) >= v among the filtered primes
        n = l**v
        deg = kummer.degree(group, n, n)
        if frob.is_trivial:
            return Fraction(1, deg)
        c_sel = kummer.c_coefficient(frob, group, n)
        if c_sel == 0:
            return Fraction(0)
        c_all = kummer.c_coefficient(frob_full, group, n)
        return Fraction(c_sel, c_all * deg)

    total = Fraction(0)
    terms = 0
    for lo, hi in vset.intervals:
        total += p_at_least(lo)
        terms += 1
        if hi is not None:
            total -= p_at_least(hi + 1)
            terms += 1
    v = float(total)
    slack = abs(v) * 1e-15
    return DensityResult(v - slack, v + slack, "single_prime", terms, True,
                         exact=total, detail=(("prime", l),))


def density_kfree(group: RationalGroup, k: int, eps: float = 1e-8,
                  frob: FrobeniusCondition | None = None) -> DensityResult:
    """Density of primes with k-th-power-free index."""
    from .index_sets import kfree

    return density_series(group, kfree(k), frob=frob, eps=eps)


def density_almostcut(group: RationalGroup, spec: IndexSetSpec,
                      frob: FrobeniusCondition | None = None,
                      eps: float = 1e-6) -> DensityResult:
    """Joint-constraint specs: same certified series, reported separately."""
    if spec.q0 == 1:
        raise ValidationError("spec has no joint constraint; use density_series")
    res = density_series(group, spec, frob=frob, eps=eps)
    return DensityResult(res.lo, res.hi, "almostcut", res.terms, res.certified,
                         exact=res.exact, detail=res.detail)


METHODS = {
    "series": density_series,
    "product": density_product,
}


def density(group: RationalGroup, spec: IndexSetSpec,
            method: str = "series",
            frob: FrobeniusCondition | None = None,
            eps: float = 1e-6) -> DensityResult:
    if method == "series":
        return density_series(group, spec, frob=frob, eps=eps)
    if method == "product":
        return density_product(group, spec, frob=frob, eps=eps)
    if method == "almostcut":
        return density_almostcut(group, spec, frob=frob, eps=eps)
    raise ValidationError(f"unknown method {method!r}")
