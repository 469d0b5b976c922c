"""Sets of positive integers described by valuation constraints.

A set H is given by a modulus Q0 with "boxes" (joint constraints on the
valuation vector at the primes dividing Q0), per-prime valuation sets for
finitely many exceptional primes, and a default valuation set applied at
every other prime.  Membership of n is a condition on (v_l(n))_l only.

The transform g = chi * mu (Dirichlet convolution with the Moebius
function) drives the density series; on sets of this shape it splits into
a Q0-part and a product of prime-local factors.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import arith
from .errors import UnsupportedSetError, ValidationError

INF = None  # open upper endpoint marker in interval notation


@dataclass(frozen=True)
class ValuationSet:
    """A set of nonnegative integers as a union of integer intervals.

    Canonical form: intervals sorted, pairwise non-adjacent (hi_i + 1 <
    lo_{i+1}), at most one unbounded interval and only in last position.
    """

    intervals: tuple[tuple[int, int | None], ...]

    @staticmethod
    def of(*intervals) -> "ValuationSet":
        """Build from (lo, hi) pairs; hi=None means unbounded.  Merges overlap."""
        cleaned = []
        for lo, hi in intervals:
            lo = int(lo)
            if lo < 0:
                raise ValidationError("valuations are nonnegative")
            if hi is not None:
                hi = int(hi)
                if hi < lo:
                    raise ValidationError(f"empty interval [{lo},{hi}]")
            cleaned.append((lo, hi))
        cleaned.sort(key=lambda iv: iv[0])
        merged: list[list] = []
        for lo, hi in cleaned:
            if merged and (merged[-1][1] is None or lo <= merged[-1][1] + 1):
                if merged[-1][1] is not None:
                    merged[-1][1] = None if hi is None else max(merged[-1][1], hi)
            else:
                merged.append([lo, hi])
        return ValuationSet(tuple((lo, hi) for lo, hi in merged))

    @staticmethod
    def full() -> "ValuationSet":
        return ValuationSet.of((0, INF))

    @staticmethod
    def range(lo: int, hi) -> "ValuationSet":
        return ValuationSet.of((lo, hi))

    def contains(self, v: int) -> bool:
        for lo, hi in self.intervals:
            if lo <= v and (hi is None or v <= hi):
                return True
        return False

    __contains__ = contains

    def is_empty(self) -> bool:
        return not self.intervals

    def is_full(self) -> bool:
        return self.intervals == ((0, INF),)

    def is_bounded(self) -> bool:
        return all(hi is not None for _, hi in self.intervals)

    def max_bounded(self) -> int:
        """Largest element of the bounded part (last finite hi)."""
        tops = [hi for _, hi in self.intervals if hi is not None]
        if not tops:
            raise ValidationError("no bounded interval")
        return max(tops)

    def n_bounded_intervals(self) -> int:
        return sum(1 for _, hi in self.intervals if hi is not None)

    def complement(self) -> "ValuationSet":
        out = []
        nxt = 0
        for lo, hi in self.intervals:
            if lo > nxt:
                out.append((nxt, lo - 1))
            if hi is None:
                return ValuationSet.of(*out)
            nxt = hi + 1
        out.append((nxt, INF))
        return ValuationSet.of(*out)

    def g_power(self, m: int) -> int:
        """g_{H_l}(l^m) for the single-prime set with these valuations.

        +1 at each interval start, -1 just past each interval end, except
        that the value at m=0 is the indicator of 0 being in the set.
        """
        if m == 0:
            return 1 if self.contains(0) else 0
        for lo, hi in self.intervals:
            if m == lo:
                return 1
            if hi is not None and m == hi + 1:
                return -1
        return 0

    def jumps(self) -> list[int]:
        """Exponents m >= 1 where g_power is nonzero."""
        out = set()
        for lo, hi in self.intervals:
            if lo >= 1:
                out.add(lo)
            if hi is not None:
                out.add(hi + 1)
        return sorted(out)

    def to_json(self) -> list:
        return [[lo, hi] for lo, hi in self.intervals]

    @staticmethod
    def from_json(data) -> "ValuationSet":
        if not isinstance(data, list):
            raise ValidationError("interval list expected")
        return ValuationSet.of(*[(iv[0], iv[1]) for iv in data])


@dataclass(frozen=True)
class ConvergenceClass:
    """Which counting theorem applies, and its error exponent kappa."""

    kind: str  # klfree | vlfin | vlinf | finiteq | almostcut | unsupported
    kappa: float | None = None
    detail: str = ""
    inner: str | None = None  # for almostcut: the class of the coprime part

    @property
    def certified(self) -> bool:
        return self.kind != "unsupported"


@dataclass(frozen=True)
class IndexSetSpec:
    """Valuation-described set of positive integers (see module docstring).

    boxes: tuple of per-prime constraint dicts over exactly the primes
    dividing Q0; a valuation vector is accepted if some box accepts every
    coordinate.  exceptions: per-prime sets at primes not dividing Q0.
    """

    q0: int
    boxes: tuple  # tuple[dict-like frozen items: tuple[(prime, ValuationSet), ...]]
    default: ValuationSet
    exceptions: tuple  # tuple[(prime, ValuationSet), ...]

    # -- construction ------------------------------------------------------

    @staticmethod
    def make(q0=1, boxes=None, default=None, exceptions=None) -> "IndexSetSpec":
        q0 = int(q0)
        if q0 < 1:
            raise ValidationError("Q0 must be >= 1")
        default = default if default is not None else ValuationSet.full()
        if default.is_empty():
            raise ValidationError("default valuation set is empty")
        q0_primes = [p for p, _ in arith.factorize(q0)] if q0 > 1 else []
        if boxes is None:
            boxes = [{p: ValuationSet.full() for p in q0_primes}] if q0 > 1 else [{}]
        norm_boxes = []
        for box in boxes:
            box = dict(box)
            if sorted(box) != q0_primes:
                raise ValidationError(
                    f"box primes {sorted(box)} must equal primes of Q0 {q0_primes}"
                )
            if any(vs.is_empty() for vs in box.values()):
                continue  # empty box contributes nothing
            norm_boxes.append(tuple(sorted(box.items())))
        exceptions = dict(exceptions or {})
        for p in list(exceptions):
            if not arith.is_prime(p):
                raise ValidationError(f"exception key {p} is not prime")
            if q0 % p == 0:
                raise ValidationError(f"exception prime {p} divides Q0")
            if exceptions[p].is_empty():
                raise ValidationError(f"exception set at {p} is empty")
            if exceptions[p] == default:
                del exceptions[p]
        if not default.contains(0):
            # every prime would be forced to divide n; no such n exists
            raise UnsupportedSetError("default valuation set must contain 0")
        # absorb exceptions with 0 not in V into the Q0 part: such a prime
        # divides every member, so it belongs with the joint constraints
        absorb = {p: vs for p, vs in exceptions.items() if not vs.contains(0)}
        if absorb:
            for p, vs in sorted(absorb.items()):
                del exceptions[p]
                q0 *= p
                norm_boxes = [box + ((p, vs),) for box in norm_boxes]
            norm_boxes = [tuple(sorted(box)) for box in norm_boxes]
        return IndexSetSpec(
            q0=q0,
            boxes=tuple(dict.fromkeys(norm_boxes)),
            default=default,
            exceptions=tuple(sorted(exceptions.items())),
        )

    # -- basic structure ---------------------------------------------------

    @property
    def q0_primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in arith.factorize(self.q0)) if self.q0 > 1 else ()

    @property
    def exception_map(self) -> dict:
        return dict(self.exceptions)

    def constrained_primes(self) -> tuple[int, ...]:
        """Primes with a non-default constraint (Q0 primes + exceptions)."""
        return tuple(sorted(set(self.q0_primes) | {p for p, _ in self.exceptions}))

    def vset_at(self, p: int) -> ValuationSet:
        """Projection of the set's valuations at prime p (for Q0 primes the
        union over boxes)."""
        if self.q0 % p == 0:
            return _union([dict(box)[p] for box in self.boxes])
        return self.exception_map.get(p, self.default)

    def box_accepts(self, vals: dict) -> bool:
        """Does some box accept the valuation vector at the Q0 primes?"""
        for box in self.boxes:
            if all(vs.contains(vals.get(p, 0)) for p, vs in box):
                return True
        return False

    # -- membership and the Moebius transform ------------------------------

    def contains(self, n: int) -> bool:
        if n < 1:
            return False
        fac = dict(arith.factorize(n)) if n > 1 else {}
        if not self.box_accepts(fac):
            return False
        for p, vs in self.exceptions:
            if not vs.contains(fac.get(p, 0)):
                return False
        for p, e in fac.items():
            if self.q0 % p and p not in self.exception_map:
                if not self.default.contains(e):
                    return False
        return True

    __contains__ = contains

    chi = contains

    def g_q0(self, vals: dict) -> int:
        """Q0-part of the transform at the exponent vector `vals` (over
        Q0 primes), via the finite divisor sum with Moebius signs."""
        primes = [p for p in self.q0_primes if True]
        total = 0
        for deltas in itertools.product(
            *[range(2 if vals.get(p, 0) >= 1 else 1) for p in primes]
        ):
            shifted = {
                p: vals.get(p, 0) - d for p, d in zip(primes, deltas)
            }
            if self.box_accepts(shifted):
                total += -1 if sum(deltas) % 2 else 1
        return total

    def g(self, n: int) -> int:
        """(chi * mu)(n), computed from the factored local structure."""
        if n < 1:
            raise ValidationError("g expects n >= 1")
        fac = dict(arith.factorize(n)) if n > 1 else {}
        q0_vals = {p: e for p, e in fac.items() if self.q0 % p == 0}
        out = self.g_q0(q0_vals)
        if out == 0:
            return 0
        for p, e in fac.items():
            if self.q0 % p == 0:
                continue
            out *= self.exception_map.get(p, self.default).g_power(e)
            if out == 0:
                return 0
        return out

    def g_bruteforce(self, n: int) -> int:
        """Reference implementation: sum of mu(n/d) chi(d) over divisors."""
        total = 0
        for d in arith.divisors(n):
            m = arith.moebius(n // d)
            if m and self.contains(d):
                total += m
        return total

    # -- classification ----------------------------------------------------

    def classify(self) -> ConvergenceClass:
        """Most specific supported counting regime for this set."""
        per_prime = dict(self.exceptions)
        default = self.default

        if default.is_full():
            # finitely many constrained primes in total
            q = self.q0
            for p, _ in self.exceptions:
                q *= p
            return ConvergenceClass(
                "finiteq", kappa=0.5, detail=f"Q={q}; any exponent < 1 is valid"
            )

        movable = dict(per_prime)

        def b1(vs: ValuationSet) -> int | None:
            lo, hi = vs.intervals[0]
            return hi  # None means the first interval is unbounded

        # uniform [0, k-1] shape at every prime (no Q0 part)
        if self.q0 == 1:
            shapes = [default] + [vs for _, vs in self.exceptions]
            if all(
                len(vs.intervals) == 1 and vs.intervals[0][0] == 0
                and vs.intervals[0][1] is not None and vs.intervals[0][1] >= 1
                for vs in shapes
            ):
                k = 1 + min(vs.intervals[0][1] for vs in shapes)
                return ConvergenceClass(
                    "klfree", kappa=1.0 - 1.0 / k, detail=f"k={k}"
                )

        # try the infinite-valuation-set regime: 1 and 2 everywhere,
        # absorbing offending exceptional primes into the finite part
        def try_vlinf():
            if not (default.contains(1) and default.contains(2)):
                return None
            absorbed = [p for p, vs in movable.items()
                        if not (vs.contains(1) and vs.contains(2))]
            return absorbed

        # bounded default with first gap late enough
        def try_vlfin():
            base_b1 = b1(default)
            if base_b1 is None:
                return None
            kept = {p: vs for p, vs in movable.items()
                    if b1(vs) is not None and b1(vs) >= 1}
            absorbed = [p for p in movable if p not in kept]
            bmin = min([base_b1] + [b1(vs) for vs in kept.values()])
            if bmin < 1:
                return None
            k = 1 + bmin
            # growth exponent for the number of jump positions, matching
            # the convention 2^omega(n) <= 2 sqrt(n)
            ratios = []
            small_default_prime = 2
            while (self.q0 % small_default_prime == 0
                   or small_default_prime in kept
                   or small_default_prime in absorbed
                   or not arith.is_prime(small_default_prime)):
                small_default_prime += 1
            nd = default.n_bounded_intervals()
            if nd >= 1:
                ratios.append(math.log(2 * nd) / (2 * math.log(small_default_prime)))
            for p, vs in kept.items():
                np_ = vs.n_bounded_intervals()
                if np_ >= 1:
                    ratios.append(math.log(2 * np_) / (2 * math.log(p)))
            alpha = max(ratios) if ratios else 0.0
            if k <= 1 + alpha:
                return None
            kappa = (2.0 / 3.0) * (1.0 - (1.0 + alpha) / k)
            return absorbed, k, alpha, kappa

        vlinf = try_vlinf()
        vlfin = try_vlfin()
        candidates = []
        if vlinf is not None:
            candidates.append(("vlinf", 1.0 / 3.0, "1,2 in every valuation set",
                               vlinf))
        if vlfin is not None:
            absorbed, k, alpha, kappa = vlfin
            candidates.append(
                ("vlfin", kappa, f"k={k}, alpha={alpha:.4g}", absorbed)
            )
        if not candidates:
            return ConvergenceClass(
                "unsupported", detail="no applicable counting theorem "
                "(series is evaluated but not certified unconditionally)"
            )
        kind, kappa, detail, absorbed = max(candidates, key=lambda c: c[1])
        if self.q0 > 1 or absorbed:
            q = self.q0
            for p in absorbed:
                q *= p
            return ConvergenceClass(
                "almostcut", kappa=kappa, detail=f"Q={q}; inner {detail}",
                inner=kind,
            )
        return ConvergenceClass(kind, kappa=kappa, detail=detail)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "type": "custom",
            "Q0": self.q0,
            "boxes": [
                {str(p): vs.to_json() for p, vs in box} for box in self.boxes
            ],
            "default": self.default.to_json(),
            "exceptions": {str(p): vs.to_json() for p, vs in self.exceptions},
        }

    def describe(self) -> str:
        cls = self.classify()
        return f"Q0={self.q0}, {len(self.boxes)} box(es), class={cls.kind}"


def _union(vsets) -> ValuationSet:
    ivs = [iv for vs in vsets for iv in vs.intervals]
    return ValuationSet.of(*ivs)


# -- builders ---------------------------------------------------------------


def kfree(k: int) -> IndexSetSpec:
    """Indices not divisible by any k-th prime power (k >= 2)."""
    k = int(k)
    if k < 2:
        raise ValidationError("kfree requires k >= 2")
    return IndexSetSpec.make(default=ValuationSet.range(0, k - 1))


def klfree(kmap: dict, default_k: int) -> IndexSetSpec:
    """Per-prime power-free bounds: v_l < k(l), with a default bound."""
    if int(default_k) < 2 or any(int(k) < 2 for k in kmap.values()):
        raise ValidationError("all k(l) must be >= 2")
    return IndexSetSpec.make(
        default=ValuationSet.range(0, int(default_k) - 1),
        exceptions={int(p): ValuationSet.range(0, int(k) - 1)
                    for p, k in kmap.items()},
    )


def multiples_of(n: int) -> IndexSetSpec:
    n = int(n)
    if n < 1:
        raise ValidationError("n must be >= 1")
    if n == 1:
        return IndexSetSpec.make()
    return IndexSetSpec.make(
        exceptions={p: ValuationSet.range(e, INF) for p, e in arith.factorize(n)}
    )


def coprime_to(m: int) -> IndexSetSpec:
    m = int(m)
    if m < 1:
        raise ValidationError("m must be >= 1")
    return IndexSetSpec.make(
        q0=arith.radical(m),
        boxes=[{p: ValuationSet.range(0, 0) for p, _ in arith.factorize(m)}]
        if m > 1 else None,
    )


def gcd_equals(m: int, t: int) -> IndexSetSpec:
    """Indices n with gcd(n, m) = t (t must divide m)."""
    m, t = int(m), int(t)
    if m < 1 or t < 1 or m % t:
        raise ValidationError("need t | m")
    box = {}
    for p, e in arith.factorize(m):
        vt = arith.valuation(t, p)
        # gcd condition: min(v_p(n), e) == vt
        box[p] = ValuationSet.range(vt, vt) if vt < e else ValuationSet.range(e, INF)
    return IndexSetSpec.make(q0=arith.radical(m), boxes=[box] if m > 1 else None)


def single_prime(l: int, vset: ValuationSet) -> IndexSetSpec:
    if not arith.is_prime(l):
        raise ValidationError(f"{l} is not prime")
    return IndexSetSpec.make(exceptions={int(l): vset})


def custom(q0=1, boxes=None, default=None, exceptions=None) -> IndexSetSpec:
    return IndexSetSpec.make(q0, boxes, default, exceptions)


# -- JSON grammar -----------------------------------------------------------


def spec_from_json(data) -> IndexSetSpec:
    """Parse the CLI set grammar: {"type": ..., ...}."""
    if not isinstance(data, dict) or "type" not in data:
        raise ValidationError("set spec must be an object with a 'type' field")
    t = data["type"]
    try:
        if t == "kfree":
            return kfree(data["k"])
        if t == "klfree":
            return klfree({int(p): k for p, k in data.get("map", {}).items()},
                          data["default"])
        if t == "multiples":
            return multiples_of(data["n"])
        if t == "coprime":
            return coprime_to(data["m"])
        if t == "gcd_equals":
            return gcd_equals(data["m"], data["t"])
        if t == "single_prime":
            return single_prime(data["l"], ValuationSet.from_json(data["v"]))
        if t == "custom":
            boxes = None
            if "boxes" in data:
                boxes = [
                    {int(p): ValuationSet.from_json(v) for p, v in box.items()}
                    for box in data["boxes"]
                ]
            default = (ValuationSet.from_json(data["default"])
                       if "default" in data else None)
            exceptions = {
                int(p): ValuationSet.from_json(v)
                for p, v in data.get("exceptions", {}).items()
            }
            return custom(data.get("Q0", 1), boxes, default, exceptions)
    except KeyError as exc:
        raise ValidationError(f"set spec of type {t!r} is missing field {exc}")
    raise ValidationError(f"unknown set type {t!r}")
