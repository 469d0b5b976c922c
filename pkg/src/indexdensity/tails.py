"""Certified tail bounds for Euler products over large primes.

The log-defect of each local factor is a power series in y = 1/l with
nonnegative rational coefficients.  We truncate at a fixed order and carry
an explicit envelope for everything omitted, so that summing over primes
l > L reduces to two-sided bounds on prime zeta tails S_k(L) = sum_{p>L}
p^(-k).  Those come from explicit pi(x) bounds (Dusart for large x, with
a Rosser-Schoenfeld style fallback) by partial summation.
"""
from __future__ import annotations

import math
from fractions import Fraction

import mpmath

from . import arith


class NonnegSeries:
    """Truncated power series with nonnegative Fraction coefficients.

    Invariant: for every y in [0, ymax], the omitted tail satisfies
    0 <= sum_{j>order} c_j y^j <= envelope * y^(order+1).
    All arithmetic preserves the invariant exactly (Fraction arithmetic).
    """

    __slots__ = ("order", "ymax", "coeffs", "envelope")

    def __init__(self, order: int, ymax: Fraction, coeffs=None,
                 envelope=Fraction(0)):
        self.order = order
        self.ymax = Fraction(ymax)
        self.coeffs = dict(coeffs or {})  # degree -> Fraction, 0 <= deg <= order
        self.envelope = Fraction(envelope)

    @classmethod
    def zero(cls, order: int, ymax) -> "NonnegSeries":
        return cls(order, ymax)

    @classmethod
    def monomial(cls, order: int, ymax, deg: int, coeff=Fraction(1)) -> "NonnegSeries":
        c = Fraction(coeff)
        if c < 0:
            raise ValueError("coefficients must be nonnegative")
        s = cls(order, ymax)
        if deg <= order:
            s.coeffs[deg] = c
        else:
            s.envelope = c * s.ymax ** (deg - order - 1)
        return s

    @classmethod
    def geometric(cls, order: int, ymax, step: int, start: int = 0) -> "NonnegSeries":
        """sum_{j>=0} y^(start + j*step), truncated."""
        s = cls(order, ymax)
        d = start
        while d <= order:
            s.coeffs[d] = s.coeffs.get(d, 0) + 1
            d += step
        # remaining terms: y^d (1 + y^step + ...) <= y^(order+1) ymax^(d-order-1)/(1-ymax^step)
        s.envelope = s.ymax ** (d - order - 1) / (1 - s.ymax**step)
        return s

    def value_bound(self) -> Fraction:
        """Upper bound for the value at any y <= ymax."""
        return (sum((c * self.ymax**d for d, c in self.coeffs.items()),
                    Fraction(0))
                + self.envelope * self.ymax ** (self.order + 1))

    @property
    def min_degree(self) -> int:
        nz = [d for d, c in self.coeffs.items() if c]
        return min(nz) if nz else self.order + 1

    def _check(self, other: "NonnegSeries"):
        if self.order != other.order or self.ymax != other.ymax:
            raise ValueError("series orders/domains differ")

    def __add__(self, other: "NonnegSeries") -> "NonnegSeries":
        self._check(other)
        out = NonnegSeries(self.order, self.ymax, self.coeffs, self.envelope)
        for d, c in other.coeffs.items():
            out.coeffs[d] = out.coeffs.get(d, Fraction(0)) + c
        out.envelope += other.envelope
        return out

    def scale(self, c) -> "NonnegSeries":
        c = Fraction(c)
        if c < 0:
            raise ValueError("coefficients must be nonnegative")
        return NonnegSeries(self.order, self.ymax,
                            {d: c * v for d, v in self.coeffs.items()},
                            c * self.envelope)

    def __mul__(self, other: "NonnegSeries") -> "NonnegSeries":
        self._check(other)
        K, ymax = self.order, self.ymax
        out = NonnegSeries(K, ymax)
        env = Fraction(0)
        for d1, c1 in self.coeffs.items():
            for d2, c2 in other.coeffs.items():
                d = d1 + d2
                c = c1 * c2
                if d <= K:
                    out.coeffs[d] = out.coeffs.get(d, Fraction(0)) + c
                else:
                    env += c * ymax ** (d - K - 1)
        # cross terms against the envelopes
        env += self._poly_value_bound() * other.envelope
        env += other._poly_value_bound() * self.envelope
        env += self.envelope * other.envelope * ymax ** (K + 1)
        out.envelope = env
        return out

    def _poly_value_bound(self) -> Fraction:
        return sum((c * self.ymax**d for d, c in self.coeffs.items()),
                   Fraction(0))

    def neg_log_one_minus(self) -> "NonnegSeries":
        """-log(1 - self), requiring min_degree >= 1 and value < 1 on [0, ymax]."""
        v = self.value_bound()
        if v >= 1:
            raise ValueError("series value may reach 1; enlarge L")
        kmin = self.min_degree
        if kmin < 1 and self.coeffs.get(0):
            raise ValueError("need a series without constant term")
        out = NonnegSeries(self.order, self.ymax)
        power = NonnegSeries.monomial(self.order, self.ymax, 0)
        j = 0
        while j * max(kmin, 1) <= self.order:
            j += 1
            power = power * self
            out = out + power.scale(Fraction(1, j))
        # sum_{i>j} M^i/i <= M^(j+1)/(1-M) with M(y) <= V y^kmin, V = v/ymax^kmin
        V = v / self.ymax**kmin
        extra = (V ** (j + 1) * self.ymax ** ((j + 1) * kmin - self.order - 1)
                 / (1 - v))
        out.envelope += extra
        return out


# -- prime zeta tails ------------------------------------------------------------


def _pi_lower(x: float) -> float:
    """Explicit lower bound for pi(x)."""
    lg = math.log(x)
    if x >= 599:
        return x / lg * (1 + 1 / lg)
    return 0.0


def _pi_upper(x: float) -> float:
    """Explicit upper bound for pi(x)."""
    lg = math.log(x)
    if x >= 355991:
        return x / lg * (1 + 1 / lg + 2.51 / lg**2)
    if x > 1:
        return 1.25506 * x / lg  # Rosser-Schoenfeld
    return 0.0


def _int_t_pow_log(L: float, k: int, n: int) -> mpmath.mpf:
    """integral_L^inf t^(-k) log(t)^(-n) dt, for k >= 2, n >= 0."""
    lg = mpmath.log(L)
    return lg ** (1 - n) * mpmath.expint(n, (k - 1) * lg)


def prime_tail_bounds(k: int, L: int, pi_L: int | None = None) -> tuple[float, float]:
    """Two-sided bounds for S_k(L) = sum over primes p > L of p^(-k).

    Partial summation: S_k(L) = -pi(L) L^(-k) + k * integral_L^inf pi(t) t^(-k-1) dt.
    pi(L) is computed exactly unless supplied.
    """
    if k < 2:
        raise ValueError("need k >= 2 for convergence")
    if L < 599:
        raise ValueError("L too small for the pi(x) bounds in use")
    if pi_L is None:
        pi_L = arith.prime_count(L)
    with mpmath.workdps(40):
        head = -mpmath.mpf(pi_L) / mpmath.mpf(L) ** k
        # pi_lower(t) = t/log t + t/log^2 t; valid for t >= L >= 599
        lo = head + k * (_int_t_pow_log(L, k, 1) + _int_t_pow_log(L, k, 2))
        if L >= 355991:
            hi = head + k * (_int_t_pow_log(L, k, 1) + _int_t_pow_log(L, k, 2)
                             + mpmath.mpf("2.51") * _int_t_pow_log(L, k, 3))
        else:
            hi = head + k * mpmath.mpf("1.25506") * _int_t_pow_log(L, k, 1)
        lo_f = float(lo) * (1 - 1e-12) - 1e-300
        hi_f = float(hi) * (1 + 1e-12) + 1e-300
    if lo_f < 0:
        lo_f = 0.0
    return lo_f, max(hi_f, lo_f)


def series_prime_tail(series: NonnegSeries, L: int) -> tuple[float, float]:
    """Enclosure of sum over primes l > L of series(1/l).

    Requires 1/L <= series.ymax so the envelope applies at every prime.
    """
    if Fraction(1, L) > series.ymax:
        raise ValueError("L below the series' domain of validity")
    pi_L = arith.prime_count(L)
    lo = 0.0
    hi = 0.0
    for d in sorted(series.coeffs):
        c = series.coeffs[d]
        if not c:
            continue
        if d < 2:
            raise ValueError("series must start at degree >= 2")
        slo, shi = prime_tail_bounds(d, L, pi_L)
        lo += float(c) * slo * (1 - 1e-12)
        hi += float(c) * shi * (1 + 1e-12)
    if series.envelope:
        _, shi = prime_tail_bounds(series.order + 1, L, pi_L)
        hi += float(series.envelope) * shi * (1 + 1e-12)
    return lo, hi
