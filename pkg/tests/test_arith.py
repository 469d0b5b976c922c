import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from indexdensity import arith
from indexdensity.errors import ValidationError


def test_prime_count_known_values():
    assert arith.prime_count(10**5) == 9592
    assert arith.prime_count(10**6) == 78498


def test_sieve_matches_segments():
    flat = arith.sieve_primes(10**5)
    segs = np.concatenate(list(arith.prime_segments(10**5)))
    assert np.array_equal(flat, segs)


def test_prime_segments_start():
    got = np.concatenate(list(arith.prime_segments(1000, start=500)))
    want = [p for p in arith.sieve_primes(1000).tolist() if p >= 500]
    assert got.tolist() == want


def test_factorize_and_divisors():
    assert arith.factorize(4704) == ((2, 5), (3, 1), (7, 2))
    assert arith.factorize(1) == ()
    assert sorted(arith.divisors(12)) == [1, 2, 3, 4, 6, 12]
    with pytest.raises(ValidationError):
        arith.factorize(0)


@given(st.integers(min_value=1, max_value=10**6))
@settings(max_examples=200, deadline=None)
def test_factorize_roundtrip(n):
    fac = arith.factorize(n)
    assert math.prod(p**e for p, e in fac) == n
    assert all(arith.is_prime(p) for p, _ in fac)


def test_moebius_and_phi():
    assert [arith.moebius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]
    assert arith.euler_phi(1) == 1
    assert arith.euler_phi(36) == 12
    # phi is multiplicative and sums to n over divisors
    for n in (12, 36, 100, 210):
        assert sum(arith.euler_phi(d) for d in arith.divisors(n)) == n


def test_radical_omega_valuation():
    assert arith.radical(4704) == 42
    assert arith.omega(4704) == 3
    assert arith.valuation(48, 2) == 4
    assert arith.valuation(48, 5) == 0


def test_is_prime_deterministic():
    small = set(arith.sieve_primes(10**4).tolist())
    for n in range(2, 10**4):
        assert arith.is_prime(n) == (n in small)
    # strong pseudoprime cases
    for n in (3215031751, 3474749660383, 341550071728321):
        assert not arith.is_prime(n)


def test_multiplicative_order():
    assert arith.multiplicative_order(10, 101) == 4
    assert arith.multiplicative_order(2, 7) == 3
    for p in (11, 101, 997):
        for a in (2, 3, 5):
            t = arith.multiplicative_order(a, p)
            assert pow(a, t, p) == 1
            assert (p - 1) % t == 0
            assert all(pow(a, t // q, p) != 1 for q, _ in arith.factorize(t))
    with pytest.raises(ValidationError):
        arith.multiplicative_order(7, 7)


def test_kronecker_legendre_agreement():
    for p in (3, 5, 7, 11, 13, 101):
        for a in range(-10, 11):
            leg = pow(a, (p - 1) // 2, p)
            leg = -1 if leg == p - 1 else leg
            assert arith.kronecker(a, p) == leg


def test_kronecker_known_characters():
    # disc -4: period 4 pattern 1, 0, -1, 0 on odd/even n
    for n in range(1, 50):
        want = 0 if n % 2 == 0 else (1 if n % 4 == 1 else -1)
        assert arith.kronecker(-4, n) == want
    # disc 8: nonzero iff n odd, +1 iff n = +-1 mod 8
    for n in range(1, 50, 2):
        want = 1 if n % 8 in (1, 7) else -1
        assert arith.kronecker(8, n) == want


@given(st.integers(min_value=1, max_value=3000), st.integers(min_value=1, max_value=3000))
@settings(max_examples=200, deadline=None)
def test_kronecker_multiplicative(m, n):
    a = 5
    assert arith.kronecker(a, m * n) == arith.kronecker(a, m) * arith.kronecker(a, n)
