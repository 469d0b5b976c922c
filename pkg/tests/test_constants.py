import math
from fractions import Fraction

import pytest

from indexdensity import arith, index_sets
from indexdensity.constants import (
    A_global,
    A_local,
    BoundedValue,
    E,
    defect_series,
)
from indexdensity.errors import UnsupportedSetError, ValidationError
from indexdensity.index_sets import ValuationSet
from indexdensity.tails import series_prime_tail

# density of an index with v_2 = 0 for Artin's original question
ARTIN = 0.37395581361920228805


def test_E_values():
    assert E(0, 1, 2) == Fraction(1, 2)
    assert E(1, 1, 2) == Fraction(3, 8)
    assert E(0, 1, 3) == Fraction(5, 6)
    assert E(1, 1, 3) == Fraction(4, 27)
    assert E(2, 1, 3) == Fraction(4, 243)
    assert E(0, 2, 3) == Fraction(17, 18)
    assert E(1, 2, 5) == Fraction(31, 3125)


def test_E_partition():
    # valuations partition the primes: the E(v) sum to 1
    for l in (2, 3, 5, 11):
        for r in (1, 2, 3):
            y = Fraction(1, l)
            tail_start = 30
            total = sum(E(v, r, l) for v in range(tail_start))
            # geometric remainder of the v >= tail_start terms
            s = r + 1
            block = sum(y**j for j in range(s))
            rem = block * y ** (tail_start * s) / (1 - y**s)
            assert total + rem == 1


def test_E_validation():
    with pytest.raises(ValidationError):
        E(-1, 1, 2)
    with pytest.raises(ValidationError):
        E(0, 0, 2)


def test_A_local_closed_forms():
    # v < k (k-free at l): 1 - 1/((l-1) l^(2k-1)) at rank 1
    for l in (2, 3, 7):
        for k in (1, 2, 3):
            vset = ValuationSet.of((0, k - 1))
            expect = 1 - Fraction(1, (l - 1) * l ** (2 * k - 1))
            assert A_local(vset, 1, l) == expect
    assert A_local(ValuationSet.full(), 3, 97) == 1


def test_A_local_matches_E_sums():
    for l in (2, 3, 5):
        for r in (1, 2):
            for vset in (
                ValuationSet.of((1, None)),
                ValuationSet.of((0, 0), (2, 3)),
                ValuationSet.of((2, None)),
                ValuationSet.of((1, 1)),
            ):
                direct = sum(E(v, r, l) for v in range(60) if v in vset)
                got = A_local(vset, r, l)
                assert abs(float(got) - float(direct)) < float(
                    Fraction(2, l) ** (60 * (r + 1))
                ) + 1e-30


def test_defect_series_bounds_true_value():
    vset = ValuationSet.of((0, 0))
    for r in (1, 2):
        ser = defect_series(vset, r, 10, Fraction(1, 100))
        for l in (101, 997, 10007):
            y = Fraction(1, l)
            truth = 1 - A_local(vset, r, l)
            approx = sum(c * y**k for k, c in ser.coeffs.items())
            assert 0 <= truth - approx <= ser.envelope * y ** (ser.order + 1)


def test_bounded_value():
    b = BoundedValue(0.25, 0.75)
    assert b.value == 0.5
    assert b.error == 0.25
    assert 0.3 in b
    assert 0.9 not in b
    assert b.overlaps(BoundedValue(0.7, 0.9))
    assert not b.overlaps(BoundedValue(0.8, 0.9))
    assert b.contains_interval(BoundedValue(0.4, 0.6))


def test_artin_constant_bracket():
    spec = index_sets.custom(default=ValuationSet.of((0, 0)))
    res = A_global(spec, 1, target_error=1e-10)
    assert res.error <= 1e-10
    assert ARTIN in res


def test_global_nesting_in_cutoff():
    spec = index_sets.kfree(2)
    coarse = A_global(spec, 1, target_error=1e-6)
    fine = A_global(spec, 1, target_error=1e-9)
    assert coarse.contains_interval(fine)


def test_global_exception_prime():
    # exceptional local condition at 3 replaces the default factor exactly
    default = ValuationSet.of((0, 0))
    spec = index_sets.custom(
        default=default, exceptions={3: ValuationSet.of((0, 1))}
    )
    base = A_global(index_sets.custom(default=default), 1, target_error=1e-9)
    got = A_global(spec, 1, target_error=1e-9)
    ratio = A_local(ValuationSet.of((0, 1)), 1, 3) / A_local(default, 1, 3)
    assert got.lo <= base.hi * float(ratio) + 1e-12
    assert got.hi >= base.lo * float(ratio) - 1e-12


def test_global_rejects_q0():
    spec = index_sets.multiples_of(3)
    with pytest.raises(UnsupportedSetError):
        A_global(spec, 1)


def test_prime_tail_series_enclosure():
    # brute-force the tail over a window and check the certified bounds
    vset = ValuationSet.of((0, 1))
    ser = defect_series(vset, 1, 12, Fraction(1, 1000)).neg_log_one_minus()
    lo, hi = series_prime_tail(ser, 10**5)
    brute = 0.0
    for seg in arith.prime_segments(3 * 10**7):
        import numpy as np

        sel = seg[seg > 10**5].astype(float)
        brute += float(np.sum(-np.log(1 - 1 / (sel**3 * (sel - 1)))))
    # remaining primes beyond 3e7 contribute < 2e-15 in total
    assert lo <= brute + 2e-15
    assert brute <= hi
