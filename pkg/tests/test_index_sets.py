import random

import pytest

from indexdensity import index_sets as isets
from indexdensity.errors import UnsupportedSetError, ValidationError
from indexdensity.index_sets import INF, ValuationSet

from conftest import random_spec


def test_interval_canonicalization():
    v = ValuationSet.of((3, 5), (0, 1), (2, 2))
    assert v.intervals == ((0, 5),)
    v = ValuationSet.of((0, 1), (4, None), (6, 8))
    assert v.intervals == ((0, 1), (4, None))
    assert ValuationSet.of((2, 3), (3, 7)).intervals == ((2, 7),)


def test_membership_and_flags():
    v = ValuationSet.of((0, 1), (4, None))
    assert 0 in v and 1 in v and 4 in v and 100 in v
    assert 2 not in v and 3 not in v
    assert not v.is_bounded()
    assert ValuationSet.of((0, 3)).is_bounded()
    assert ValuationSet.full().is_full()


def test_complement_involution():
    v = ValuationSet.of((1, 2), (5, None))
    c = v.complement()
    assert c.intervals == ((0, 0), (3, 4))
    assert c.complement() == v
    assert ValuationSet.full().complement().is_empty()


def test_g_power_jumps():
    v = ValuationSet.of((0, 1), (4, None))
    # starts get +1, one-past-ends get -1, m=0 reports membership of 0
    assert v.g_power(0) == 1
    assert v.g_power(2) == -1
    assert v.g_power(4) == 1
    assert v.g_power(1) == v.g_power(3) == 0
    assert v.jumps() == [2, 4]


def test_builders_membership():
    assert [n for n in range(1, 20) if isets.kfree(2).contains(n)] == [
        n for n in range(1, 20) if all(e < 2 for _, e in __import__("indexdensity").arith.factorize(n))
    ]
    m3 = isets.multiples_of(3)
    assert [n for n in range(1, 13) if m3.contains(n)] == [3, 6, 9, 12]
    cp6 = isets.coprime_to(6)
    assert [n for n in range(1, 13) if cp6.contains(n)] == [1, 5, 7, 11]
    ge = isets.gcd_equals(4, 2)
    assert [n for n in range(1, 20) if ge.contains(n)] == [2, 6, 10, 14, 18]


def test_moebius_transform_small():
    rng = random.Random(11)
    for _ in range(6):
        spec = random_spec(rng)
        for n in range(1, 400):
            assert spec.g(n) == spec.g_bruteforce(n), (spec.describe(), n)
        assert sum(spec.g(d) for d in __import__("indexdensity").arith.divisors(360)) == spec.chi(360)


def test_chi_is_divisor_sum_of_g():
    from indexdensity import arith

    rng = random.Random(5)
    for _ in range(8):
        spec = random_spec(rng)
        for n in (1, 2, 12, 36, 90, 128, 2310):
            assert sum(spec.g(d) for d in arith.divisors(n)) == spec.chi(n)


def test_classify_examples():
    assert isets.kfree(2).classify().kind == "klfree"
    assert isets.kfree(2).classify().kappa == 0.5
    spec = isets.custom(default=ValuationSet.of((0, 1), (4, None)))
    cls = spec.classify()
    assert cls.kind == "vlfin"
    assert abs(cls.kappa - 1 / 6) < 1e-12
    assert isets.multiples_of(3).classify().kind == "finiteq"
    with pytest.raises(UnsupportedSetError):
        isets.custom(default=ValuationSet.of((1, None)))
    cls = isets.custom(default=ValuationSet.of((0, 0))).classify()
    assert cls.kind == "unsupported"
    assert not cls.certified


def test_classify_almostcut():
    spec = isets.custom(
        q0=2,
        boxes=[{2: ValuationSet.of((1, 1))}],
        default=ValuationSet.of((0, 1)),
        exceptions={3: ValuationSet.of((0, 2))},
    )
    cls = spec.classify()
    assert cls.kind == "almostcut"
    assert cls.inner is not None


def test_validation_errors():
    with pytest.raises(ValidationError):
        ValuationSet.of((-1, 2))
    with pytest.raises(ValidationError):
        isets.kfree(1)
    with pytest.raises(ValidationError):
        isets.custom(q0=2, boxes=[{3: ValuationSet.full()}])
    with pytest.raises(ValidationError):
        isets.custom(exceptions={4: ValuationSet.full()})


def test_exception_absorption():
    # an exception set without 0 forces the prime into the joint part
    spec = isets.custom(default=ValuationSet.full(),
                        exceptions={3: ValuationSet.of((1, None))})
    assert spec.q0 % 3 == 0
    assert 3 in spec.q0_primes
    assert [n for n in range(1, 13) if spec.contains(n)] == [3, 6, 9, 12]


def test_json_roundtrip():
    rng = random.Random(99)
    for _ in range(20):
        spec = random_spec(rng)
        again = isets.spec_from_json(spec.to_json())
        assert again == spec
    v = ValuationSet.of((0, 2), (5, None))
    assert ValuationSet.from_json(v.to_json()) == v
