from fractions import Fraction

import pytest

from indexdensity import index_sets
from indexdensity.density import (
    density,
    density_finiteQ,
    density_kfree,
    density_limit_sequence,
    density_product,
    density_series,
    density_single_prime,
    omitted_tail_bound,
)
from indexdensity.errors import UnsupportedSetError, ValidationError
from indexdensity.index_sets import ValuationSet
from indexdensity.kummer import FrobeniusCondition, validate_group


G2 = validate_group([2])
G5 = validate_group([5])
G4 = validate_group([4])
G23 = validate_group([2, 3])


def test_multiples_exact_values():
    # index divisible by 3 for <2>: 1/deg(3,3) = 1/6
    r = density(G2, index_sets.multiples_of(3))
    assert r.exact == Fraction(1, 6)
    # index divisible by 2 for <4>: 4 is a square, every odd p qualifies
    r = density(G4, index_sets.multiples_of(2))
    assert r.exact == Fraction(1)
    r = density(G2, index_sets.multiples_of(2))
    assert r.exact == Fraction(1, 2)


def test_gcd_exact_values():
    assert density(G2, index_sets.gcd_equals(2, 1)).exact == Fraction(1, 2)
    assert density(G23, index_sets.gcd_equals(2, 1)).exact == Fraction(3, 4)
    assert density(G4, index_sets.gcd_equals(2, 1)).exact == Fraction(0)


def test_single_prime_matches_series():
    vset = ValuationSet.of((0, 1))
    direct = density_single_prime(G2, 3, vset)
    via_series = density_series(G2, index_sets.single_prime(3, vset))
    assert direct.exact == via_series.exact
    assert direct.exact == 1 - Fraction(1, 54)


def test_frobenius_class_density():
    # <5> split by the residue of p mod 4, index divisible by 3
    frob = FrobeniusCondition.make(4, [1])
    r = density(G5, index_sets.multiples_of(3), frob=frob)
    assert r.exact == Fraction(1, 12)


def test_series_product_agreement():
    specs = [
        index_sets.kfree(2),
        index_sets.kfree(3),
        index_sets.gcd_equals(2, 1),
        index_sets.single_prime(3, ValuationSet.of((0, 1))),
    ]
    for g in (G2, G23):
        for spec in specs:
            a = density_series(g, spec, eps=1e-7)
            b = density_product(g, spec, eps=1e-7)
            assert a.overlaps(b, slack=1e-6), (g.key(), spec.to_json())
            assert a.error <= 1e-6 and b.error <= 1e-6


def test_kfree2_reference_value():
    r = density_kfree(G2, 2, eps=1e-8)
    assert abs(r.value - 0.856540444854) < 2e-8
    assert r.certified


def test_limit_ladder_monotone_and_tail():
    spec = index_sets.kfree(2)
    ladder = (2, 6, 30, 210, 2310)
    seq = density_limit_sequence(G2, spec, ladder=ladder)
    vals = [r.exact for r in seq]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    final = density_kfree(G2, 2, eps=1e-9)
    bound = omitted_tail_bound(G2, spec, 2310)
    assert abs(float(vals[-1]) - final.value) <= bound + 1e-9


def test_finiteQ_validation():
    spec = index_sets.multiples_of(3)
    with pytest.raises(ValidationError):
        density_finiteQ(G2, spec, 10)  # Q must be a multiple of q0 = 3
    assert density_finiteQ(G2, spec, 3).exact == Fraction(1, 6)


def test_rank2_frobenius_rejected():
    frob = FrobeniusCondition.make(4, [1])
    with pytest.raises(UnsupportedSetError):
        density(G23, index_sets.multiples_of(3), frob=frob)


def test_dispatcher_methods_match():
    spec = index_sets.kfree(2)
    a = density(G2, spec, method="series", eps=1e-7)
    b = density(G2, spec, method="product", eps=1e-7)
    assert a.overlaps(b, slack=1e-7)


def test_result_serialization():
    r = density(G2, index_sets.multiples_of(3))
    d = r.to_dict()
    assert d["certified"] and d["exact"] == "1/6"
    assert d["lo"] <= d["value"] <= d["hi"]
