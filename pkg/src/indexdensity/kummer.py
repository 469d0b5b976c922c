"""Degrees of cyclotomic-Kummer extensions of Q and related data.

For a finitely generated torsion-free subgroup G of Q* of rank r, the
degree of Q(zeta_m, G^(1/n)) over Q equals phi(m) n^r / D, where D counts
exponent classes e in (Z/n)^r whose word lands in the n-th powers of
Q(zeta_m).  Membership of a rational in the d-th powers of a cyclotomic
field is decidable from its factorization alone: the only radicals of
rationals inside Q(zeta_m) are products of roots of unity with square
roots of quadratic-field generators of discriminant dividing m.  That
gives an exact degree formula at every level; a prime-splitting sampler
provides an independent statistical check.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

from . import arith, kernel
from .errors import (
    AmbiguousDegreeError,
    InsufficientSamplesError,
    UnsupportedSetError,
    ValidationError,
)


# -- groups ------------------------------------------------------------------


@dataclass(frozen=True)
class RationalGroup:
    """Multiplicatively independent rational generators (torsion-free)."""

    generators: tuple[Fraction, ...]
    support: tuple[int, ...]  # primes appearing in any generator
    exponents: tuple[tuple[int, ...], ...]  # rows: generators, cols: support
    signs: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.generators)

    def key(self) -> str:
        return ",".join(str(g) for g in self.generators)

    def word(self, e) -> tuple[int, dict]:
        """Sign and prime-exponent dict of prod generators[i]**e[i]."""
        sign = 1
        alpha: dict[int, int] = {}
        for i, ei in enumerate(e):
            if ei == 0:
                continue
            if self.signs[i] < 0 and ei % 2:
                sign = -sign
            for q, a in zip(self.support, self.exponents[i]):
                if a:
                    alpha[q] = alpha.get(q, 0) + a * ei
        return sign, {q: a for q, a in alpha.items() if a}


def validate_group(generators) -> RationalGroup:
    """Check independence/torsion-freeness and build the exponent data."""
    gens = []
    for g in generators:
        g = Fraction(g)
        if g == 0 or g == 1 or g == -1:
            raise ValidationError(f"generator {g} is zero or a root of unity")
        gens.append(g)
    if not gens:
        raise ValidationError("at least one generator required")
    support = sorted(
        {p for g in gens for p, _ in arith.factorize(abs(g.numerator) * g.denominator)}
    )
    rows = []
    signs = []
    for g in gens:
        signs.append(1 if g > 0 else -1)
        num = dict(arith.factorize(abs(g.numerator)))
        den = dict(arith.factorize(g.denominator))
        rows.append(tuple(num.get(p, 0) - den.get(p, 0) for p in support))
    # rational row reduction; a kernel vector exhibits a dependence
    mat = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(len(gens))]
           for i, row in enumerate(rows)]
    ncols = len(support)
    pivot_rows = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c]), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        for i in range(len(mat)):
            if i != r and mat[i][c]:
                f = mat[i][c] / mat[r][c]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivot_rows.append(r)
        r += 1
    if r < len(gens):
        # row r of the reduced matrix is zero on the exponent block; its
        # multiplier block gives an integer dependence after clearing denominators
        mult = mat[r][ncols:]
        lcm = math.lcm(*[f.denominator for f in mult])
        coeffs = [int(f * lcm) for f in mult]
        word_sign = 1
        for s, c in zip(signs, coeffs):
            if s < 0 and c % 2:
                word_sign = -word_sign
        what = "equals -1 (torsion)" if word_sign < 0 else "equals 1 (dependence)"
        rel = " * ".join(f"({g})^{c}" for g, c in zip(gens, coeffs) if c)
        raise ValidationError(f"generators are not independent: {rel} {what}")
    return RationalGroup(
        generators=tuple(gens),
        support=tuple(support),
        exponents=tuple(tuple(r) for r in rows),
        signs=tuple(signs),
    )


# -- Frobenius side conditions ------------------------------------------------


@dataclass(frozen=True)
class FrobeniusCondition:
    """Restrict to primes with p mod f in a fixed residue set."""

    conductor: int
    residues: tuple[int, ...]

    @staticmethod
    def make(conductor: int, residues) -> "FrobeniusCondition":
        f = int(conductor)
        if f < 1:
            raise ValidationError("conductor must be >= 1")
        rs = sorted({int(c) % f for c in residues})
        if not rs:
            raise ValidationError("empty residue set")
        for c in rs:
            if math.gcd(c, f) != 1:
                raise ValidationError(f"residue {c} not invertible mod {f}")
        return FrobeniusCondition(f, tuple(rs))

    @staticmethod
    def trivial() -> "FrobeniusCondition":
        return FrobeniusCondition(1, (0,))

    @property
    def is_trivial(self) -> bool:
        return self.conductor == 1


# -- radicals in cyclotomic fields --------------------------------------------


def _sqfree_kernel(sign: int, alpha: dict) -> int:
    """Signed squarefree kernel of sign * prod q^alpha[q]."""
    k = sign
    for q, a in alpha.items():
        if a % 2:
            k *= q
    return k


def _fundamental_disc(k: int) -> int:
    """Discriminant of Q(sqrt(k)) for squarefree k (k=1 -> 1)."""
    return k if k % 4 == 1 else 4 * k


def _zeta_sqrt_in_field(T: int, j: int, k: int, m: int) -> bool:
    """Is zeta_{2^T}^j * sqrt(k) in Q(zeta_m)?  (k squarefree positive)

    Checked by Galois invariance: the element lies in Q(zeta_N) with
    N = lcm(m, 2^T, disc), and sigma_u fixes it for u = 1 (mod m) iff
    zeta_{2^T}^{j(u-1)} * chi_k(u) = 1, where chi_k is the quadratic
    character of Q(sqrt k).
    """
    two_T = 1 << T
    j %= two_T
    dk = abs(_fundamental_disc(k)) if k != 1 else 1
    N = math.lcm(m, two_T, dk)
    for s in range(N // m):
        u = 1 + m * s
        if math.gcd(u, N) != 1:
            continue
        val = (j * (u - 1)) % two_T
        if two_T >= 2 and val not in (0, two_T >> 1):
            return False  # a non-real root of unity cannot cancel chi = +-1
        root = -1 if (two_T >= 2 and val == two_T >> 1) else 1
        chi = arith.kronecker(_fundamental_disc(k), u) if k != 1 else 1
        if root * chi != 1:
            return False
    return True


def _is_dth_power_in_cyclotomic(sign: int, alpha: dict, d: int, m: int) -> bool:
    """Is sign * prod q^alpha[q] a d-th power in Q(zeta_m)?

    Any d-th root z satisfies z = rho * omega with rho the positive real
    root and omega^d = sign a root of unity; rho generates an abelian
    field only if it is rational times the square root of an integer, so
    membership reduces to finitely many zeta * sqrt(k) checks.
    """
    if d == 1:
        return True
    e2 = (d & -d).bit_length() - 1  # v_2(d)
    d_odd = d >> e2
    # odd part: odd radicals of rationals inside cyclotomic fields are
    # rational, so the exponents must all be divisible
    if d_odd > 1 and any(a % d_odd for a in alpha.values()):
        return False
    if e2 == 0:
        return True
    half = 1 << (e2 - 1)
    if any(a % half for a in alpha.values()):
        return False
    k0 = 1
    for q, a in alpha.items():
        if (a // half) % 2:
            k0 *= q
    # omega runs over roots of unity with omega^(2^e2) = sign
    T = e2 + 1 if sign == -1 else e2
    for j in range(1 << T):
        if sign == -1 and j % 2 == 0:
            continue
        if _zeta_sqrt_in_field(T, j, k0, m):
            return True
    return False


def is_power_in_cyclotomic(x, d: int, m: int) -> bool:
    """Is the rational x a d-th power in Q(zeta_m)?"""
    x = Fraction(x)
    if x == 0:
        raise ValidationError("x must be nonzero")
    sign = 1 if x > 0 else -1
    alpha = dict(arith.factorize(abs(x.numerator)))
    for q, a in arith.factorize(x.denominator):
        alpha[q] = alpha.get(q, 0) - a
    alpha = {q: a for q, a in alpha.items() if a}
    return _is_dth_power_in_cyclotomic(sign, alpha, int(d), int(m))


# -- degrees -------------------------------------------------------------------


_degree_cache: dict = {}

#: enumeration guard for the entangled-part subgroup count
MAX_ENUMERATION = 4_000_000


def entanglement_bound(group: RationalGroup) -> int:
    """B such that phi(m) n^r / [Q(zeta_m, G^(1/n)):Q] always divides B and
    every level coprime to B is generic.  Conservative on purpose."""
    if group.rank == 1:
        a = group.generators[0]
        alpha = dict(arith.factorize(abs(a.numerator)))
        for q, e in arith.factorize(a.denominator):
            alpha[q] = alpha.get(q, 0) - e
        alpha = {q: v for q, v in alpha.items() if v}
        h0 = math.gcd(*[abs(v) for v in alpha.values()])
        # every support prime can surface in a square-root layer of some
        # power of a (not just the squarefree kernel), so all of them
        # count as potentially entangled
        prod_support = math.prod(alpha.keys())
        return math.lcm(2 * h0, arith.radical(2 * prod_support))
    # gcd of all maximal minors of the exponent matrix: odd primes where
    # a nontrivial word can be a perfect power
    r = group.rank
    cols = list(range(len(group.support)))
    minors = []
    import itertools

    for combo in itertools.combinations(cols, r):
        sub = [[group.exponents[i][j] for j in combo] for i in range(r)]
        minors.append(_int_det(sub))
    g_minor = math.gcd(*minors) if minors else 0
    if g_minor == 0:
        raise ValidationError("exponent matrix is singular")
    prod_support = math.prod(group.support)
    return (2 ** (r + 1) * g_minor**r
            * arith.radical(2 * g_minor * prod_support))


def _int_det(mat) -> int:
    n = len(mat)
    mat = [row[:] for row in mat]
    det = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if mat[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            mat[c], mat[piv] = mat[piv], mat[c]
            det = -det
        for i in range(c + 1, n):
            f = Fraction(mat[i][c], mat[c][c])
            mat[i] = [a - f * b for a, b in zip(mat[i], mat[c])]
    for c in range(n):
        det *= mat[c][c]
    return abs(int(det))


def _degree_entangled(group: RationalGroup, m: int, n: int) -> int:
    """Exact degree by enumerating exponent classes (use at smooth levels)."""
    r = group.rank
    if n == 1:
        return arith.euler_phi(m)
    if r == 1:
        sign, alpha = group.word((1,))
        d_best = 1
        for d in arith.divisors(n):
            if d > d_best and _is_dth_power_in_cyclotomic(sign, alpha, d, m):
                d_best = d
        return arith.euler_phi(m) * n // d_best
    if n**r > MAX_ENUMERATION:
        raise ValidationError(
            f"entangled-level enumeration {n}^{r} exceeds guard; "
            "refine the entanglement bound or lower the level"
        )
    import itertools

    count = 0
    for e in itertools.product(range(n), repeat=r):
        sign, alpha = group.word(e)
        if _is_dth_power_in_cyclotomic(sign, alpha, n, m):
            count += 1
    return arith.euler_phi(m) * n**r // count


def degree(group: RationalGroup, m: int, n: int) -> int:
    """[Q(zeta_m, G^(1/n)) : Q] for n | m, exactly."""
    m, n = int(m), int(n)
    if m < 1 or n < 1 or m % n:
        raise ValidationError("need n | m")
    key = (group.key(), m, n)
    if key in _degree_cache:
        return _degree_cache[key]
    b = entanglement_bound(group)
    mb, mt = _smooth_split(m, b)
    nb, nt = _smooth_split(n, b)
    out = (_degree_entangled(group, mb, nb)
           * arith.euler_phi(mt) * nt**group.rank)
    _degree_cache[key] = out
    return out


def _smooth_split(n: int, b: int) -> tuple[int, int]:
    """n = (b-smooth part) * (coprime-to-b part)."""
    sm = 1
    rest = n
    g = math.gcd(rest, b)
    while g > 1:
        sm *= g
        rest //= g
        g = math.gcd(rest, b)
    return sm, rest


def degree_rank1(a, m: int, n: int) -> int:
    """[Q(zeta_m, a^(1/n)) : Q] for a rational a, n | m."""
    return degree(validate_group([a]), m, n)


def save_degree_cache(path) -> None:
    data = [[k[0], k[1], k[2], v] for k, v in sorted(_degree_cache.items())]
    with open(path, "w") as fh:
        json.dump(data, fh)


def load_degree_cache(path) -> int:
    with open(path) as fh:
        data = json.load(fh)
    for gkey, m, n, v in data:
        _degree_cache[(gkey, int(m), int(n))] = int(v)
    return len(data)


# -- statistical cross-check ---------------------------------------------------


def degree_montecarlo(group: RationalGroup, n: int, prime_budget: int,
                      m: int | None = None) -> int:
    """Estimate [Q(zeta_m, G^(1/n)):Q] from splitting frequencies.

    Scans all primes p <= prime_budget with p = 1 (mod m) and tests whether
    every generator is an n-th power mod p; the degree is phi(m) n^r / t
    for the divisor t of n^r nearest to the observed frequency.  Raises if
    fewer than 200 usable primes exist or if two candidate divisors both
    sit within 3 sigma.
    """
    m = int(n) if m is None else int(m)
    n = int(n)
    if m % n:
        raise ValidationError("need n | m")
    nums = [g.numerator for g in group.generators]
    dens = [g.denominator for g in group.generators]
    samples, splits = kernel.split_counts(m, n, nums, dens, prime_budget)
    if samples < 200:
        raise InsufficientSamplesError(
            f"only {samples} primes = 1 mod {m} below {prime_budget}"
        )
    r = group.rank
    space = n**r
    t_hat = splits / samples * space
    sigma_t = 3.0 * space * math.sqrt(
        max(splits, 1) / samples * (1 - splits / samples) / samples
    )
    cands = sorted(arith.divisors(space), key=lambda t: (abs(t - t_hat), t))
    best = cands[0]
    if len(cands) > 1:
        second = cands[1]
        if abs(second - t_hat) <= sigma_t and second != best:
            raise AmbiguousDegreeError(
                f"divisors {best} and {second} both within 3 sigma of "
                f"{t_hat:.3f} (sigma band {sigma_t:.3f}); raise the budget"
            )
    return arith.euler_phi(m) * space // best


_validated: dict = {}


def validate_degree(group: RationalGroup, m: int, n: int,
                    budgets=(10**6, 4 * 10**6, 2 * 10**7)) -> bool:
    """Cross-check the exact degree against the sampler, escalating the
    budget until the estimate is unambiguous.  Results are cached."""
    key = (group.key(), int(m), int(n))
    if key in _validated:
        return _validated[key]
    want = degree(group, m, n)
    ok = False
    for budget in budgets:
        try:
            got = degree_montecarlo(group, n, budget, m=m)
        except (AmbiguousDegreeError, InsufficientSamplesError):
            continue
        ok = got == want
        break
    _validated[key] = ok
    return ok


# -- the coefficient c(n) -------------------------------------------------------


def c_coefficient(frob: FrobeniusCondition, group: RationalGroup, n: int) -> int:
    """Number of admissible residues acting trivially on the intersection
    of Q(zeta_f) with the level-n Kummer field.

    The intersection is the cyclotomic part Q(zeta_gcd(f,n)) together with
    the quadratic fields sqrt(k0 * d) (k0 the squarefree kernel of a
    generator word, available once 2 | n; d running over quadratics of
    Q(zeta_n)).  Rank >= 2 with a nontrivial condition is out of scope.
    """
    if frob.is_trivial:
        return 1
    if group.rank >= 2:
        raise UnsupportedSetError(
            "nontrivial Frobenius conditions are limited to rank-1 groups"
        )
    f = frob.conductor
    n = int(n)
    g = math.gcd(f, n)
    discs = []
    if n % 2 == 0:
        a = group.generators[0]
        alpha = dict(arith.factorize(abs(a.numerator)))
        for q, e in arith.factorize(a.denominator):
            alpha[q] = alpha.get(q, 0) - e
        k0 = _sqfree_kernel(1 if a > 0 else -1,
                            {q: v for q, v in alpha.items() if v})
        # quadratic subfields of Q(zeta_n): sqrt(d) with disc(d) | n
        quads = [1]
        for d in _signed_squarefree_divisors(2 * arith.radical(n)):
            if d != 1 and n % abs(_fundamental_disc(d)) == 0:
                quads.append(d)
        for d in quads:
            k = _merge_squarefree(k0, d)
            if k != 1:
                disc = _fundamental_disc(k)
                if f % abs(disc) == 0:
                    discs.append(disc)
    count = 0
    for c in frob.residues:
        if c % g != 1 % g:
            continue
        if all(arith.kronecker(disc, c) == 1 for disc in discs):
            count += 1
    return count


def _signed_squarefree_divisors(n: int):
    base = [1]
    for p, _ in arith.factorize(n):
        base = base + [d * p for d in base]
    return [s * d for d in base for s in (1, -1)]


def _merge_squarefree(a: int, b: int) -> int:
    """Squarefree kernel of a*b for squarefree a, b."""
    g = math.gcd(abs(a), abs(b))
    return a * b // (g * g)
