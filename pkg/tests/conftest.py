import random

from indexdensity import index_sets as isets

#: verdict lines collected by the acceptance tests, echoed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def random_vset(rng: random.Random, allow_full=True):
    """A random valuation set from a few structural shapes."""
    roll = rng.random()
    if allow_full and roll < 0.15:
        return isets.ValuationSet.full()
    intervals = []
    lo = rng.randrange(0, 3)
    for _ in range(rng.randrange(1, 4)):
        hi = lo + rng.randrange(0, 3)
        intervals.append((lo, hi))
        lo = hi + 2 + rng.randrange(0, 2)
    if rng.random() < 0.4:
        intervals.append((lo, None))
    return isets.ValuationSet.of(*intervals)


def random_spec(rng: random.Random):
    """A random index-set spec exercising Q0 boxes, exceptions, defaults."""
    roll = rng.random()
    if roll < 0.25:
        return isets.kfree(rng.randrange(2, 5))
    if roll < 0.4:
        return isets.multiples_of(rng.choice([2, 3, 4, 6, 9, 12]))
    if roll < 0.5:
        return isets.coprime_to(rng.choice([2, 3, 6, 10]))
    if roll < 0.6:
        m = rng.choice([2, 4, 6, 12])
        from indexdensity import arith

        return isets.gcd_equals(m, rng.choice(arith.divisors(m)))
    if roll < 0.7:
        return isets.single_prime(rng.choice([2, 3, 5]), random_vset(rng, allow_full=False))
    # custom: optional Q0 with boxes, plus exceptions
    q0 = rng.choice([1, 1, 2, 3, 4, 6])
    q0_primes = [p for p in (2, 3) if q0 % p == 0]
    boxes = None
    if q0 > 1:
        boxes = [
            {p: random_vset(rng) for p in q0_primes}
            for _ in range(rng.randrange(1, 3))
        ]
    default = random_vset(rng)
    while not default.contains(0):
        default = random_vset(rng)
    exceptions = {}
    for p in (5, 7):
        if rng.random() < 0.4:
            exceptions[p] = random_vset(rng)
    return isets.custom(q0, boxes, default, exceptions)
