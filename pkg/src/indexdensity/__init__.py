"""Densities of primes classified by the index of a rational multiplicative group."""

__version__ = "0.1.0"

from .errors import (
    AmbiguousDegreeError,
    InsufficientSamplesError,
    ResourceLimitError,
    UnsupportedSetError,
    ValidationError,
)
from .index_sets import (
    INF,
    IndexSetSpec,
    ValuationSet,
    coprime_to,
    custom,
    gcd_equals,
    kfree,
    klfree,
    multiples_of,
    single_prime,
    spec_from_json,
)
from .kummer import (
    FrobeniusCondition,
    RationalGroup,
    c_coefficient,
    degree,
    degree_montecarlo,
    degree_rank1,
    entanglement_bound,
    validate_group,
)
from .constants import A_global, A_local, BoundedValue, E
from .density import (
    DensityResult,
    density,
    density_almostcut,
    density_finiteQ,
    density_kfree,
    density_limit_sequence,
    density_product,
    density_series,
    density_single_prime,
    omitted_tail_bound,
)
from .empirical import (
    Comparison,
    EmpiricalCount,
    compare,
    count_divisible,
    count_index_in_set,
    index_of,
    li,
    valuation_histogram,
)
