"""Exact Goldbach partition counts, uniform sampling of Goldbach numbers, and
numerical checks of their limiting moments and generating-function identities.

Typical use::

    from goldbach_lab import build_table_convolution, exact_moment, make_stream

    table = build_table_convolution(10**6)
    exact_moment(table, 1).exact          # E[G_n / n] as a Fraction
    stream = make_stream(table, seed=42)
"""

__version__ = "0.1.0"

from .errors import (
    CorruptCacheError,
    DomainError,
    GoldbachError,
    InvalidArgumentError,
    OutOfRangeError,
    PrecisionError,
    ResourceError,
    WideIntegerOverflow,
)
from .primes import PrimeTable, build_prime_table, is_odd_prime, prime_count
from .table import (
    GoldbachCountTable,
    build_table,
    build_table_convolution,
    build_table_direct,
    cardinality,
    count_q2_direct,
    weighted_sum,
)
from .cache import load_table, save_table
from .sampler import (
    GoldbachPartition,
    SamplerStream,
    enumerate_partitions,
    make_stream,
    sample_number,
    sample_numbers,
    sample_partition,
    two_step_estimate,
    two_step_exact,
)
from .moments import (
    CdfReport,
    LimitLaw,
    MomentReport,
    convergence_sweep,
    exact_moment,
    exact_variance,
    kolmogorov_distance,
    limit_cdf,
    limit_moment,
)
from .series import (
    AsymptoteDiagnostic,
    SeriesPoint,
    eval_series,
    lemma2_ratios,
    tauberian_ratio,
)
from .identities import euler_bivariate_check, verify_derivative_identities, verify_lemma1
