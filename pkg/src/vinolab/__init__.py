"""Exact representation counts, singular series and circle-method sums for
linear equations c_1 n_1 + ... + c_m n_m = N in primes and almost primes."""

__version__ = "0.1.0"

from .arith import FactorSieve, WeightKind, build_factor_sieve, classify, count_omega_equals
from .asymptotics import (
    compare_almost_prime,
    compare_weighted,
    denumerant_main_term,
    landau_main_term,
    reciprocal_prime_log_sum,
    almost_prime_main_term,
    weighted_main_term,
)
from .circle import ArcConfig, ArcPartition, exp_sum, fourier_count, major_arc_main_term, vaughan_decompose
from .counting import (
    CountMethod,
    ProblemInstance,
    batch_counts,
    count_almost_prime,
    count_prime_tuples,
    denumerant_exact,
    weighted_representation_sum,
)
from .errors import InvalidArgument, OutOfRange, ResourceLimit, Unsupported, ValidityError, VlabError
from .singular_series import (
    SingularSeriesTable,
    local_factor,
    ramanujan_sum,
    singular_series_partial,
    singular_series_product,
    vanishing_criterion,
)
