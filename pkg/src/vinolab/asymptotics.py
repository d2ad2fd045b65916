"""Main terms of the asymptotic formulas, and exact-vs-main comparisons."""

from __future__ import annotations

import math
import warnings
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .arith import FactorSieve, WeightKind, count_omega_equals
from .counting import ProblemInstance, batch_counts
from .errors import InvalidArgument, OutOfRange, ValidityError
from .singular_series import DEFAULT_PRIME_CUTOFF, SingularSeriesTable, vanishing_criterion

# multiplier for bounds whose implied constant is unspecified
DEFAULT_COMPARISON_MULTIPLIER = 10.0


def _loglog(N: float) -> float:
    if N < 16:
        raise ValidityError(f"N={N} < 16: log log N too small for these formulas")
    return math.log(math.log(N))


def almost_prime_main_term(N: int, c: Sequence[int], r: Sequence[int], sseries: float, allow_small: bool = False) -> float:
    """Main term for the almost-prime count:

        1/(m-1)! * 1/prod (r_i - 1)! * 1/prod c_i * N^(m-1) / log^m N
        * (log log N)^(sum r_i - m) * sseries

    N <= 20 raises ValidityError unless ``allow_small`` is set, in which case
    a warning is issued and the formula is evaluated anyway.
    """
    c, r = tuple(c), tuple(r)
    m = len(c)
    if m < 3 or len(r) != m:
        raise InvalidArgument("need m >= 3 and len(r) == len(c)")
    if N <= 20:
        if not allow_small:
            raise ValidityError(f"N={N} <= 20 is outside the asymptotic range")
        warnings.warn(f"evaluating the main term at N={N} <= 20", stacklevel=2)
    if sum(1 for x in r if x == 1) < 3:
        warnings.warn("fewer than three r_i equal 1: formula not established", stacklevel=2)
    logN = math.log(N)
    excess = sum(r) - m
    lll = _loglog(N) ** excess if excess else 1.0
    denom = math.factorial(m - 1) * math.prod(math.factorial(x - 1) for x in r) * math.prod(c)
    return N ** (m - 1) / logN**m * lll * sseries / denom


def weighted_main_term(N: int, b: Sequence[int], c: Sequence[int] | None, sseries: float, variant: str = "lambda") -> float:
    """Main term for the weighted sums.

    variant "lambda" (or "theta"): N^(m-1) sseries / ((m-1)! prod b_i).
    variant "prime": the same divided by prod log(N / b_i).
    ``c`` when given must divide b componentwise (b_i = c_i eta_i).
    """
    b = tuple(int(x) for x in b)
    m = len(b)
    if reduce(math.gcd, b) != 1:
        raise InvalidArgument(f"gcd{b} != 1")
    if c is not None:
        if len(c) != m or any(bi % ci for bi, ci in zip(b, c)):
            raise InvalidArgument("each c_i must divide b_i")
    base = N ** (m - 1) * sseries / (math.factorial(m - 1) * math.prod(b))
    if variant in ("lambda", "theta"):
        return base
    if variant == "prime":
        if max(b) >= N:
            raise InvalidArgument("need b_i < N")
        return base / math.prod(math.log(N / bi) for bi in b)
    raise InvalidArgument(f"unknown variant {variant!r}")


def landau_main_term(x: float, k: int) -> float:
    """x (log log x)^(k-1) / ((k-1)! log x)."""
    if x < 3:
        raise InvalidArgument("x must be >= 3")
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    return x * math.log(math.log(x)) ** (k - 1) / (math.factorial(k - 1) * math.log(x))


def landau_ratio(sieve: FactorSieve, x: int, k: int) -> float:
    return count_omega_equals(sieve, x, k) / landau_main_term(x, k)


def denumerant_main_term(N: int, b: Sequence[int]) -> float:
    """N^(m-1) / ((m-1)! prod b_i)."""
    b = tuple(b)
    m = len(b)
    if m < 2:
        raise InvalidArgument("need m >= 2")
    return N ** (m - 1) / (math.factorial(m - 1) * math.prod(b))


@dataclass(frozen=True)
class SumComparison:
    exact: float
    asymptotic: float

    @property
    def ratio(self) -> float:
        return self.exact / self.asymptotic


def reciprocal_prime_log_sum(sieve: FactorSieve, x: float, delta: float) -> SumComparison:
    """sum_{p <= x^delta} 1/(p log(x/p)) against log log x / log x."""
    if not 0 < delta < 1:
        raise InvalidArgument("delta must lie in (0, 1)")
    if x <= math.e:
        raise InvalidArgument("x must exceed e")
    top = int(math.floor(x**delta * (1 + 1e-12)))
    if top > sieve.limit:
        raise OutOfRange(f"x^delta={top} exceeds sieve limit {sieve.limit}")
    p = sieve.primes[sieve.primes <= top].astype(np.float64)
    exact = math.fsum(1.0 / (p * np.log(x / p)))
    return SumComparison(exact, math.log(math.log(x)) / math.log(x))


def mertens_sum(sieve: FactorSieve, lo: float, hi: float) -> float:
    """sum of 1/p over primes lo < p <= hi."""
    if hi > sieve.limit:
        raise OutOfRange(f"hi={hi} exceeds sieve limit {sieve.limit}")
    p = sieve.primes
    sel = p[(p > lo) & (p <= hi)].astype(np.float64)
    return math.fsum(1.0 / sel)


def rm_upper_bound(N: int, b: Sequence[int]) -> float:
    """Envelope N^(m-1) / (prod b_i * prod log(N / b_i)) for prime-tuple counts."""
    b = tuple(b)
    if any(bi >= N for bi in b):
        raise InvalidArgument("need every b_i < N")
    return N ** (len(b) - 1) / (math.prod(b) * math.prod(math.log(N / bi) for bi in b))


# -- comparison tables -----------------------------------------------------


@dataclass(frozen=True)
class ComparisonRow:
    N: int
    exact: int | float
    main_term: float
    ratio: float | None
    sseries: float
    instance: ProblemInstance
    degenerate: bool = False

    @property
    def flags(self) -> str:
        out = []
        if self.degenerate:
            out.append("degenerate")
        if not self.instance.hypothesis_ok:
            out.append("outside-hypothesis")
        return ";".join(out)


def _rows(values, Ns, c, r, main_fn, table):
    rows = []
    for N in Ns:
        s = table.value(N)
        degenerate = vanishing_criterion(N, c).vanishes
        main = main_fn(N, s)
        exact = values[N]
        exact = int(exact) if isinstance(exact, (np.integer, int)) else float(exact)
        ratio = None if degenerate or main == 0 else exact / main
        rows.append(ComparisonRow(N, exact, main, ratio, s, ProblemInstance(c, r, N), degenerate))
    return rows


def compare_almost_prime(
    sieve: FactorSieve,
    c: Sequence[int],
    r: Sequence[int],
    Ns: Iterable[int],
    P: int = DEFAULT_PRIME_CUTOFF,
) -> list[ComparisonRow]:
    """Exact almost-prime counts against the main term, one row per N.

    All counts come from one batch convolution up to max(Ns).  Rows whose
    singular series vanishes are flagged degenerate and carry no ratio.
    """
    c, r = tuple(c), tuple(r)
    Ns = sorted(set(int(n) for n in Ns))
    if not Ns:
        return []
    if Ns[0] <= 20:
        raise ValidityError("comparisons need N > 20")
    if reduce(math.gcd, c) != 1:
        raise InvalidArgument(f"gcd{c} != 1")
    w = WeightKind.PRIME if all(x == 1 for x in r) else WeightKind.OMEGA
    values = batch_counts(sieve, c, r, Ns[-1], w).values
    table = SingularSeriesTable(c, P)
    with warnings.catch_warnings():
        # rows carry the hypothesis check in their flags instead
        warnings.simplefilter("ignore")
        return _rows(values, Ns, c, r, lambda N, s: almost_prime_main_term(N, c, r, s), table)


def compare_weighted(
    sieve: FactorSieve,
    b: Sequence[int],
    Ns: Iterable[int],
    w: WeightKind | str = WeightKind.LAMBDA,
    P: int = DEFAULT_PRIME_CUTOFF,
) -> list[ComparisonRow]:
    """Weighted sums (Lambda, theta or prime indicator) against their main terms.

    The singular series is taken with c = b (all eta_i = 1).
    """
    b = tuple(b)
    w = WeightKind(w)
    if w is WeightKind.OMEGA:
        raise InvalidArgument("use compare_almost_prime for Omega targets")
    Ns = sorted(set(int(n) for n in Ns))
    if not Ns:
        return []
    if Ns[0] <= 20:
        raise ValidityError("comparisons need N > 20")
    values = batch_counts(sieve, b, None, Ns[-1], w).values
    table = SingularSeriesTable(b, P)
    variant = "prime" if w is WeightKind.PRIME else "lambda"
    r = (1,) * len(b)
    return _rows(values, Ns, b, r, lambda N, s: weighted_main_term(N, b, b, s, variant), table)


def reduction_ratios(sieve: FactorSieve, b: Sequence[int], Ns: Iterable[int]) -> dict[str, list[float]]:
    """Per-N diagnostics for replacing log weights by indicators.

    ``prime_vs_theta``: r_m(N) * prod log(N / b_i) / R~_m(N) (tends to 1);
    ``prime_power_share``: (R_Lambda - R_theta) / R_Lambda (tends to 0).
    """
    b = tuple(b)
    Ns = sorted(set(int(n) for n in Ns))
    top = Ns[-1]
    lam = batch_counts(sieve, b, None, top, WeightKind.LAMBDA).values
    theta = batch_counts(sieve, b, None, top, WeightKind.THETA).values
    prime = batch_counts(sieve, b, None, top, WeightKind.PRIME).values
    out = {"N": Ns, "prime_vs_theta": [], "prime_power_share": []}
    for N in Ns:
        logs = math.prod(math.log(N / bi) for bi in b)
        out["prime_vs_theta"].append(float(prime[N]) * logs / theta[N] if theta[N] else math.nan)
        out["prime_power_share"].append((lam[N] - theta[N]) / lam[N] if lam[N] else math.nan)
    return out
