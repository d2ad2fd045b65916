"""Exact counts of representations N = c_1 n_1 + ... + c_m n_m.

Every count is formed the same way: slot i contributes an array whose entry
at index c_i * n is the weight of n (1 when Omega(n) = r_i, say), and the m
arrays are convolved together.  Variable i therefore ranges over
1 <= n_i <= N / c_i.  Integer weights go through the exact convolution,
log weights through the real one.
"""

from __future__ import annotations

import enum
import itertools
import math
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .arith import FactorSieve, WeightKind
from .convolution import convolve_many
from .errors import InvalidArgument, OutOfRange


class CountMethod(str, enum.Enum):
    CONVOLUTION = "convolution"
    DIRECT = "direct_enumeration"
    DFT = "dft"


@dataclass(frozen=True)
class ProblemInstance:
    """One counting problem: coefficients c, Omega targets r, target N."""

    c: tuple[int, ...]
    r: tuple[int, ...]
    N: int

    def __post_init__(self):
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        object.__setattr__(self, "r", tuple(int(x) for x in self.r))
        object.__setattr__(self, "N", int(self.N))
        if len(self.c) < 2:
            raise InvalidArgument("need at least two variables")
        if len(self.c) != len(self.r):
            raise InvalidArgument(f"len(c)={len(self.c)} but len(r)={len(self.r)}")
        if min(self.c) < 1 or min(self.r) < 1:
            raise InvalidArgument("coefficients and Omega targets must be positive")
        if self.N < 1:
            raise InvalidArgument(f"N must be positive, got {self.N}")

    @property
    def m(self) -> int:
        return len(self.c)

    @property
    def gcd(self) -> int:
        return reduce(math.gcd, self.c)

    @property
    def hypothesis_ok(self) -> bool:
        """gcd(c) = 1, m >= 3 and at least three r_i equal to 1."""
        return self.gcd == 1 and self.m >= 3 and sum(1 for x in self.r if x == 1) >= 3

    @property
    def asymptotic_ok(self) -> bool:
        return self.hypothesis_ok and self.N > 20

    def permuted(self, perm: Sequence[int]) -> "ProblemInstance":
        return ProblemInstance(tuple(self.c[i] for i in perm), tuple(self.r[i] for i in perm), self.N)


@dataclass(frozen=True)
class CountResult:
    exact_count: int
    instance: ProblemInstance
    method_tag: CountMethod = CountMethod.CONVOLUTION
    weighted_value: float | None = None


def _need(sieve: FactorSieve, N: int) -> None:
    if N > sieve.limit:
        raise OutOfRange(f"N={N} exceeds sieve limit {sieve.limit}")


def _spread(values: np.ndarray, c: int, N: int) -> np.ndarray:
    """Place values[n] at index c*n for 1 <= n <= N // c; length N + 1."""
    out = np.zeros(N + 1, dtype=values.dtype)
    top = N // c
    out[c : c * top + 1 : c] = values[1 : top + 1]
    return out


def _omega_slot(sieve: FactorSieve, r: int, upto: int, squarefree_only: bool) -> np.ndarray:
    w = (sieve.big_omega[: upto + 1] == r).astype(np.int64)
    if squarefree_only:
        w &= sieve.moebius[: upto + 1] != 0
    return w


def prime_product_multiplicity(sieve: FactorSieve, r: int, upto: int) -> np.ndarray:
    """M_r[n] = number of ordered r-tuples of primes whose product is n.

    Built by r - 1 Dirichlet convolutions with the prime indicator, i.e. by
    extending every (k-1)-tuple product by one more prime p while the
    product stays <= upto.
    """
    _need(sieve, upto)
    if r < 1:
        raise InvalidArgument("r must be >= 1")
    primes = sieve.primes
    cur = sieve.is_prime[: upto + 1].astype(np.int64)
    for _ in range(r - 1):
        nxt = np.zeros(upto + 1, dtype=np.int64)
        for p in primes[primes <= upto // 2]:
            p = int(p)
            top = upto // p
            nxt[p : p * top + 1 : p] += cur[1 : top + 1]
        cur = nxt
    return cur


def _slot_arrays(sieve, inst: ProblemInstance, tuples: bool, squarefree_only: bool, N: int):
    arrays = []
    for c, r in zip(inst.c, inst.r):
        top = N // c
        if tuples:
            w = prime_product_multiplicity(sieve, r, max(top, 1))
            if squarefree_only:
                w = w * (sieve.moebius[: w.size] != 0)
        else:
            w = _omega_slot(sieve, r, max(top, 1), squarefree_only)
        arrays.append(_spread(w, c, N))
    return arrays


def _direct_count(slots: list[np.ndarray], N: int) -> int:
    # nested loops over the supports of the first m-1 slots; last slot closes
    supports = [np.flatnonzero(a) for a in slots[:-1]]
    last = slots[-1]
    total = 0

    def rec(i, remaining, weight):
        nonlocal total
        if i == len(supports):
            if 0 <= remaining < last.size:
                total += weight * int(last[remaining])
            return
        for k in supports[i]:
            k = int(k)
            if k >= remaining:
                break
            rec(i + 1, remaining - k, weight * int(slots[i][k]))

    rec(0, N, 1)
    return total


def _dft_count(slots: list[np.ndarray], N: int) -> int:
    from .circle import circle_integral

    value = circle_integral(slots, N)
    count = round(value.real)
    if abs(value.real - count) > 0.25 or abs(value.imag) > 0.25:
        raise InvalidArgument("DFT count too large to round reliably; use the convolution method")
    return int(count)


def _count(sieve, inst, tuples, squarefree_only, method):
    _need(sieve, inst.N)
    method = CountMethod(method)
    slots = _slot_arrays(sieve, inst, tuples, squarefree_only, inst.N)
    if method is CountMethod.CONVOLUTION:
        full = convolve_many(slots, limit=inst.N, exact=True)
        value = int(full[inst.N]) if full.size > inst.N else 0
    elif method is CountMethod.DIRECT:
        value = _direct_count(slots, inst.N)
    else:
        value = _dft_count(slots, inst.N)
    return CountResult(value, inst, method)


def count_almost_prime(
    sieve: FactorSieve,
    inst: ProblemInstance,
    method: CountMethod | str = CountMethod.CONVOLUTION,
    squarefree_only: bool = False,
) -> CountResult:
    """#{(n_1..n_m) : sum c_i n_i = N, Omega(n_i) = r_i for all i}."""
    return _count(sieve, inst, False, squarefree_only, method)


def count_prime_tuples(
    sieve: FactorSieve,
    inst: ProblemInstance,
    method: CountMethod | str = CountMethod.CONVOLUTION,
    squarefree_only: bool = False,
) -> CountResult:
    """Number of prime tuples (n_j^(i)), i <= r_j, with sum_j c_j prod_i n_j^(i) = N.

    Tuples are ordered within each slot and primes may repeat, so a slot
    value n with Omega(n) = r_j is counted M(n) times, M being the
    multinomial of its prime exponents (r_j! when n is squarefree).
    With ``squarefree_only`` the slot products are restricted to squarefree
    numbers, where the count is exactly r_1! ... r_m! times the
    corresponding almost-prime count.
    """
    return _count(sieve, inst, True, squarefree_only, method)


def tuple_count_decomposition(sieve: FactorSieve, inst: ProblemInstance) -> dict[int, int]:
    """Split the almost-prime solutions by their tuple multiplicity.

    Returns {prod_j M(n_j): number of solutions (n_1..n_m)}.  Summing the
    values gives count_almost_prime, summing key * value gives
    count_prime_tuples.  Solutions with a repeated prime inside some slot
    are exactly those whose key is below r_1! ... r_m!.
    """
    _need(sieve, inst.N)
    N = inst.N
    mults = []
    for c, r in zip(inst.c, inst.r):
        w = prime_product_multiplicity(sieve, r, max(N // c, 1))
        mults.append(_spread(w, c, N))
    distinct = sorted({int(v) for a in mults for v in np.unique(a) if v})
    out: Counter[int] = Counter()
    # group each slot by multiplicity level and count with one convolution per combination
    for combo in itertools.product(distinct, repeat=inst.m):
        slots = [(a == lvl).astype(np.int64) for a, lvl in zip(mults, combo)]
        if not all(s.any() for s in slots):
            continue
        n = int(convolve_many(slots, limit=N, exact=True)[N])
        if n:
            out[math.prod(combo)] += n
    return dict(sorted(out.items()))


def _weight_slots(sieve: FactorSieve, N: int, b: Sequence[int], w: WeightKind, r=None):
    w = WeightKind(w)
    arrays = []
    for i, bi in enumerate(b):
        top = max(N // bi, 1)
        k = None
        if w is WeightKind.OMEGA:
            if r is None:
                raise InvalidArgument("OMEGA weight needs Omega targets r")
            k = r[i]
        arrays.append(_spread(sieve.weights(w, upto=top, k=k), bi, N))
    return arrays


def _check_coeffs(b: Sequence[int]) -> tuple[int, ...]:
    b = tuple(int(x) for x in b)
    if len(b) < 1 or min(b) < 1:
        raise InvalidArgument(f"coefficients must be positive, got {b}")
    return b


def weighted_representation_sum(
    sieve: FactorSieve, N: int, b: Sequence[int], w: WeightKind | str, r: Sequence[int] | None = None
):
    """Sum over sum b_i n_i = N of prod w(n_i).

    Integer weights (prime / Omega indicators) return an exact int, the
    log weights a float.
    """
    b = _check_coeffs(b)
    _need(sieve, N)
    w = WeightKind(w)
    slots = _weight_slots(sieve, N, b, w, r)
    full = convolve_many(slots, limit=N, exact=w.is_integral)
    return int(full[N]) if w.is_integral else float(full[N])


def denumerant_exact(N: int, b: Sequence[int]) -> int:
    """J_b(N): number of positive solutions of b_1 n_1 + ... + b_m n_m = N.

    Substituting n_i = 1 + k_i turns this into the classic coin-change count
    of nonnegative solutions of sum b_i k_i = N - sum b_i, done one
    coefficient at a time; within a residue class mod b_i the update is a
    prefix sum.
    """
    b = _check_coeffs(b)
    if N < 0:
        raise InvalidArgument("N must be nonnegative")
    target = N - sum(b)
    if target < 0:
        return 0
    m = len(b)
    big = math.comb(target + m, m) > (1 << 62)
    ways = np.zeros(target + 1, dtype=object if big else np.int64)
    ways[0] = 1
    for bi in b:
        for res in range(min(bi, target + 1)):
            ways[res::bi] = np.cumsum(ways[res::bi])
    return int(ways[target])


@dataclass
class BatchCounts(Sequence):
    """Counts for every N in 0..N_max from a single m-fold convolution.

    ``values[N]`` holds the raw number (int or float); indexing returns a
    CountResult for that N.
    """

    c: tuple[int, ...]
    r: tuple[int, ...] | None
    weight: WeightKind
    values: np.ndarray
    method_tag: CountMethod = field(default=CountMethod.CONVOLUTION)

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, N):
        if isinstance(N, slice):
            return [self[i] for i in range(*N.indices(len(self)))]
        if N < 0:
            N += len(self)
        v = self.values[N]
        inst = ProblemInstance(self.c, self.r or (1,) * len(self.c), max(N, 1))
        if self.weight.is_integral:
            return CountResult(int(v), inst, self.method_tag)
        return CountResult(0, inst, self.method_tag, weighted_value=float(v))


def batch_counts(
    sieve: FactorSieve,
    c: Sequence[int],
    r: Sequence[int] | None,
    N_max: int,
    w: WeightKind | str = WeightKind.OMEGA,
    truncate: bool = True,
) -> BatchCounts:
    """Counts (or weighted sums) for all N <= N_max at once.

    With ``truncate=False`` the convolution is kept to full length
    (sum_i c_i * (N_max // c_i)), so the entries sum to the product of the
    slot totals.
    """
    c = _check_coeffs(c)
    _need(sieve, N_max)
    w = WeightKind(w)
    if w is WeightKind.OMEGA and (r is None or len(r) != len(c)):
        raise InvalidArgument("OMEGA weight needs one Omega target per coefficient")
    slots = _weight_slots(sieve, N_max, c, w, r)
    limit = N_max if truncate else None
    values = convolve_many(slots, limit=limit, exact=w.is_integral)
    if truncate and values.size < N_max + 1:
        values = np.concatenate([values, np.zeros(N_max + 1 - values.size, dtype=values.dtype)])
    return BatchCounts(c, None if r is None else tuple(r), w, values)


def weighted_batch(sieve: FactorSieve, N_max: int, b: Sequence[int], w: WeightKind | str) -> np.ndarray:
    """Raw array of weighted representation sums for all N <= N_max."""
    return batch_counts(sieve, b, None, N_max, w).values


__all__ = [
    "BatchCounts",
    "CountMethod",
    "CountResult",
    "ProblemInstance",
    "batch_counts",
    "count_almost_prime",
    "count_prime_tuples",
    "denumerant_exact",
    "prime_product_multiplicity",
    "tuple_count_decomposition",
    "weighted_batch",
    "weighted_representation_sum",
]
