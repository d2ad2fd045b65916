"""The singular series of c_1 n_1 + ... + c_m n_m = N.

Two independent evaluations:

* ``singular_series_product``: the Euler product of local factors over
  primes p <= P (plus the finitely many larger primes dividing N * prod c_i),
  with a rigorous bound on the remaining tail.
* ``singular_series_partial``: the sum over moduli q <= Q of
  c_q(N) * prod_i mu(q_i) / phi(q_i), q_i = q / gcd(c_i, q), with a
  Rankin-type bound on the tail q > Q.

The local factor uses gcd(c_i, p) in {1, p}; the q-sum uses the full
gcd(c_i, q).  They agree because a term with q not squarefree always
vanishes when gcd(c) = 1.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce

from .arith import factorize, is_prime, moebius, primes_upto, totient
from .errors import InvalidArgument, Unsupported

DEFAULT_PRIME_CUTOFF = 100_000
DEFAULT_Q_CUTOFF = 2000
RANKIN_EPSILON = 0.5


class SeriesForm(str, enum.Enum):
    EULER_PRODUCT = "euler_product"
    Q_PARTIAL_SUM = "q_partial_sum"


@dataclass(frozen=True)
class SingularSeriesValue:
    value: float
    cutoff: int
    tail_bound: float
    form: SeriesForm


@dataclass(frozen=True)
class VanishingReport:
    vanishes: bool
    parity_ok: bool
    failing_gcd_index: int | None = None  # 1-based

    @property
    def reason(self) -> str | None:
        if not self.vanishes:
            return None
        return "parity" if not self.parity_ok else "gcd"


def _coeffs(c: Sequence[int]) -> tuple[int, ...]:
    c = tuple(int(x) for x in c)
    if not c or min(c) < 1:
        raise InvalidArgument(f"coefficients must be positive, got {c}")
    return c


def ramanujan_sum(q: int, N: int) -> int:
    """c_q(N) = sum over d | gcd(q, N) of d * mu(q / d)."""
    if q < 1:
        raise InvalidArgument(f"q must be positive, got {q}")
    g = math.gcd(q, N)
    total = 0
    for d in _divisors(g):
        total += d * moebius(q // d)
    return total


def _divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factorize(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def _slot_ratio(q: int, ci: int) -> Fraction:
    qi = q // math.gcd(ci, q)
    return Fraction(moebius(qi), totient(qi))


def local_factor(p: int, N: int, c: Sequence[int]) -> float:
    """Factor of the Euler product at the prime p."""
    if not is_prime(p):
        raise InvalidArgument(f"{p} is not prime")
    return float(_local_factor_exact(p, N, _coeffs(c)))


def _local_factor_exact(p: int, N: int, c: tuple[int, ...]) -> Fraction:
    # slots with p | c_i contribute mu(1)/phi(1) = 1, the rest -1/(p-1)
    k = sum(1 for ci in c if ci % p)
    prod = Fraction((-1) ** k, (p - 1) ** k)
    if N % p == 0:
        return 1 + prod * (p - 1)
    return 1 - prod


def _tail_log_bound(P: int, m: int) -> float:
    # sum_{j >= P} j^-m <= P^-m + P^(1-m)/(m-1); each tail factor is 1 - x
    # with |x| <= (p-1)^-m <= P^-m, so |log| <= |x| / (1 - P^-m)
    s = P ** (-m) + P ** (1 - m) / (m - 1)
    return s / (1 - P ** (-m))


def singular_series_product(N: int, c: Sequence[int], P: int = DEFAULT_PRIME_CUTOFF) -> SingularSeriesValue:
    """Euler product over p <= P, with a rigorous tail bound.

    Primes above P that divide N * prod(c) are multiplied in as well, so the
    only omitted factors are 1 - (-1)^m / (p - 1)^m for p > P, p not
    dividing N * prod(c).  Their product lies within exp(+-L) of 1 with
    L = (P^-m + P^(1-m) / (m - 1)) / (1 - P^-m), and the reported
    tail_bound is |value| * (exp(L) - 1).
    """
    c = _coeffs(c)
    m = len(c)
    if m < 3:
        raise Unsupported("tail bound requires m >= 3")
    if P < 2:
        raise InvalidArgument("prime cutoff must be >= 2")
    if N < 1:
        raise InvalidArgument("N must be positive")
    special = set(factorize(N)) | {p for ci in c for p in factorize(ci)}
    factors = []
    for p in primes_upto(P):
        if p in special:
            factors.append(float(_local_factor_exact(p, N, c)))
        else:
            # generic prime: exact rational, one correctly rounded division
            d = (p - 1) ** m
            factors.append((d - (-1) ** m) / d)
    for p in sorted(q for q in special if q > P):
        factors.append(float(_local_factor_exact(p, N, c)))
    value = math.prod(factors)
    tail = abs(value) * math.expm1(_tail_log_bound(P, m))
    return SingularSeriesValue(value, P, tail, SeriesForm.EULER_PRODUCT)


def _qsum_term_abs_at_prime(p: int, N: int, c: tuple[int, ...]) -> float:
    k = sum(1 for ci in c if ci % p)
    cq = p - 1 if N % p == 0 else 1
    return cq / (p - 1) ** k


def rankin_constant(N: int, c: Sequence[int], sigma: float) -> float:
    """prod_p (1 + p^sigma * t_p) where t_p bounds the q = p term.

    Only squarefree q contribute and |term_q| is multiplicative, so
    sum_{q > Q} |term_q| <= Q^-sigma * rankin_constant.  Needs sigma < m - 1.
    Generic primes beyond the explicit range are bounded by an integral.
    """
    c = _coeffs(c)
    m = len(c)
    if sigma >= m - 1:
        raise InvalidArgument("Rankin exponent must be below m - 1")
    special = set(factorize(N)) | {p for ci in c for p in factorize(ci)}
    L = 10_000
    log_c = 0.0
    for p in primes_upto(L):
        log_c += math.log1p(p**sigma * _qsum_term_abs_at_prime(p, N, c))
    for p in special:
        if p > L:
            log_c += math.log1p(p**sigma * _qsum_term_abs_at_prime(p, N, c))
    # generic p > L: p^sigma / (p-1)^m <= 2 * (p-1)^(sigma-m); sum over integers
    log_c += 2 * (L - 1) ** (sigma - m + 1) / (m - 1 - sigma)
    return math.exp(log_c)


@lru_cache(maxsize=64)
def _mu_phi_table(Q: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    return (
        tuple([0] + [moebius(q) for q in range(1, Q + 1)]),
        tuple([0] + [totient(q) for q in range(1, Q + 1)]),
    )


def singular_series_partial(
    N: int, c: Sequence[int], Q: int = DEFAULT_Q_CUTOFF, detect_vanishing: bool = True
) -> SingularSeriesValue:
    """Partial sum over q <= Q of c_q(N) prod_i mu(q_i)/phi(q_i).

    Each term is formed exactly as a Fraction and accumulated with fsum.
    The tail bound is Q^-(m-2-eps) times the Rankin constant with
    eps = 1/2; that constant is derived here, not taken from the
    literature.  For m = 2 the tail is reported as infinite.

    The summand is multiplicative in q, so for m >= 3 the full series is the
    product of (1 + term_p).  When ``detect_vanishing`` is set and some
    prime p <= Q has 1 + term_p = 0 exactly, the series is exactly 0 and
    that is what is returned (tail 0); the plain truncated sum would leave
    a residue from the q in (Q/p, Q] whose partner q*p lies beyond Q.
    """
    c = _coeffs(c)
    m = len(c)
    if Q < 1:
        raise InvalidArgument("Q must be >= 1")
    if detect_vanishing and m >= 3:
        for p in sorted(set(factorize(2 * N))):
            if p <= Q and _qsum_local_term(p, N, c) == -1:
                return SingularSeriesValue(0.0, Q, 0.0, SeriesForm.Q_PARTIAL_SUM)
    mu, phi = _mu_phi_table(Q)
    terms = []
    for q in range(1, Q + 1):
        if mu[q] == 0:
            continue  # non-squarefree q: some q_i is not squarefree either
        prod = Fraction(1)
        for ci in c:
            qi = q // math.gcd(ci, q)
            if mu[qi] == 0:
                prod = Fraction(0)
                break
            prod *= Fraction(mu[qi], phi[qi])
        if prod:
            terms.append(float(prod * ramanujan_sum(q, N)))
    value = math.fsum(terms)
    sigma = m - 2 - RANKIN_EPSILON
    if sigma <= 0:
        tail = math.inf
    else:
        tail = rankin_constant(N, c, sigma) * Q ** (-sigma)
    return SingularSeriesValue(value, Q, tail, SeriesForm.Q_PARTIAL_SUM)


def _qsum_local_term(p: int, N: int, c: tuple[int, ...]) -> Fraction:
    prod = Fraction(1)
    for ci in c:
        prod *= _slot_ratio(p, ci)
    return prod * ramanujan_sum(p, N)


def vanishing_criterion(N: int, c: Sequence[int]) -> VanishingReport:
    """Decide whether the singular series vanishes, from parity and gcds.

    Nonvanishing iff sum(c) + N is even and, for each i, replacing c_i by N
    leaves a tuple with gcd 1.  Requires gcd(c) = 1.
    """
    c = _coeffs(c)
    if reduce(math.gcd, c) != 1:
        raise InvalidArgument(f"gcd{c} != 1")
    parity_ok = (sum(c) + N) % 2 == 0
    failing = None
    for i in range(len(c)):
        if reduce(math.gcd, c[:i] + (N,) + c[i + 1 :]) != 1:
            failing = i + 1
            break
    return VanishingReport(vanishes=not (parity_ok and failing is None), parity_ok=parity_ok, failing_gcd_index=failing)


class SingularSeriesTable:
    """Euler-product values for many N sharing the same coefficients.

    The product over primes not dividing N is computed once; each N then
    only swaps in the factors at its own prime divisors.  Values agree with
    ``singular_series_product`` up to floating rounding.
    """

    def __init__(self, c: Sequence[int], P: int = DEFAULT_PRIME_CUTOFF):
        self.c = _coeffs(c)
        self.m = len(self.c)
        if self.m < 3:
            raise Unsupported("tail bound requires m >= 3")
        self.P = P
        self._c_primes = {p for ci in self.c for p in factorize(ci)}
        self._zero_primes = []  # primes whose factor vanishes unless they divide N
        base = []
        for p in primes_upto(P):
            f = self._not_dividing(p)
            if f == 0.0:
                self._zero_primes.append(p)
            else:
                base.append(f)
        self._base = math.prod(base)
        self._tail_L = _tail_log_bound(P, self.m)
        self._dividing_cache: dict[int, float] = {}

    def _dividing(self, p: int) -> float:
        f = self._dividing_cache.get(p)
        if f is None:
            f = self._dividing_cache[p] = float(_local_factor_exact(p, 0, self.c))
        return f

    def _not_dividing(self, p: int) -> float:
        if p in self._c_primes:
            return float(_local_factor_exact(p, 1, self.c))
        d = (p - 1) ** self.m
        return (d - (-1) ** self.m) / d

    def value(self, N: int) -> float:
        divs = set(factorize(N))
        v = self._base
        if any(p not in divs for p in self._zero_primes):
            return 0.0
        for p in sorted(divs):
            h = self._dividing(p)
            if p <= self.P:
                g = self._not_dividing(p)
                v = v * h if g == 0.0 else v * h / g
            else:
                v *= h
        for p in sorted(self._c_primes):
            if p > self.P and p not in divs:
                v *= self._not_dividing(p)
        return v

    def __call__(self, N: int) -> SingularSeriesValue:
        v = self.value(N)
        return SingularSeriesValue(v, self.P, abs(v) * math.expm1(self._tail_L), SeriesForm.EULER_PRODUCT)
