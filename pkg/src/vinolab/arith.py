"""Smallest-prime-factor sieve and the arithmetic functions built on it.

All logarithms are natural.  Scalar helpers (``factorize``, ``moebius``,
``totient``) use trial division and are meant for small moduli such as the
q <= Q range of the circle method; anything indexed by n up to a sieve limit
goes through :class:`FactorSieve`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import InvalidArgument, OutOfRange, ResourceLimit

DEFAULT_MEMORY_BUDGET = 200_000_000  # sieve entries


class WeightKind(str, enum.Enum):
    """Weight attached to each variable in sums and counts."""

    LAMBDA = "lambda"  # von Mangoldt
    THETA = "theta"  # log p on primes, 0 elsewhere
    PRIME = "prime"  # indicator of the primes
    OMEGA = "omega"  # indicator of Omega(n) == k

    @property
    def is_integral(self) -> bool:
        return self in (WeightKind.PRIME, WeightKind.OMEGA)


@dataclass(frozen=True)
class ArithProfile:
    n: int
    big_omega: int
    small_omega: int
    moebius: int
    totient: int
    von_mangoldt: float
    theta: float
    is_prime: bool


class FactorSieve:
    """Immutable smallest-prime-factor table for 0..limit.

    ``spf[n]`` is the least prime dividing n for n >= 2 (entries 0 and 1 are
    0).  The whole-range tables (Omega, omega, mu, phi, Lambda, theta) are
    computed lazily, once, and returned as read-only arrays.
    """

    def __init__(self, limit: int, spf: np.ndarray):
        self.limit = int(limit)
        spf.flags.writeable = False
        self._spf = spf

    def __repr__(self) -> str:
        return f"FactorSieve(limit={self.limit})"

    @property
    def spf(self) -> np.ndarray:
        return self._spf

    def _check(self, n: int) -> None:
        if n < 1:
            raise InvalidArgument(f"n must be positive, got {n}")
        if n > self.limit:
            raise OutOfRange(f"n={n} exceeds sieve limit {self.limit}")

    def factorize(self, n: int) -> dict[int, int]:
        self._check(n)
        out: dict[int, int] = {}
        spf = self._spf
        while n > 1:
            p = int(spf[n])
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return out

    @cached_property
    def _tables(self) -> dict[str, np.ndarray]:
        # One vectorized pass peeling off spf repeatedly; idx holds the
        # positions that still have a cofactor > 1.
        L = self.limit
        spf = self._spf.astype(np.int64)
        big = np.zeros(L + 1, dtype=np.int8)
        small = np.zeros(L + 1, dtype=np.int8)
        squarefree = np.ones(L + 1, dtype=bool)
        tot = np.arange(L + 1, dtype=np.int64)
        idx = np.arange(2, L + 1, dtype=np.int64)
        cur = idx.copy()
        last = np.zeros_like(idx)
        while idx.size:
            p = spf[cur]
            new = p != last
            big[idx] += 1
            small[idx[new]] += 1
            squarefree[idx[~new]] = False
            tn = idx[new]
            pn = p[new]
            tot[tn] = tot[tn] // pn * (pn - 1)
            cur = cur // p
            keep = cur > 1
            idx, cur, last = idx[keep], cur[keep], p[keep]
        mu = np.where(squarefree, 1 - 2 * (big.astype(np.int64) & 1), 0).astype(np.int8)
        mu[0] = 0
        tot[0] = 0
        is_prime = big == 1
        lam = np.zeros(L + 1, dtype=np.float64)
        pp = small == 1
        lam[pp] = np.log(spf[pp].astype(np.float64))
        theta = np.where(is_prime, lam, 0.0)
        tables = {
            "big_omega": big,
            "small_omega": small,
            "moebius": mu,
            "totient": tot,
            "is_prime": is_prime,
            "von_mangoldt": lam,
            "theta": theta,
        }
        for arr in tables.values():
            arr.flags.writeable = False
        return tables

    @property
    def big_omega(self) -> np.ndarray:
        return self._tables["big_omega"]

    @property
    def small_omega(self) -> np.ndarray:
        return self._tables["small_omega"]

    @property
    def moebius(self) -> np.ndarray:
        return self._tables["moebius"]

    @property
    def totient(self) -> np.ndarray:
        return self._tables["totient"]

    @property
    def is_prime(self) -> np.ndarray:
        return self._tables["is_prime"]

    @property
    def von_mangoldt(self) -> np.ndarray:
        return self._tables["von_mangoldt"]

    @property
    def theta(self) -> np.ndarray:
        return self._tables["theta"]

    @cached_property
    def primes(self) -> np.ndarray:
        idx = np.arange(self.limit + 1)
        p = idx[2:][self._spf[2:] == idx[2:]]
        p.flags.writeable = False
        return p

    def weights(self, kind: WeightKind, upto: int | None = None, k: int | None = None) -> np.ndarray:
        """Array w[0..upto] of the chosen weight (w[0] = 0).

        Integral kinds come back as int64, the log weights as float64.
        """
        upto = self.limit if upto is None else upto
        if upto > self.limit:
            raise OutOfRange(f"{upto} exceeds sieve limit {self.limit}")
        kind = WeightKind(kind)
        sl = slice(0, upto + 1)
        if kind is WeightKind.LAMBDA:
            return self.von_mangoldt[sl].copy()
        if kind is WeightKind.THETA:
            return self.theta[sl].copy()
        if kind is WeightKind.PRIME:
            return self.is_prime[sl].astype(np.int64)
        if k is None or k < 1:
            raise InvalidArgument("OMEGA weight needs k >= 1")
        return (self.big_omega[sl] == k).astype(np.int64)


def build_factor_sieve(limit: int, budget: int | None = None) -> FactorSieve:
    """Build the smallest-prime-factor table up to ``limit``.

    Raises InvalidArgument for limit < 2 and ResourceLimit when the table
    would be larger than ``budget`` entries (default DEFAULT_MEMORY_BUDGET).
    """
    limit = int(limit)
    if limit < 2:
        raise InvalidArgument(f"sieve limit must be >= 2, got {limit}")
    budget = DEFAULT_MEMORY_BUDGET if budget is None else budget
    if limit + 1 > budget:
        raise ResourceLimit(f"sieve of {limit + 1} entries exceeds budget of {budget}")
    spf = np.zeros(limit + 1, dtype=np.int32)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == 0:
            block = spf[p * p :: p]
            block[block == 0] = p
    idx = np.arange(limit + 1, dtype=np.int32)
    unmarked = spf == 0
    spf[unmarked] = idx[unmarked]
    spf[:2] = 0
    return FactorSieve(limit, spf)


def classify(sieve: FactorSieve, n: int) -> ArithProfile:
    """Profile of a single n <= sieve.limit, from its spf factorization."""
    fac = sieve.factorize(n)
    big = sum(fac.values())
    small = len(fac)
    mu = 0 if any(e > 1 for e in fac.values()) else (-1) ** small
    phi = 1
    for p, e in fac.items():
        phi *= (p - 1) * p ** (e - 1)
    lam = math.log(next(iter(fac))) if small == 1 else 0.0
    prime = big == 1
    return ArithProfile(
        n=n,
        big_omega=big,
        small_omega=small,
        moebius=mu,
        totient=phi,
        von_mangoldt=lam,
        theta=lam if prime else 0.0,
        is_prime=prime,
    )


def count_omega_equals(sieve: FactorSieve, x: int, k: int) -> int:
    """#{n <= x : Omega(n) = k}."""
    if x > sieve.limit:
        raise OutOfRange(f"x={x} exceeds sieve limit {sieve.limit}")
    if x < 1:
        return 0
    return int(np.count_nonzero(sieve.big_omega[1 : x + 1] == k))


# -- scalar helpers for small moduli --------------------------------------


@lru_cache(maxsize=4096)
def _factorize_cached(n: int) -> tuple[tuple[int, int], ...]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def factorize(n: int) -> dict[int, int]:
    if n < 1:
        raise InvalidArgument(f"cannot factor {n}")
    return dict(_factorize_cached(int(n)))


def moebius(n: int) -> int:
    fac = factorize(n)
    if any(e > 1 for e in fac.values()):
        return 0
    return (-1) ** len(fac)


def totient(n: int) -> int:
    phi = 1
    for p, e in factorize(n).items():
        phi *= (p - 1) * p ** (e - 1)
    return phi


def is_prime(n: int) -> bool:
    return n >= 2 and factorize(n) == {n: 1}


@lru_cache(maxsize=16)
def primes_upto(P: int) -> tuple[int, ...]:
    """All primes <= P, via a plain boolean sieve."""
    if P < 2:
        return ()
    flags = np.ones(P + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(P) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return tuple(int(p) for p in np.flatnonzero(flags))
