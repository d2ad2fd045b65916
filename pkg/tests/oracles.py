"""Independent reference implementations used as test oracles.

Everything here is deliberately naive: trial division, nested loops and
direct exponential sums.  None of it touches the package internals.
"""

from __future__ import annotations

import cmath
import math
from fractions import Fraction
from itertools import product


def trial_factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def big_omega(n: int) -> int:
    return sum(trial_factor(n).values())


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def mobius(n: int) -> int:
    f = trial_factor(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def phi(n: int) -> int:
    return sum(1 for a in range(1, n + 1) if math.gcd(a, n) == 1)


def von_mangoldt(n: int) -> float:
    f = trial_factor(n)
    return math.log(next(iter(f))) if len(f) == 1 else 0.0


def theta_weight(n: int) -> float:
    return math.log(n) if is_prime(n) else 0.0


def ordered_prime_tuples(n: int, r: int) -> int:
    """Number of ordered r-tuples of primes with product n, by recursion."""
    if r == 0:
        return 1 if n == 1 else 0
    total = 0
    for p in trial_factor(n):
        total += ordered_prime_tuples(n // p, r - 1)
    return total


def brute_counts(c, r, N_max, tuples=False) -> list[int]:
    """Counts for every N <= N_max by enumerating all solutions of
    sum c_i n_i <= N_max with Omega(n_i) = r_i."""
    lists = []
    for ci, ri in zip(c, r):
        vals = [n for n in range(1, N_max // ci + 1) if big_omega(n) == ri]
        wts = [ordered_prime_tuples(n, ri) if tuples else 1 for n in vals]
        lists.append(list(zip(vals, wts)))
    counts = [0] * (N_max + 1)

    def rec(i, total, weight):
        if i == len(c):
            counts[total] += weight
            return
        for n, w in lists[i]:
            s = total + c[i] * n
            if s > N_max:
                break
            rec(i + 1, s, weight * w)

    rec(0, 0, 1)
    return counts


def brute_weighted(N, b, weight) -> float:
    """sum over b_1 n_1 + ... + b_m n_m = N of prod weight(n_i), nested loops."""
    total = 0.0
    ranges = [range(1, N // bi + 1) for bi in b[:-1]]
    for ns in product(*ranges):
        rest = N - sum(bi * n for bi, n in zip(b, ns))
        if rest <= 0 or rest % b[-1]:
            continue
        w = weight(rest // b[-1])
        for n in ns:
            if w == 0:
                break
            w *= weight(n)
        total += w
    return total


def ramanujan_direct(q: int, N: int) -> int:
    z = sum(cmath.exp(-2j * math.pi * a * N / q) for a in range(1, q + 1) if math.gcd(a, q) == 1)
    assert abs(z.imag) < 1e-9 * q
    v = round(z.real)
    assert abs(z.real - v) < 1e-9 * q
    return v


def euler_product_exact(N: int, c, P: int) -> Fraction:
    """prod over p <= P of 1 + c_p(N) prod_i mu(p_i)/phi(p_i), p_i = p/gcd(c_i, p)."""
    out = Fraction(1)
    for p in range(2, P + 1):
        if not is_prime(p):
            continue
        cp = p - 1 if N % p == 0 else -1
        term = Fraction(cp)
        for ci in c:
            if ci % p:
                term *= Fraction(-1, p - 1)
        out *= 1 + term
    return out


def brute_denumerant(N: int, b) -> int:
    count = 0
    for ns in product(*[range(1, N // bi + 1) for bi in b[:-1]]):
        rest = N - sum(bi * n for bi, n in zip(b, ns))
        if rest > 0 and rest % b[-1] == 0:
            count += 1
    return count


def direct_exp_sum(x: int, alpha: float, weight) -> complex:
    return sum(weight(n) * cmath.exp(2j * math.pi * n * alpha) for n in range(1, x + 1))
