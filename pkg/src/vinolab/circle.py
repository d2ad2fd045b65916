"""Exponential sums, arcs and Vaughan's identity.

Conventions: e(x) = exp(2 pi i x); alpha is read modulo 1; sums over n <= x
include every integer 1 <= n <= floor(x).  Long sums are accumulated with
math.fsum on the real and imaginary parts separately.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .arith import FactorSieve, WeightKind, moebius, totient
from .errors import InvalidArgument, OutOfRange, ResourceLimit

TWO_PI = 2.0 * math.pi
MAX_GRID = 1 << 26

# implied constants of the minor-arc bounds, chosen here (not given in the literature)
MIN_SUM_CONSTANT = 1.0
MINOR_ARC_CONSTANT = 1.0


def _fsum_complex(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real), math.fsum(z.imag))


def _phases(n: np.ndarray, alpha) -> np.ndarray:
    """e(n * alpha) with the product reduced mod 1 before scaling by 2 pi."""
    if isinstance(alpha, Fraction):
        num, den = alpha.numerator, alpha.denominator
        frac = (n % den) * num % den / den
    else:
        frac = np.mod(n * float(alpha), 1.0)
    return np.exp(1j * TWO_PI * frac)


def dist_to_int(x: float) -> float:
    """||x||, distance to the nearest integer."""
    return abs(x - round(x))


# -- arcs ------------------------------------------------------------------


@dataclass(frozen=True)
class ArcConfig:
    N: int
    B: float

    def __post_init__(self):
        if self.N < 3:
            raise InvalidArgument("N must be >= 3 so that log N > 1")
        if self.B <= 0:
            raise InvalidArgument("B must be positive")

    @property
    def Q(self) -> float:
        return math.log(self.N) ** self.B

    @property
    def width(self) -> float:
        """Half-width Q/N of each major arc."""
        return self.Q / self.N

    @property
    def nondegenerate(self) -> bool:
        return 1 <= self.Q < self.N / 2


class ArcKind(str, enum.Enum):
    MAJOR = "major"
    MINOR = "minor"


@dataclass(frozen=True)
class ArcLabel:
    kind: ArcKind
    a: int | None = None
    q: int | None = None
    y: float | None = None  # alpha - a/q, taken in (-1/2, 1/2]


class ArcPartition:
    """Major arcs M(a, q) = {alpha : ||alpha - a/q|| <= Q/N}, q <= Q, (a, q) = 1.

    Residues a run over 1..q as in the usual definition, so alpha = 0 is
    labelled (1, 1).
    """

    def __init__(self, cfg: ArcConfig):
        if not cfg.nondegenerate:
            raise InvalidArgument(f"degenerate arc system: Q={cfg.Q:.4g} must satisfy 1 <= Q < N/2")
        self.cfg = cfg
        self.qmax = int(math.floor(cfg.Q))

    def classify(self, alpha: float) -> ArcLabel:
        x = float(alpha) % 1.0
        width = self.cfg.width
        for q in range(1, self.qmax + 1):
            base = math.floor(x * q)
            # candidates a/q around x, smaller a first for ties
            best = None
            for a in (base, base + 1):
                d = dist_to_int(x - a / q)
                if best is None or d < best[0]:
                    best = (d, a)
            d, a = best
            a_mod = a % q or q
            if math.gcd(a_mod, q) != 1:
                continue  # a/q reduces to a smaller q already scanned
            if d <= width:
                y = x - a / q
                y -= round(y)
                return ArcLabel(ArcKind.MAJOR, a_mod, q, y)
        return ArcLabel(ArcKind.MINOR)

    def centers(self) -> list[tuple[int, int]]:
        return [(a, q) for q in range(1, self.qmax + 1) for a in range(1, q + 1) if math.gcd(a, q) == 1]

    def measure(self) -> float:
        """Lebesgue measure of the union of the major arcs on R/Z."""
        w = self.cfg.width
        intervals = []
        for a, q in self.centers():
            c = (a / q) % 1.0
            lo, hi = c - w, c + w
            if lo < 0:
                intervals += [(0.0, hi), (1.0 + lo, 1.0)]
            elif hi > 1:
                intervals += [(lo, 1.0), (0.0, hi - 1.0)]
            else:
                intervals.append((lo, hi))
        intervals.sort()
        total, cur_lo, cur_hi = 0.0, None, None
        for lo, hi in intervals:
            lo, hi = max(lo, 0.0), min(hi, 1.0)
            if cur_hi is None or lo > cur_hi:
                if cur_hi is not None:
                    total += cur_hi - cur_lo
                cur_lo, cur_hi = lo, hi
            else:
                cur_hi = max(cur_hi, hi)
        if cur_hi is not None:
            total += cur_hi - cur_lo
        return min(total, 1.0)

    def union_bound(self) -> float:
        Q = self.cfg.Q
        return 2 * Q**3 / self.cfg.N


def classify_alpha(alpha: float, cfg: ArcConfig) -> ArcLabel:
    """Major (with its a, q, offset) or minor; smallest q wins, then smallest a."""
    return ArcPartition(cfg).classify(alpha)


def dirichlet_approximation(alpha: float, qmax: int) -> tuple[int, int]:
    """(a, q) with q <= qmax, gcd(a, q) = 1 and |alpha - a/q| < 1/(q * qmax).

    Last continued-fraction convergent of alpha with denominator <= qmax.
    """
    if qmax < 1:
        raise InvalidArgument("qmax must be >= 1")
    x = Fraction(alpha)
    h0, h1, k0, k1 = 0, 1, 1, 0
    while True:
        a = math.floor(x)
        h0, h1 = h1, a * h1 + h0
        k0, k1 = k1, a * k1 + k0
        if k1 > qmax:
            return h0, k0
        frac = x - a
        if frac == 0:
            return h1, k1
        x = 1 / frac


# -- kernels and sums ------------------------------------------------------


def dirichlet_kernel(N: int, b: int, y: float) -> complex:
    """u_b(y) = sum_{n <= N/b} e(n b y), in closed form."""
    if b < 1:
        raise InvalidArgument("b must be positive")
    M = N // b
    t = b * y
    if dist_to_int(t) == 0.0:
        return complex(M)
    t = t - round(t)
    # e((M+1) t / 2) * sin(pi M t) / sin(pi t)
    if abs(t) * M < 1e-4:
        # the sine ratio underflows for tiny t; its series is exact to ~1e-16 here
        ratio = M * (1 - (math.pi * t) ** 2 * (M * M - 1) / 6)
    else:
        ratio = math.sin(math.pi * M * t) / math.sin(math.pi * t)
    return complex(np.exp(1j * math.pi * (M + 1) * t) * ratio)


def _weight_upto(sieve: FactorSieve, w: WeightKind, M: int, k: int | None) -> np.ndarray:
    if M > sieve.limit:
        raise OutOfRange(f"{M} exceeds sieve limit {sieve.limit}")
    return sieve.weights(w, upto=M, k=k).astype(np.float64)


def exp_sum(sieve: FactorSieve, x: float, alpha, w: WeightKind | str = WeightKind.LAMBDA, b: int = 1, k: int | None = None) -> complex:
    """sum_{n <= x/b} w(n) e(n b alpha).

    With b = 1 this is S(x, alpha); with b > 1 it is S(x/b, b alpha), the
    sum attached to coefficient b.  ``alpha`` may be a Fraction for exact
    rational phases.
    """
    if b < 1:
        raise InvalidArgument("b must be positive")
    if x > sieve.limit:
        raise OutOfRange(f"x={x} exceeds sieve limit {sieve.limit}")
    M = int(math.floor(x / b))
    if M < 1:
        return 0j
    w = WeightKind(w)
    weights = _weight_upto(sieve, w, M, k)[1:]
    n = np.arange(1, M + 1, dtype=np.int64)
    nz = weights != 0
    step = alpha * b if isinstance(alpha, Fraction) else float(alpha) * b
    return _fsum_complex(weights[nz] * _phases(n[nz], step))


def major_arc_main_term(N: int, a: int, q: int, y: float, b: int = 1) -> complex:
    """mu(q')/phi(q') * u_b(y) with q' = q / gcd(b, q)."""
    if q < 1:
        raise InvalidArgument("q must be positive")
    if math.gcd(a, q) != 1:
        raise InvalidArgument(f"gcd({a}, {q}) != 1")
    qq = q // math.gcd(b, q)
    return moebius(qq) / totient(qq) * dirichlet_kernel(N, b, y)


# -- Vaughan ---------------------------------------------------------------


@dataclass(frozen=True)
class VaughanPieces:
    s_i1: complex
    s_i2: complex
    s_ii: complex
    s_0: complex
    U: float
    V: float

    @property
    def reconstruction(self) -> complex:
        return self.s_i1 - self.s_i2 - self.s_ii + self.s_0


def default_vaughan_parameter(x: float, b: int = 1) -> float:
    return (x / b) ** 0.4


def vaughan_decompose(
    sieve: FactorSieve, x: float, alpha: float, U: float | None = None, V: float | None = None, b: int = 1
) -> VaughanPieces:
    """The four sums of Vaughan's identity, each evaluated from its definition.

    S = S_I1 - S_I2 - S_II + S_0 with
      S_I1 = sum_{d <= U} mu(d) sum_{n <= x/d} log n e(n d alpha)
      S_I2 = sum_{d <= V} Lambda(d) sum_{delta <= U} mu(delta) sum_{n <= x/(d delta)} e(n d delta alpha)
      S_II = sum_{d > U} (sum_{delta <= U, delta | d} mu(delta)) sum_{n > V, nd <= x} Lambda(n) e(n d alpha)
      S_0  = sum_{n <= V} Lambda(n) e(n alpha)
    With b > 1 the identity is applied to x/b and b*alpha.  U and V default
    to (x/b)^(2/5).
    """
    if b < 1:
        raise InvalidArgument("b must be positive")
    X = x / b
    a = float(alpha) * b
    U = default_vaughan_parameter(x, b) if U is None else U
    V = default_vaughan_parameter(x, b) if V is None else V
    if U < 2 or V < 2:
        raise InvalidArgument(f"U and V must be >= 2 (got U={U}, V={V})")
    if X > sieve.limit:
        raise OutOfRange(f"x/b={X} exceeds sieve limit {sieve.limit}")
    Xi = int(math.floor(X))
    Ui, Vi = int(math.floor(U)), int(math.floor(V))
    mu = sieve.moebius
    lam = sieve.von_mangoldt
    logs = np.log(np.arange(1, Xi + 1, dtype=np.float64))
    n_all = np.arange(1, Xi + 1, dtype=np.int64)

    parts = []
    for d in range(1, min(Ui, Xi) + 1):
        if mu[d]:
            top = Xi // d
            parts.append(int(mu[d]) * _fsum_complex(logs[:top] * _phases(n_all[:top], d * a)))
    s_i1 = _csum(parts)

    parts = []
    for d in range(1, min(Vi, Xi) + 1):
        if lam[d] == 0:
            continue
        for delta in range(1, min(Ui, Xi // d) + 1):
            if mu[delta]:
                top = Xi // (d * delta)
                if top:
                    parts.append(lam[d] * int(mu[delta]) * _fsum_complex(_phases(n_all[:top], d * delta * a)))
    s_i2 = _csum(parts)

    # divisor-restricted Moebius sum for every d <= X / V
    dmax = Xi // (Vi + 1) if Vi + 1 <= Xi else 0
    coef = np.zeros(dmax + 1, dtype=np.int64)
    for delta in range(1, min(Ui, dmax) + 1):
        if mu[delta]:
            coef[delta::delta] += int(mu[delta])
    parts = []
    for d in range(Ui + 1, dmax + 1):
        if coef[d] == 0:
            continue
        top = Xi // d
        n = n_all[Vi:top]
        wts = lam[Vi + 1 : top + 1]
        nz = wts != 0
        if nz.any():
            parts.append(int(coef[d]) * _fsum_complex(wts[nz] * _phases(n[nz] * d, a)))
    s_ii = _csum(parts)

    top = min(Vi, Xi)
    wts = lam[1 : top + 1]
    s_0 = _fsum_complex(wts * _phases(n_all[:top], a))
    return VaughanPieces(s_i1, s_i2, s_ii, s_0, float(U), float(V))


def _csum(values) -> complex:
    return complex(math.fsum(v.real for v in values), math.fsum(v.imag for v in values))


@dataclass(frozen=True)
class MinSumBound:
    lhs: float
    rhs_bound: float
    constant: float = MIN_SUM_CONSTANT


def vaughan_min_sum(X: float, Y: float, alpha: float, a: int, q: int) -> MinSumBound:
    """sum_{n <= X} min(XY/n, 1/||n alpha||) against (XY/q + X + q) log(2Xq).

    The reported bound carries the implied constant MIN_SUM_CONSTANT = 1,
    an artifact choice.
    """
    if X < 1 or Y < 1:
        raise InvalidArgument("X, Y must be >= 1")
    if q < 1 or math.gcd(a, q) != 1:
        raise InvalidArgument(f"need q >= 1 and gcd(a, q) = 1, got a={a}, q={q}")
    if abs(Fraction(alpha) - Fraction(a, q)) > Fraction(1, q * q):
        raise InvalidArgument("|alpha - a/q| must be <= 1/q^2")
    n = np.arange(1, int(math.floor(X)) + 1, dtype=np.float64)
    dist = np.abs(np.mod(n * alpha + 0.5, 1.0) - 0.5)
    with np.errstate(divide="ignore"):
        inv = np.where(dist > 0, 1.0 / dist, np.inf)
    lhs = math.fsum(np.minimum(X * Y / n, inv))
    rhs = MIN_SUM_CONSTANT * (X * Y / q + X + q) * math.log(2 * X * q)
    return MinSumBound(lhs, rhs)


def minor_arc_bound(N: int, q: int) -> float:
    """(log N)^4 (N / sqrt q + N^(4/5) + sqrt(N q)) with implied constant 1."""
    if not 1 <= q <= N:
        raise InvalidArgument("need 1 <= q <= N")
    return MINOR_ARC_CONSTANT * math.log(N) ** 4 * (N / math.sqrt(q) + N**0.8 + math.sqrt(N * q))


# -- discrete circle integral ---------------------------------------------


def circle_integral(slots: Sequence[np.ndarray], N: int, grid: int | None = None) -> complex:
    """(1/M) sum_t prod_i F_i(t/M) e(-N t/M) for generating arrays F_i.

    F_i(alpha) = sum_k slots[i][k] e(k alpha).  When M exceeds the largest
    attainable index sum, the grid average isolates exactly the coefficient
    of e(N alpha), i.e. the number (or weight) of representations.
    """
    slots = [np.asarray(s, dtype=np.float64) for s in slots]
    M = grid if grid is not None else sum(s.size - 1 for s in slots) + 1
    if M > MAX_GRID:
        raise ResourceLimit(f"grid of {M} points too large")
    prod = np.ones(M, dtype=np.complex128)
    for s in slots:
        # M * ifft(s) = sum_k s[k] e(k t / M)
        prod *= np.fft.ifft(s, M) * M
    t = np.arange(M)
    return complex(np.sum(prod * np.exp(-1j * TWO_PI * ((N * t) % M) / M)) / M)


def fourier_count(sieve: FactorSieve, N: int, b: Sequence[int], w: WeightKind | str, r: Sequence[int] | None = None):
    """Representation count/weight via the discrete circle integral.

    Uses the grid M = m N + 1 and the sums S_i(N, t/M) = sum_{n <= N/b_i}
    w(n) e(n b_i t / M).  Integer weights are rounded to an exact int.
    """
    b = tuple(int(x) for x in b)
    if not b or min(b) < 1:
        raise InvalidArgument("coefficients must be positive")
    if N > sieve.limit:
        raise OutOfRange(f"N={N} exceeds sieve limit {sieve.limit}")
    w = WeightKind(w)
    m = len(b)
    slots = []
    for i, bi in enumerate(b):
        top = N // bi
        k = r[i] if (w is WeightKind.OMEGA and r is not None) else None
        vals = sieve.weights(w, upto=max(top, 1), k=k).astype(np.float64)
        arr = np.zeros(N + 1)
        arr[bi : bi * top + 1 : bi] = vals[1 : top + 1]
        slots.append(arr)
    value = circle_integral(slots, N, grid=m * N + 1)
    if w.is_integral:
        return int(round(value.real))
    return value.real
