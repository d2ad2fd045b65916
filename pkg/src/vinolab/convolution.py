"""Linear convolution of nonnegative integer arrays (exact) and of real arrays.

Integer convolution is schoolbook below SCHOOLBOOK_MAX entries and a
number-theoretic transform otherwise: the product is computed modulo two or
three NTT-friendly primes and lifted back with the CRT.  The number of primes
is chosen from an a-priori bound on the result entries, so the lift is exact.

Real convolution goes through numpy's FFT.  Its absolute error per entry is
about eps * log2(n) * ||a||_2 * ||b||_2; for the Lambda/theta weights at
n ~ 1e6 that is below 1e-3 on values of order 1e11, far inside every
tolerance used here.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from functools import lru_cache

import numpy as np

from .errors import InvalidArgument, ResourceLimit

SCHOOLBOOK_MAX = 1 << 14

# (prime, primitive root, 2-adic valuation of p - 1)
NTT_PRIMES = (
    (998244353, 3, 23),
    (469762049, 3, 26),
    (167772161, 3, 25),
)
_I63 = (1 << 63) - 1


def thread_cap() -> int:
    """Parallelism cap from VLAB_THREADS (default: CPU count, at least 1)."""
    raw = os.environ.get("VLAB_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            pass
    return max(1, os.cpu_count() or 1)


@lru_cache(maxsize=64)
def _bitrev(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    rev = np.zeros(n, dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=256)
def _twiddles(p: int, g: int, h: int, inverse: bool) -> np.ndarray:
    # w^0..w^(h-1) for a primitive (2h)-th root of unity w mod p
    w = pow(g, (p - 1) // (2 * h), p)
    if inverse:
        w = pow(w, p - 2, p)
    tw = np.ones(h, dtype=np.uint64)
    filled, step = 1, w
    while filled < h:
        take = min(filled, h - filled)
        tw[filled : filled + take] = tw[:take] * np.uint64(step) % np.uint64(p)
        filled += take
        step = step * step % p
    return tw


def _ntt(a: np.ndarray, p: int, g: int, inverse: bool = False) -> np.ndarray:
    n = a.size
    a = a[_bitrev(n)]
    P = np.uint64(p)
    h = 1
    while h < n:
        blocks = a.reshape(n // (2 * h), 2, h)
        u = blocks[:, 0, :].copy()
        v = blocks[:, 1, :] * _twiddles(p, g, h, inverse) % P
        blocks[:, 0, :] = (u + v) % P
        blocks[:, 1, :] = (u + P - v) % P
        h *= 2
    if inverse:
        a = a * np.uint64(pow(n, p - 2, p)) % P
    return a


def _cyclic_mod(a: np.ndarray, b: np.ndarray, size: int, prime: tuple[int, int, int]) -> np.ndarray:
    p, g, v2 = prime
    if size > 1 << v2:
        raise ResourceLimit(f"transform length {size} too large for NTT prime {p}")
    fa = np.zeros(size, dtype=np.uint64)
    fb = np.zeros(size, dtype=np.uint64)
    fa[: a.size] = a % p
    fb[: b.size] = b % p
    return _ntt(_ntt(fa, p, g) * _ntt(fb, p, g) % np.uint64(p), p, g, inverse=True)


def _entry_bound(a: np.ndarray, b: np.ndarray) -> int:
    sa = sum(int(x) for x in np.asarray(a, dtype=object)) if a.dtype == object else int(a.sum(dtype=np.float64)) + 1
    sb = sum(int(x) for x in np.asarray(b, dtype=object)) if b.dtype == object else int(b.sum(dtype=np.float64)) + 1
    ma = int(max(a)) if a.size else 0
    mb = int(max(b)) if b.size else 0
    return min(ma * sb, mb * sa)


def _as_int_array(a) -> np.ndarray:
    a = np.asarray(a)
    if a.dtype == object:
        if any(int(x) < 0 for x in a):
            raise InvalidArgument("exact convolution needs nonnegative entries")
        if all(int(x) <= _I63 for x in a):
            return a.astype(np.int64)
        return a
    if not np.issubdtype(a.dtype, np.integer) and a.dtype != bool:
        raise InvalidArgument(f"exact convolution needs integer input, got {a.dtype}")
    a = a.astype(np.int64)
    if a.size and a.min() < 0:
        raise InvalidArgument("exact convolution needs nonnegative entries")
    return a


def exact_convolve(a, b, limit: int | None = None) -> np.ndarray:
    """Exact linear convolution of two nonnegative integer arrays.

    Entries beyond index ``limit`` are dropped (inputs are truncated first,
    which does not change the kept entries).  The result is int64 when every
    entry provably fits, otherwise an object array of Python ints.
    """
    a = _as_int_array(a)
    b = _as_int_array(b)
    if limit is not None:
        a, b = a[: limit + 1], b[: limit + 1]
    if a.size == 0 or b.size == 0:
        return np.zeros(0, dtype=np.int64)
    out_len = a.size + b.size - 1
    keep = out_len if limit is None else min(out_len, limit + 1)
    bound = _entry_bound(a, b)

    if min(a.size, b.size) <= SCHOOLBOOK_MAX or a.dtype == object or b.dtype == object:
        if bound <= _I63 and a.dtype != object and b.dtype != object:
            return np.convolve(a, b)[:keep]
        return np.convolve(a.astype(object), b.astype(object))[:keep]

    size = 1 << (out_len - 1).bit_length()
    # pick enough primes that their product exceeds every possible entry
    need, modulus = 0, 1
    while modulus <= bound:
        if need == len(NTT_PRIMES):
            raise ResourceLimit("convolution entries exceed the three-prime CRT range")
        modulus *= NTT_PRIMES[need][0]
        need += 1
    primes = NTT_PRIMES[:need]
    workers = min(thread_cap(), len(primes))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            residues = list(pool.map(lambda pr: _cyclic_mod(a, b, size, pr), primes))
    else:
        residues = [_cyclic_mod(a, b, size, pr) for pr in primes]
    residues = [r[:keep] for r in residues]
    return _crt(residues, [pr[0] for pr in primes])


def _crt(residues: list[np.ndarray], moduli: list[int]) -> np.ndarray:
    if len(moduli) == 1:
        return residues[0].astype(np.int64)
    p1, p2 = moduli[0], moduli[1]
    r1 = residues[0].astype(np.uint64)
    r2 = residues[1].astype(np.uint64)
    inv = np.uint64(pow(p1, -1, p2))
    P2 = np.uint64(p2)
    t = (r2 + P2 - r1 % P2) % P2 * inv % P2
    if len(moduli) == 2:
        return (r1 + t * np.uint64(p1)).astype(np.int64)
    # Garner's third step in Python ints
    x12 = [int(u) + int(v) * p1 for u, v in zip(r1, t)]
    p3 = moduli[2]
    m12 = p1 * p2
    inv3 = pow(m12, -1, p3)
    out = np.empty(len(x12), dtype=object)
    for i, (x, r3) in enumerate(zip(x12, residues[2])):
        out[i] = x + ((int(r3) - x) * inv3 % p3) * m12
    return out


def real_convolve(a, b, limit: int | None = None) -> np.ndarray:
    """Linear convolution of real arrays; FFT above SCHOOLBOOK_MAX entries."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if limit is not None:
        a, b = a[: limit + 1], b[: limit + 1]
    if a.size == 0 or b.size == 0:
        return np.zeros(0)
    out_len = a.size + b.size - 1
    keep = out_len if limit is None else min(out_len, limit + 1)
    if min(a.size, b.size) <= SCHOOLBOOK_MAX:
        return np.convolve(a, b)[:keep]
    size = 1 << (out_len - 1).bit_length()
    return np.fft.irfft(np.fft.rfft(a, size) * np.fft.rfft(b, size), size)[:keep]


def convolve_many(arrays, limit: int | None = None, exact: bool = True) -> np.ndarray:
    """Fold a sequence of arrays by repeated convolution (left to right)."""
    arrays = list(arrays)
    if not arrays:
        raise InvalidArgument("need at least one array")
    conv = exact_convolve if exact else real_convolve
    acc = _as_int_array(arrays[0]) if exact else np.asarray(arrays[0], dtype=np.float64)
    if limit is not None:
        acc = acc[: limit + 1]
    for arr in arrays[1:]:
        acc = conv(acc, arr, limit)
    return acc
