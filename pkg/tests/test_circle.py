import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from vinolab.arith import WeightKind, build_factor_sieve
from vinolab.circle import (
    ArcConfig,
    ArcKind,
    ArcPartition,
    classify_alpha,
    default_vaughan_parameter,
    dirichlet_approximation,
    dirichlet_kernel,
    exp_sum,
    fourier_count,
    major_arc_main_term,
    minor_arc_bound,
    vaughan_decompose,
    vaughan_min_sum,
)
from vinolab.counting import weighted_representation_sum
from vinolab.errors import InvalidArgument, OutOfRange

SIEVE = build_factor_sieve(20_000)


def test_arc_examples():
    cfg = ArcConfig(10**6, 1.0)
    lab = classify_alpha(0.0, cfg)
    assert lab.kind is ArcKind.MAJOR and (lab.a, lab.q) == (1, 1)
    lab = classify_alpha(0.5, cfg)
    assert lab.kind is ArcKind.MAJOR and (lab.a, lab.q) == (1, 2)
    assert classify_alpha(0.6180339887, cfg).kind is ArcKind.MINOR


def test_golden_ratio_far_from_small_denominators():
    alpha = 0.6180339887
    cfg = ArcConfig(10**6, 1.0)
    d = min(abs(alpha - a / q) for q in range(1, 14) for a in range(q + 1))
    assert d > cfg.width


def test_degenerate_arcs_rejected():
    with pytest.raises(InvalidArgument):
        ArcPartition(ArcConfig(10**6, 14.0))
    with pytest.raises(InvalidArgument):
        ArcConfig(2, 1.0)


@pytest.mark.parametrize("N, B", [(10**5, 1.0), (10**6, 1.5), (10**7, 2.0)])
def test_arc_partition_sanity(N, B):
    part = ArcPartition(ArcConfig(N, B))
    for a, q in part.centers():
        lab = part.classify(a / q)
        assert lab.kind is ArcKind.MAJOR and lab.q <= q
    assert part.measure() <= part.union_bound()


def test_dirichlet_approximation():
    for alpha in (math.pi - 3, 0.6180339887, 1 / 3 + 1e-6, 0.123456):
        for qmax in (5, 50, 1000):
            a, q = dirichlet_approximation(alpha, qmax)
            assert 1 <= q <= qmax and math.gcd(a, q) == 1
            assert abs(alpha - a / q) < 1 / (q * qmax)


def test_kernel_examples():
    assert dirichlet_kernel(1000, 1, 0.0) == 1000
    assert abs(dirichlet_kernel(100, 1, 0.25)) < 1e-12


@given(st.floats(-2, 2, allow_nan=False), st.integers(1, 5), st.integers(1, 3000))
@settings(max_examples=200, deadline=None)
def test_kernel_closed_form_and_bound(y, b, N):
    direct = sum(cmath.exp(2j * math.pi * n * b * y) for n in range(1, N // b + 1))
    got = dirichlet_kernel(N, b, y)
    assert abs(got - direct) <= 1e-8 * max(1, N)
    d = oracles_dist(b * y)
    bound = N // b if d == 0 else min(N // b, 1 / (2 * d))
    assert abs(got) <= bound * (1 + 1e-9) + 1e-9


def oracles_dist(x):
    return abs(x - round(x))


def test_exp_sum_examples():
    assert exp_sum(SIEVE, 10, 0.0, WeightKind.LAMBDA).real == pytest.approx(3 * math.log(2) + 2 * math.log(3) + math.log(5) + math.log(7))
    assert exp_sum(SIEVE, 10, 0.0, WeightKind.THETA).real == pytest.approx(math.log(210))
    with pytest.raises(OutOfRange):
        exp_sum(SIEVE, SIEVE.limit + 1, 0.1)


@given(st.floats(0, 1, allow_nan=False))
@settings(max_examples=50, deadline=None)
def test_exp_sum_coefficient_identity(alpha):
    a = exp_sum(SIEVE, 20, alpha, WeightKind.LAMBDA, b=2)
    b = exp_sum(SIEVE, 10, 2 * alpha, WeightKind.LAMBDA, b=1)
    assert abs(a - b) < 1e-12


def test_exp_sum_direct():
    for alpha in (0.1, 0.37, Fraction(2, 7)):
        for w, f in ((WeightKind.LAMBDA, oracles.von_mangoldt), (WeightKind.THETA, oracles.theta_weight)):
            assert abs(exp_sum(SIEVE, 500, alpha, w) - oracles.direct_exp_sum(500, float(alpha), f)) < 1e-9


def test_major_arc_examples():
    N = 10**6
    assert major_arc_main_term(N, 1, 1, 0.0) == N
    assert major_arc_main_term(N, 1, 4, 0.0) == 0
    assert major_arc_main_term(N, 1, 3, 0.0).real == pytest.approx(-N / 2)
    with pytest.raises(InvalidArgument):
        major_arc_main_term(N, 2, 4, 0.0)


def test_psi_close_to_x(sieve_1m):
    N = 10**6
    assert abs(exp_sum(sieve_1m, N, 0.0).real - N) / N < 1e-3
    assert abs(exp_sum(sieve_1m, N, Fraction(1, 4))) < 0.01 * N


def test_vaughan_examples():
    for x, alpha, U, V in [(100, 0.3, 5, 5), (30, 1 / 7, 2, 2)]:
        pieces = vaughan_decompose(SIEVE, x, alpha, U, V)
        direct = exp_sum(SIEVE, x, alpha)
        assert abs(pieces.reconstruction - direct) <= 1e-9 * abs(direct) + 1e-12
    with pytest.raises(InvalidArgument):
        vaughan_decompose(SIEVE, 100, 0.3, 1.5, 5)


def test_vaughan_default_parameters():
    pieces = vaughan_decompose(SIEVE, 5000, 0.2, b=2)
    assert pieces.U == pieces.V == pytest.approx(2500**0.4)
    assert default_vaughan_parameter(10**5) == pytest.approx(10**2)
    assert abs(pieces.reconstruction - exp_sum(SIEVE, 5000, 0.2, b=2)) < 1e-9 * 5000


def test_min_sum_examples():
    res = vaughan_min_sum(10, 10, 3.0, 3, 1)
    assert res.lhs == pytest.approx(100 * sum(1 / n for n in range(1, 11)))
    res = vaughan_min_sum(100, 100, 1 / 3 + 1e-6, 1, 3)
    assert res.lhs <= 10 * res.rhs_bound
    with pytest.raises(InvalidArgument):
        vaughan_min_sum(100, 100, 0.5, 1, 3)


def test_minor_arc_envelope(sieve_1m):
    N = 10**5
    cfg = ArcConfig(N, 1.0)
    rng = np.random.default_rng(11)
    for alpha in rng.random(20):
        if classify_alpha(alpha, cfg).kind is ArcKind.MINOR:
            a, q = dirichlet_approximation(alpha, int(N / cfg.Q))
            assert abs(exp_sum(sieve_1m, N, alpha)) <= minor_arc_bound(N, q)


@pytest.mark.parametrize("N, b, w, expected", [(9, (1, 1, 1), "prime", 4), (4, (1, 1, 1), "prime", 0)])
def test_fourier_count_examples(N, b, w, expected):
    assert fourier_count(SIEVE, N, b, w) == expected


def test_fourier_count_lambda_example():
    assert fourier_count(SIEVE, 6, (1, 1, 1), "lambda") == pytest.approx(math.log(2) ** 3, abs=1e-9)


@given(st.integers(1, 300), st.sampled_from([(1, 1, 1), (1, 2, 3), (2, 3, 5, 1)]))
@settings(max_examples=60, deadline=None)
def test_fourier_matches_convolution(N, b):
    assert fourier_count(SIEVE, N, b, "prime") == weighted_representation_sum(SIEVE, N, b, "prime")
    assert abs(fourier_count(SIEVE, N, b, "theta") - weighted_representation_sum(SIEVE, N, b, "theta")) < 1e-6
