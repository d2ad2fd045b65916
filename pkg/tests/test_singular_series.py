import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from vinolab.errors import InvalidArgument, Unsupported
from vinolab.singular_series import (
    SingularSeriesTable,
    local_factor,
    ramanujan_sum,
    singular_series_partial,
    singular_series_product,
    vanishing_criterion,
)

# correct value of 2 * 3/4 * prod_{p >= 5} (1 + (p-1)^-3), both forms agree on it
SSERIES_9 = 1.5339743631

GRID3 = [(1, 1, 1), (1, 1, 2), (1, 2, 3), (2, 3, 5), (3, 3, 1), (1, 2, 2), (6, 10, 15), (2, 4, 3)]
GRID4 = [(1, 1, 1, 1), (1, 1, 1, 2), (2, 2, 3, 3), (2, 4, 6, 3)]


@pytest.mark.parametrize("q, N, expected", [(2, 5, -1), (4, 4, 2), (3, 1, -1)])
def test_ramanujan_examples(q, N, expected):
    assert ramanujan_sum(q, N) == expected


def test_ramanujan_direct_sum():
    for q in range(1, 201):
        for N in range(-200, 201, 7):
            assert ramanujan_sum(q, N) == oracles.ramanujan_direct(q, N)


def test_ramanujan_multiplicative():
    for q1 in range(1, 101):
        for q2 in range(1, 10_000 // q1 + 1):
            if math.gcd(q1, q2) != 1 or q2 > 100:
                continue
            for N in (1, 6, 30, 97, 210):
                assert ramanujan_sum(q1 * q2, N) == ramanujan_sum(q1, N) * ramanujan_sum(q2, N)


@pytest.mark.parametrize(
    "p, N, c, expected",
    [(2, 9, (1, 1, 1), 2.0), (2, 10, (1, 1, 1), 0.0), (3, 9, (1, 1, 1), 0.75), (3, 9, (3, 3, 1), 0.0)],
)
def test_local_factor_examples(p, N, c, expected):
    assert local_factor(p, N, c) == expected


def test_local_factor_rejects_composite():
    with pytest.raises(InvalidArgument):
        local_factor(4, 9, (1, 1, 1))


def test_product_examples():
    assert singular_series_product(10, (1, 1, 1), 2).value == 0
    assert singular_series_product(10, (1, 1, 1)).value == 0
    v = singular_series_product(9, (1, 1, 1), 100_000)
    assert v.value == pytest.approx(SSERIES_9, abs=1e-9)
    assert abs(singular_series_product(9, (1, 1, 1), 1000).value - v.value) < 1e-3
    with pytest.raises(Unsupported):
        singular_series_product(9, (1, 1), 100)


def test_product_matches_exact_fraction():
    for N, c in [(9, (1, 1, 1)), (35, (1, 2, 3)), (101, (2, 3, 5)), (60, (1, 1, 1, 1))]:
        exact = oracles.euler_product_exact(N, c, 200)
        assert singular_series_product(N, c, 200).value == pytest.approx(float(exact), rel=1e-13)


def test_tail_bound_contains_larger_cutoff():
    for N, c in [(9, (1, 1, 1)), (46, (1, 2, 3)), (77, (1, 1, 1, 2))]:
        coarse = singular_series_product(N, c, 100)
        fine = singular_series_product(N, c, 100_000)
        assert abs(coarse.value - fine.value) <= coarse.tail_bound
        assert fine.tail_bound < coarse.tail_bound


def test_tail_bound_decreasing():
    tails = [singular_series_product(9, (1, 1, 1), P).tail_bound for P in (10, 100, 1000, 10_000)]
    assert all(a > b > 0 for a, b in zip(tails, tails[1:]))


def test_partial_examples():
    assert singular_series_partial(17, (1, 2, 3), 1).value == 1
    assert singular_series_partial(9, (1, 1, 1), 2).value == 2
    assert singular_series_partial(10, (1, 1, 1), 2).value == 0
    assert singular_series_partial(10, (1, 1, 1), 2, detect_vanishing=False).value == 0


def test_partial_tail_infinite_for_m2():
    assert singular_series_partial(10, (1, 1), 50).tail_bound == math.inf


def test_two_forms_agree_within_tails():
    cases = [(N, (1, 1, 1)) for N in range(1, 102, 2)]
    cases += [(31, (1, 2, 3)), (60, (2, 3, 5)), (47, (1, 1, 1, 1)), (50, (1, 1, 1, 2)), (99, (2, 2, 3, 3))]
    for N, c in cases:
        prod = singular_series_product(N, c, 100_000)
        part = singular_series_partial(N, c, 2000)
        assert abs(prod.value - part.value) <= prod.tail_bound + part.tail_bound


def test_vanishing_examples():
    rep = vanishing_criterion(10, (1, 1, 1))
    assert rep.vanishes and rep.reason == "parity"
    assert not vanishing_criterion(9, (1, 1, 1)).vanishes
    rep = vanishing_criterion(9, (3, 3, 1))
    assert rep.vanishes and rep.failing_gcd_index == 3 and rep.reason == "gcd"
    assert not vanishing_criterion(12, (2, 3, 5)).vanishes
    with pytest.raises(InvalidArgument):
        vanishing_criterion(12, (2, 4, 6))


@pytest.mark.parametrize("c", GRID3 + GRID4)
def test_criterion_matches_local_factors(c):
    for N in range(3, 61):
        top = max(2, N, max(c))
        zero = any(local_factor(p, N, c) == 0 for p in range(2, top + 1) if oracles.is_prime(p))
        assert vanishing_criterion(N, c).vanishes == zero


def test_lower_bound_odd_N():
    table = SingularSeriesTable((1, 1, 1))
    assert min(table.value(N) for N in range(1, 10_001, 2)) >= 1.3


@pytest.mark.parametrize("c", GRID3 + GRID4)
def test_table_matches_direct_product(c):
    table = SingularSeriesTable(c, 10_000)
    for N in range(21, 400, 13):
        assert table.value(N) == pytest.approx(singular_series_product(N, c, 10_000).value, rel=1e-12, abs=1e-15)


@given(st.integers(1, 10**6))
@settings(max_examples=100, deadline=None)
def test_all_ones_local_factor_bound(N):
    # each |local factor| <= 1 + 1/phi(p)^(m-1) when c = (1, ..., 1)
    for m in (3, 4):
        for p in (2, 3, 5, 7, 11, 13):
            bound = float(1 + Fraction(1, (p - 1) ** (m - 1)))
            assert abs(local_factor(p, N, (1,) * m)) <= bound * (1 + 1e-15)
