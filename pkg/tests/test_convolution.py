import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vinolab.convolution import SCHOOLBOOK_MAX, convolve_many, exact_convolve, real_convolve, thread_cap
from vinolab.errors import InvalidArgument, ResourceLimit


def _reference(a, b):
    return np.convolve(np.asarray(a, dtype=object), np.asarray(b, dtype=object))


@pytest.mark.parametrize("scale", [1, 2**20, 2**30])
def test_ntt_matches_object_convolution(scale):
    rng = np.random.default_rng(scale)
    n = SCHOOLBOOK_MAX + 1234
    a = rng.integers(0, scale + 1, n)
    b = rng.integers(0, scale + 1, n + 77)
    got = exact_convolve(a, b)
    ref = _reference(a, b)
    assert len(got) == len(ref)
    assert all(int(x) == int(y) for x, y in zip(got, ref))


def test_limit_truncates():
    rng = np.random.default_rng(5)
    a = rng.integers(0, 2, 40_000)
    b = rng.integers(0, 2, 40_000)
    full = exact_convolve(a, b)
    cut = exact_convolve(a, b, limit=30_000)
    assert np.array_equal(cut, full[:30_001])


def test_three_prime_range_exceeded():
    a = np.full(SCHOOLBOOK_MAX + 10, 2**40, dtype=np.int64)
    with pytest.raises(ResourceLimit):
        exact_convolve(a, a)


def test_rejects_negative_and_float():
    with pytest.raises(InvalidArgument):
        exact_convolve([1, -1], [1])
    with pytest.raises(InvalidArgument):
        exact_convolve([1.5], [1])


@given(st.lists(st.integers(0, 10**6), min_size=1, max_size=60), st.lists(st.integers(0, 10**6), min_size=1, max_size=60))
@settings(max_examples=100, deadline=None)
def test_schoolbook_exact(a, b):
    assert [int(x) for x in exact_convolve(a, b)] == list(_reference(a, b))


def test_real_convolve_fft_path():
    rng = np.random.default_rng(9)
    a = rng.random(SCHOOLBOOK_MAX + 500)
    b = rng.random(SCHOOLBOOK_MAX + 100)
    np.testing.assert_allclose(real_convolve(a, b), np.convolve(a, b), rtol=1e-9, atol=1e-8)


def test_convolve_many():
    a, b, c = [1, 1], [1, 2], [0, 3]
    assert list(convolve_many([a, b, c])) == list(_reference(_reference(a, b), c))
    assert list(convolve_many([a, b, c], limit=1)) == [0, 3]
    with pytest.raises(InvalidArgument):
        convolve_many([])


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("VLAB_THREADS", "1")
    assert thread_cap() == 1
    monkeypatch.setenv("VLAB_THREADS", "junk")
    assert thread_cap() >= 1


def test_single_thread_same_result(monkeypatch):
    rng = np.random.default_rng(3)
    a = rng.integers(0, 2**25, SCHOOLBOOK_MAX + 7)
    parallel = exact_convolve(a, a)
    monkeypatch.setenv("VLAB_THREADS", "1")
    assert all(int(x) == int(y) for x, y in zip(parallel, exact_convolve(a, a)))
