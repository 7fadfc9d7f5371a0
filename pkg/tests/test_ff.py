import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strictpoly import ff


def mats(p, max_side=5):
    return st.tuples(st.integers(1, max_side), st.integers(1, max_side)).flatmap(
        lambda rc: st.lists(st.integers(0, p - 1), min_size=rc[0] * rc[1], max_size=rc[0] * rc[1]).map(
            lambda xs: np.array(xs, dtype=np.int64).reshape(rc)))


def test_rank_identity_and_zero():
    assert ff.rank(ff.identity(3), 3) == 3
    r, piv = ff.rref(ff.identity(3), 3)
    assert np.array_equal(r, ff.identity(3)) and piv == [0, 1, 2]
    assert ff.rank(ff.zeros(2, 4), 3) == 0


def test_rank_dependent_rows():
    assert ff.rank([[1, 2], [2, 4]], 5) == 1


def test_kernel_examples():
    assert ff.kernel(ff.identity(3), 3).shape[1] == 0
    assert ff.kernel(ff.zeros(2, 3), 3).shape[1] == 3
    k = ff.kernel([[1, 2], [2, 4]], 5)
    assert k.shape[1] == 1
    assert not np.any(ff.matmul(np.array([[1, 2], [2, 4]]), k, 5))


def test_solve_examples():
    b = np.array([[1, 2], [0, 1]])
    assert np.array_equal(ff.solve(ff.identity(2), b, 7), b)
    assert ff.solve(ff.zeros(2, 2), np.array([[1], [0]]), 5) is None
    assert np.array_equal(ff.solve([[2]], [[1]], 5), [[3]])


def test_kron_examples():
    a = np.array([[1, 2], [0, 1]])
    assert np.array_equal(ff.kron(a, ff.identity(1), 5), a)
    assert np.array_equal(ff.kron(ff.identity(2), ff.identity(3), 5), ff.identity(6))


def test_rejects_nonprime():
    with pytest.raises(ValueError):
        ff.check_prime(4)


@settings(max_examples=40, deadline=None)
@given(mats(3), mats(3))
def test_rank_of_kron_multiplies(a, b):
    assert ff.rank(ff.kron(a, b, 3), 3) == ff.rank(a, 3) * ff.rank(b, 3)


@settings(max_examples=40, deadline=None)
@given(mats(5))
def test_rank_nullity(a):
    assert ff.rank(a, 5) + ff.kernel(a, 5).shape[1] == a.shape[1]
    assert not np.any(ff.matmul(a, ff.kernel(a, 5), 5))


@settings(max_examples=30, deadline=None)
@given(mats(7, 4))
def test_solve_consistent_systems(a):
    x = np.arange(a.shape[1] * 2, dtype=np.int64).reshape(a.shape[1], 2) % 7
    b = ff.matmul(a, x, 7)
    y = ff.solve(a, b, 7)
    assert y is not None and np.array_equal(ff.matmul(a, y, 7), b)


def test_inverse_roundtrip(rng):
    while True:
        a = rng.integers(0, 5, size=(4, 4))
        if ff.is_invertible(a, 5):
            break
    assert np.array_equal(ff.matmul(a, ff.inverse(a, 5), 5), ff.identity(4))


def _span(basis, p):
    vecs = set()
    for coeffs in itertools.product(range(p), repeat=basis.shape[1]):
        vecs.add(tuple(int(x) for x in (basis @ np.array(coeffs, dtype=np.int64)) % p))
    return vecs


def test_meet_join_trivial_cases():
    u = ff.identity(3)[:, :2]
    meet, join = ff.meet_join(u, u, 3)
    assert meet.shape[1] == join.shape[1] == 2
    w = ff.identity(3)[:, 2:]
    meet, join = ff.meet_join(u, w, 3)
    assert meet.shape[1] == 0 and join.shape[1] == 3


def test_meet_join_brute_force(rng):
    p = 3
    for _ in range(10):
        u = rng.integers(0, p, size=(3, 2))
        w = rng.integers(0, p, size=(3, 2))
        meet, join = ff.meet_join(u, w, p)
        su, sw = _span(u, p), _span(w, p)
        assert _span(meet, p) == su & sw
        assert len(_span(join, p)) == len(su) * len(sw) // len(su & sw)
        assert meet.shape[1] + join.shape[1] == ff.rank(u, p) + ff.rank(w, p)


def test_binary_roundtrip(rng):
    ms = [rng.integers(0, 7, size=(3, 4)), ff.zeros(0, 2), ff.identity(5)]
    out, p = ff.loads(ff.dumps(ms, 7))
    assert p == 7
    assert all(np.array_equal(a, b) for a, b in zip(ms, out))


def test_large_matmul_exact():
    p = 2**31 - 1
    a = np.full((3, 3), p - 1, dtype=np.int64)
    assert np.array_equal(ff.matmul(a, a, p), np.full((3, 3), 3 % p))
