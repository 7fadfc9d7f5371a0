import pytest
from hypothesis import given, settings, strategies as st

from strictpoly import combin
from strictpoly.combin import (
    compare, conjugate, enumerate_lambda, hook_lengths, is_p_core, mullineux, mullineux_restricted,
    p_core_of, partitions, remove_rim_hooks,
)


def test_enumerate_all_weights():
    assert sorted(enumerate_lambda(2, 2)) == [(0, 2), (1, 1), (2, 0)]


def test_enumerate_dominant_and_restricted():
    assert enumerate_lambda(3, 3, "dominant") == [(3,), (2, 1), (1, 1, 1)]
    assert enumerate_lambda(3, 3, "p_restricted", p=3) == [(2, 1), (1, 1, 1)]


def test_enumerate_counts():
    assert len(enumerate_lambda(3, 3)) == combin.weights_count(3, 3) == 10
    with pytest.raises(ValueError):
        enumerate_lambda(3, 3, "p_restricted")


def test_conjugate_examples():
    assert conjugate((3, 1)) == (2, 1, 1)
    assert conjugate((1, 1, 1)) == (3,)


@pytest.mark.parametrize("d", range(0, 9))
def test_conjugate_involution(d):
    for lam in partitions(d):
        assert conjugate(conjugate(lam)) == lam


def test_classify_flags():
    assert combin.classify((3,), 3)[:2] == (False, True)
    assert combin.classify((1, 1, 1), 3)[:2] == (True, False)
    assert combin.classify((3, 1), 3).p_core
    assert sorted(h for row in hook_lengths((3, 1)) for h in row) == [1, 1, 2, 4]


def test_rim_hook_removal():
    assert remove_rim_hooks((3,), 3)[0] == ()
    assert remove_rim_hooks((3, 1), 3)[0] == (3, 1)


@pytest.mark.parametrize("p", [2, 3, 5])
def test_core_fixed_points_and_independence(p):
    for d in range(1, 9):
        for lam in partitions(d):
            core = p_core_of(lam, p)
            assert is_p_core(core, p)
            if is_p_core(lam, p):
                assert core == lam
            # the core does not depend on the removal order
            assert remove_rim_hooks(lam, p, order=lambda moves: moves[0])[0] == core


def test_compare_examples():
    assert compare((2, 1), (3,)) == "less"
    assert compare((3, 3), (4, 1, 1)) == "incomparable"
    lex = sorted(partitions(3), key=combin.dominance_lex_key, reverse=True)
    assert lex == [(3,), (2, 1), (1, 1, 1)]
    assert compare((3,), (2, 1), "lex") == "greater"


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 8).flatmap(lambda d: st.sampled_from(partitions(d))),
       st.integers(1, 8).flatmap(lambda d: st.sampled_from(partitions(d))))
def test_lex_refines_dominance(lam, mu):
    if sum(lam) == sum(mu) and compare(lam, mu) == "greater":
        assert compare(lam, mu, "lex") == "greater"


def test_mullineux_known_values():
    assert mullineux((2, 1), 3) == (3,)
    assert mullineux((3,), 3) == (2, 1)
    assert mullineux((4, 1), 5) == (3, 1, 1)


@pytest.mark.parametrize("p", [3, 5])
def test_mullineux_involution(p):
    for d in range(1, 9):
        for lam in partitions(d):
            if combin.is_p_regular(lam, p):
                assert mullineux(mullineux(lam, p), p) == lam


def test_mullineux_semisimple_is_conjugation():
    for lam in partitions(4):
        assert mullineux(lam, 5) == conjugate(lam)


def test_mullineux_restricted_labels():
    assert mullineux_restricted((2, 1), 3) == (1, 1, 1)
    assert mullineux_restricted((1, 1, 1), 3) == (2, 1)
    with pytest.raises(ValueError):
        mullineux_restricted((3,), 3)


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        combin.partition((1, -1))
    with pytest.raises(ValueError):
        mullineux((1, 1, 1), 3)
    with pytest.raises(ValueError):
        compare((2,), (1,))
