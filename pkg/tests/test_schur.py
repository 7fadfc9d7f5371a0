import itertools
from math import comb, factorial

import numpy as np
import pytest

from strictpoly import combin, ff, schur
from strictpoly.modules import is_isomorphic
from strictpoly import polyfun as pf


def test_dimensions():
    assert schur.schur_algebra(2, 2, 3).dim == 10
    assert schur.schur_algebra(3, 3, 3).dim == 165


def dense(x):
    return x.toarray() if hasattr(x, "toarray") else np.asarray(x)


def test_degree_one_is_matrix_algebra():
    alg = schur.schur_algebra(3, 1, 5)
    assert alg.dim == 9
    rng = np.random.default_rng(1)
    for _ in range(5):
        x, y = rng.integers(0, 5, size=(2, 9))
        assert np.array_equal(dense(alg.rho(alg.mul(x, y))), ff.matmul(dense(alg.rho(x)), dense(alg.rho(y)), 5))


def test_unit_and_idempotents():
    alg = schur.schur_algebra(3, 3, 3)
    one = alg.unit()
    rng = np.random.default_rng(0)
    x = rng.integers(0, 3, size=alg.dim)
    assert np.array_equal(alg.mul(one, x), x) and np.array_equal(alg.mul(x, one), x)
    idem = alg.weight_idempotents()
    assert len(idem) == 10
    assert np.array_equal(sum(idem.values()) % 3, one)
    for a, b in itertools.product(idem, repeat=2):
        prod = alg.mul(idem[a], idem[b])
        assert np.array_equal(prod, idem[a] if a == b else np.zeros(alg.dim, dtype=np.int64))
    assert sorted(schur.schur_algebra(2, 2, 3).weight_idempotents()) == [(0, 2), (1, 1), (2, 0)]


def test_multiplication_matches_tensor_action():
    for n, d, p in [(2, 2, 3), (2, 3, 2), (3, 2, 5)]:
        alg = schur.schur_algebra(n, d, p)
        rng = np.random.default_rng(n * d)
        for _ in range(5):
            x, y = rng.integers(0, p, size=(2, alg.dim))
            assert np.array_equal(dense(alg.rho(alg.mul(x, y))), ff.matmul(dense(alg.rho(x)), dense(alg.rho(y)), p))


def test_associativity_check():
    for n, d, p in [(2, 2, 3), (3, 3, 3)]:
        ok, bad = schur.schur_algebra(n, d, p).check_associativity(200, 0)
        assert ok and bad is None


def test_representable_examples():
    alg = schur.schur_algebra(2, 2, 3)
    assert schur.representable(alg, 1).dim == 3
    reg = schur.regular_module(alg)
    assert reg.dim == alg.dim
    alg3 = schur.schur_algebra(3, 3, 3)
    rep = schur.representable(alg3, 3)
    for lam in combin.compositions(3, 3):
        size = sum(1 for w in rep.weights if tuple(w) == lam)
        assert size == np.prod([comb(3 + x - 1, x) for x in lam])


def test_yoneda_examples():
    alg = schur.schur_algebra(2, 2, 3)
    reg = schur.regular_module(alg)
    assert is_isomorphic(schur.yoneda_evaluate(reg, 2), reg).iso
    s2 = pf.realize(pf.Sym((2,)), 2, 3).module
    assert schur.yoneda_evaluate(s2, 1).dim == 1
    g2 = pf.realize(pf.Gamma((2,)), 2, 3).module
    g3 = schur.yoneda_evaluate(g2, 3)
    assert g3.dim == 6
    assert is_isomorphic(g3, pf.realize(pf.Gamma((2,)), 3, 3).module).iso


@pytest.mark.parametrize("d", [2, 3])
def test_symgroup_corner(d):
    alg = schur.schur_algebra(d, d, 3)
    table = alg.symgroup_corner()
    assert len(set(table.values())) == factorial(d)
    omega = tuple([1] * d)
    assert table[tuple(range(d))] == int(np.flatnonzero(alg.idempotent(omega))[0])
    # every basis element of e_ω S e_ω is a permutation graph
    e = alg.idempotent(omega)
    corner = {int(k) for t in range(alg.dim) for k in np.flatnonzero(alg.mul(alg.mul(e, alg.element({t: 1})), e))}
    assert corner == set(table.values())


def test_structure_roundtrip(tmp_path):
    alg = schur.schur_algebra(2, 2, 3)
    path = tmp_path / "s.bin"
    with open(path, "wb") as fh:
        alg.dump_structure(fh, all_pairs=True)
    fresh = schur.schur_algebra(2, 2, 3)
    with open(path, "rb") as fh:
        fresh.load_structure(fh)
    for s, t in itertools.product(range(alg.dim), repeat=2):
        assert fresh._memo[(s, t)] == alg.basis_mul(s, t)


def test_size_guard():
    with pytest.raises(ValueError):
        schur.schur_algebra(20, 8, 3)


@pytest.mark.parametrize("n,d,p", [(2, 2, 3), (3, 3, 3)])
def test_generators_span_the_algebra(n, d, p):
    alg = schur.schur_algebra(n, d, p)
    gens = [alg.generator(lab) for lab in alg.labels()] + list(alg.weight_idempotents().values())
    frontier = [alg.unit()]
    mat = np.array(frontier)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = alg.mul(g, x)
                cand = np.vstack([mat, y])
                if ff.rank(cand, p) > mat.shape[0]:
                    mat = cand
                    nxt.append(y)
        frontier = nxt
    assert mat.shape[0] == alg.dim
