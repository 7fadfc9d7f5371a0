import itertools

import numpy as np
import pytest

from strictpoly import ff, modules, symgrp
from strictpoly import polyfun as pf
from strictpoly.modules import (
    certify_simple, composition_factors, direct_sum, fitting_decompose, hom_basis, hom_dim, is_isomorphic,
    radical_top, spin,
)


def two_tensor(p):
    return symgrp.tensor_power(2, 2, p)


def test_spin_examples():
    m = two_tensor(5)
    assert spin(m, np.zeros((4, 1), dtype=np.int64)).dim == 0
    # e1⊗e2 − e2⊗e1 in the basis (00, 01, 10, 11)
    sub = spin(m, np.array([[0], [1], [4], [0]]))
    assert sub.dim == 1
    assert is_isomorphic(sub.module, symgrp.sign(2, 5)).iso
    s = symgrp.simple_D((2, 1), 5)
    assert spin(s, np.eye(s.dim, dtype=np.int64)[:, :1]).dim == s.dim


def test_hom_examples():
    m = symgrp.perm_module((2, 1), 3)
    basis = hom_basis(m, m)
    ident = ff.identity(m.dim)
    stacked = basis.reshape(basis.shape[0], -1).T
    assert ff.in_span(stacked, ident.reshape(-1, 1), 3)
    assert hom_dim(symgrp.trivial(2, 3), symgrp.sign(2, 3)) == 0
    for n in (symgrp.sign(3, 3), symgrp.perm_module((2, 1), 3), symgrp.simple_D((3,), 3)):
        assert hom_dim(symgrp.regular(3, 3), n) == n.dim


def test_isomorphism_examples(rng):
    m = symgrp.perm_module((2, 1), 5)
    res = is_isomorphic(m, m)
    assert res.iso and res.witness.check() and res.witness.is_invertible()
    bad = is_isomorphic(symgrp.trivial(3, 5), symgrp.sign(3, 5))
    assert bad.iso is False and "character" in bad.reason
    perm = np.eye(m.dim, dtype=np.int64)[rng.permutation(m.dim)]
    res = is_isomorphic(modules.change_basis(m, perm), m)
    assert res.iso and res.witness.check()


def test_certify_simple_examples(ctx3):
    assert certify_simple(symgrp.sign(3, 3)).simple
    res = certify_simple(ctx3.mod(pf.Sym((3,))))
    assert res.simple is False
    assert 0 < res.witness.shape[1] < 10
    assert modules.is_stable(ctx3.mod(pf.Sym((3,))), res.witness)
    d = symgrp.simple_D((3,), 5)
    res = certify_simple(direct_sum(d, d))
    assert res.simple is False


def test_composition_factors_examples(ctx3):
    s = symgrp.simple_D((2, 1), 5)
    assert [f.dim for f in composition_factors(s)] == [2]
    factors = composition_factors(ctx3.mod(pf.Sym((3,))))
    assert sorted(f.dim for f in factors) == [3, 7]
    labels = sorted(pf.character_multiplicities(f) and next(iter(pf.character_multiplicities(f))) for f in factors)
    assert labels == [(2, 1), (3,)]


def _brute_eigen(mat, p, value):
    count = 0
    for v in itertools.product(range(p), repeat=mat.shape[0]):
        v = np.array(v, dtype=np.int64)
        if not np.any((mat @ v - value * v) % p):
            count += 1
    return count


def test_composition_factors_tensor_square_kS2():
    m = two_tensor(3)
    factors = composition_factors(m)
    assert [f.dim for f in factors] == [1, 1, 1, 1]
    triv = sum(bool(is_isomorphic(f, symgrp.trivial(2, 3)).iso) for f in factors)
    sgn = sum(bool(is_isomorphic(f, symgrp.sign(2, 3)).iso) for f in factors)
    s = m.gen(("s", 1))
    # brute force: 27 fixed vectors and 3 anti-fixed vectors in F_3^4
    assert (triv, sgn) == (3, 1)
    assert _brute_eigen(s, 3, 1) == 3**triv and _brute_eigen(s, 3, 2) == 3**sgn


def test_radical_top_examples(ctx3):
    simples = [(lam, ctx3.mod(pf.Simple(lam))) for lam in [(3,), (2, 1), (1, 1, 1)]]
    l21 = ctx3.mod(pf.Simple((2, 1)))
    rad, top, mult = radical_top(l21, simples)
    assert rad.shape[1] == 0 and mult == {(2, 1): 1}
    rad, top, mult = radical_top(ctx3.mod(pf.Sym((3,))), simples)
    assert mult == {(2, 1): 1} and top.module.dim == 7 and rad.shape[1] == 3


def test_semisimple_radical_vanishes():
    for lam in [(2,), (1, 1)]:
        assert pf.projective_cover(lam, 2, 5).dim == pf.realize(pf.Simple(lam), 2, 5).dim
    simples = [(lam, pf.realize(pf.Simple(lam), 2, 5).module) for lam in [(2,), (1, 1)]]
    rad, _, _ = radical_top(pf.realize(pf.T(2), 2, 5).module, simples)
    assert rad.shape[1] == 0


def test_fitting_examples():
    s = symgrp.simple_D((2, 1), 5)
    assert [x.dim for x in fitting_decompose(s)] == [2]
    parts = fitting_decompose(direct_sum(symgrp.trivial(3, 5), symgrp.sign(3, 5)))
    assert sorted(x.dim for x in parts) == [1, 1]
    t = pf.realize(pf.T(2), 2, 3).module
    parts = fitting_decompose(t)
    assert sorted(x.dim for x in parts) == [1, 3]
    ext = pf.realize(pf.Ext((2,)), 2, 3).module
    sym = pf.realize(pf.Sym((2,)), 2, 3).module
    small = next(x for x in parts if x.dim == 1)
    big = next(x for x in parts if x.dim == 3)
    assert is_isomorphic(small.module, ext).iso and is_isomorphic(big.module, sym).iso


def test_algebra_mismatch():
    with pytest.raises(ValueError):
        hom_dim(symgrp.trivial(2, 3), symgrp.trivial(3, 3))
