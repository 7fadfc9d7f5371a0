from math import comb

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from strictpoly import combin, modules
from strictpoly import polyfun as pf
from strictpoly.polyfun import Ext, Gamma, Simple, Sym, realize

LAMBDA33 = combin.compositions(3, 3)
DOMINANT3 = combin.partitions(3)


def iso(a, b):
    return modules.is_isomorphic(a, b).iso


def mod(e, m=3, p=3):
    return realize(e, m, p).module


def test_leaf_dimensions():
    assert realize(Ext((3,)), 3, 3).dim == 1
    assert realize(Gamma((3,)), 3, 3).dim == 10
    assert realize(Sym((2, 1)), 2, 3).dim == 6
    # the exterior functor of the composition (1,1,1) is Λ¹⊗Λ¹⊗Λ¹
    assert realize(Ext((1, 1, 1)), 3, 3).dim == 27
    assert realize(pf.T(3), 3, 3).dim == 27
    assert realize(pf.Q(3), 3, 3).dim == 7


@pytest.mark.parametrize("lam", LAMBDA33)
def test_realizations_are_consistent(lam):
    for e in (Gamma(lam), Sym(lam), Ext(lam)):
        r = realize(e, 3, 3)
        assert r.check()
        modules.check_relations(r.module)
        assert r.dim == pf.predicted_dim(e, 3)


@pytest.mark.parametrize("lam", LAMBDA33)
def test_gamma_dual_is_sym(lam):
    assert iso(mod(pf.KuhnDual(Gamma(lam))), mod(Sym(lam)))
    assert iso(mod(pf.KuhnDual(Ext(lam))), mod(Ext(lam)))


@pytest.mark.parametrize("lam", DOMINANT3)
def test_simples_self_dual(lam):
    assert iso(mod(pf.KuhnDual(Simple(lam))), mod(Simple(lam)))


@pytest.mark.parametrize("lam", LAMBDA33)
def test_hom_from_gamma_reads_weight_space(lam):
    # Hom(Γ^λ, X) ≅ e_λ X pins the side convention of Γ^λ
    for x in (Sym((2, 1)), pf.T(3), Simple((2, 1))):
        assert pf.hom_from_gamma_dim(lam, mod(x)) == mod(x).character().get(lam, 0)


def test_weyl_modules():
    for m in (3, 4):
        w = realize(pf.Weyl((1, 1, 1)), m, 3)
        assert w.dim == comb(m, 3)
        assert iso(w.module, mod(Ext((3,)), m))
    assert iso(mod(pf.Weyl((3,))), mod(Gamma((3,))))
    assert realize(pf.Weyl((2, 1)), 3, 3).dim == 8


def test_simple_modules():
    assert iso(mod(Simple((1, 1, 1))), mod(Ext((3,))))
    dims = {lam: realize(Simple(lam), 3, 3).dim for lam in DOMINANT3}
    assert dims == {(3,): 3, (2, 1): 7, (1, 1, 1): 1}
    for lam in DOMINANT3:
        assert iso(mod(Simple(lam), p=5), mod(pf.Weyl(lam), p=5))
        assert modules.certify_simple(mod(Simple(lam))).simple


def test_truncated_sym_is_simple():
    assert iso(mod(pf.Q(3)), mod(Simple((2, 1))))


def test_character_multiplicities():
    for lam in DOMINANT3:
        assert pf.character_multiplicities(mod(Simple(lam))) == {lam: 1}
    assert pf.character_multiplicities(mod(Sym((3,)))) == {(3,): 1, (2, 1): 1}
    g = mod(Gamma((2, 1)))
    mult = pf.character_multiplicities(g)
    factors = modules.composition_factors(g)
    assert sum(mult.values()) == len(factors)
    assert sorted(realize(Simple(lab), 3, 3).dim for lab, c in mult.items() for _ in range(c)) == \
        sorted(f.dim for f in factors)


@pytest.mark.parametrize("x", [Sym((2, 1)), Ext((3,)), Simple((2, 1))])
def test_tensor_with_gamma_is_identity(x):
    assert iso(mod(pf.ITensor(x, Gamma((3,)))), mod(x))


@pytest.mark.parametrize("lam", LAMBDA33)
def test_gamma_tensor_sym(lam):
    assert iso(mod(pf.ITensor(Gamma(lam), Sym((3,)))), mod(Sym(lam)))


def test_exterior_square_tensor():
    assert iso(mod(pf.ITensor(Ext((3,)), Ext((3,)))), mod(Sym((3,))))


def test_tensor_is_symmetric():
    a, b = Sym((2, 1)), Simple((2, 1))
    assert iso(mod(pf.ITensor(a, b)), mod(pf.ITensor(b, a)))


@pytest.mark.parametrize("lam", LAMBDA33)
def test_hom_from_sym(lam):
    h = mod(pf.IHom(Sym((3,)), Sym(lam)))
    assert iso(h, mod(Gamma(lam)))
    # S^λ and Γ^λ agree exactly when every part is below p
    assert bool(iso(h, mod(Sym(lam)))) == (max(lam) < 3)


def test_monoidal_dual_of_gamma():
    assert iso(mod(pf.MonDual(Gamma((3,)))), mod(Gamma((3,))))


def test_hom_dual_symmetry():
    x, y = Gamma((2, 1)), Ext((3,))
    lhs = mod(pf.IHom(x, pf.KuhnDual(y)))
    rhs = mod(pf.IHom(y, pf.KuhnDual(x)))
    assert iso(lhs, rhs)


def test_projective_covers():
    for lam in DOMINANT3:
        assert iso(pf.projective_cover(lam, 3, 5).module, mod(Simple(lam), p=5))
    dims = {lam: pf.projective_cover(lam, 3, 3).dim for lam in DOMINANT3}
    assert dims == {(3,): 10, (2, 1): 18, (1, 1, 1): 9}
    for lam in DOMINANT3:
        pm = pf.projective_cover(lam, 3, 3).module
        simples = [(nu, mod(Simple(nu))) for nu in DOMINANT3]
        _, _, mult = modules.radical_top(pm, simples)
        assert mult == {lam: 1}
    assert modules.hom_dim(pf.projective_cover((2, 1), 3, 3).module, mod(Sym((3,)))) > 0


def test_ext1_semisimple_vanishes():
    for d in (2, 3, 4):
        for mu in combin.partitions(d):
            for nu in combin.partitions(d):
                assert pf.ext1(mu, nu, d, 5) == 0


def test_ext1_table():
    table = {(mu, nu): pf.ext1(mu, nu, 3, 3) for mu in DOMINANT3 for nu in DOMINANT3}
    assert table[(2, 1), (3,)] >= 1
    assert all(table[lam, lam] == 0 for lam in DOMINANT3)
    assert table == {
        (m, n): int({m, n} in ({(2, 1), (3,)}, {(2, 1), (1, 1, 1)})) for m in DOMINANT3 for n in DOMINANT3
    }


# --- expressions ---------------------------------------------------------------


def test_context_degree():
    assert pf.parse("tensor(Q,L(2,1))", 3) == pf.ITensor(pf.Q(3), Simple((2, 1)))
    with pytest.raises(pf.ParseError):
        pf.parse("Q")
    with pytest.raises(pf.ParseError):
        pf.parse("T(4)", 3)


def test_parse_examples():
    assert pf.parse("tensor(L(2,1),L(1,1,1))") == pf.ITensor(Simple((2, 1)), Simple((1, 1, 1)))
    assert pf.parse("ihom(S(3),dual(Gamma(3)))") == pf.IHom(Sym((3,)), pf.KuhnDual(Gamma((3,))))


def test_parse_error_position():
    with pytest.raises(pf.ParseError) as err:
        pf.parse("tensor(L(2,1)")
    assert err.value.pos == 13 and "unbalanced" in str(err.value)


@pytest.mark.parametrize("text", ["tensor(S(2,1),Gamma(2))", "Gamma(", "L(2,1))", "foo(3)", "S(-1)"])
def test_parse_rejects(text):
    with pytest.raises(pf.ParseError):
        pf.parse(text)


EXPRS = [
    "Gamma(2,1)", "S(3)", "Lambda(1,1,1)", "Weyl(2,1)", "L(2,1)", "P(3)",
    "dual(Gamma(3))", "tensor(L(2,1),L(1,1,1))", "ihom(S(3),S(1,2,0))", "mdual(Gamma(3))",
    "Gt(triv(3))", "Gh(M(2,1))", "Gt(kron(sgn(3),D(2,1)))", "T(3)", "Q(3)", "Gh(F(S(2,1)))",
]


@pytest.mark.parametrize("text", EXPRS)
def test_render_parse_roundtrip(text):
    e = pf.parse(text)
    assert pf.parse(pf.render(e)) == e
    assert pf.degree(e) == 3


@settings(max_examples=50, deadline=None)
@given(st.recursive(
    st.sampled_from([Gamma((2, 1)), Sym((3,)), Ext((1, 2)), Simple((2, 1)), pf.Q(3), pf.T(3)]),
    lambda kids: st.one_of(
        st.builds(pf.KuhnDual, kids), st.builds(pf.ITensor, kids, kids),
        st.builds(pf.IHom, kids, kids), st.builds(pf.MonDual, kids)),
    max_leaves=6))
def test_render_parse_property(e):
    assert pf.parse(pf.render(e)) == e


def test_sym_expressions():
    s = pf.parse_sym("kron(sgn,M(2,1))", 3)
    assert s == pf.parse_sym("kron(sgn(3),M(2,1))")
    assert s.build(3).dim == 3
    assert pf.parse_sym(pf.render_sym(s)) == s
    f = pf.parse_sym("F(Lambda(3))")
    assert f.build(3).dim == 1
