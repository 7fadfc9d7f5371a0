"""Modules over the group algebra kS_d, generated by adjacent transpositions.

Permutations are tuples ``sigma`` with ``sigma[j]`` the image of ``j``
(0-based).  On tensors the left action is
``σ(v_1⊗…⊗v_d) = v_{σ⁻¹(1)}⊗…⊗v_{σ⁻¹(d)}``, i.e. index sequence
``K ↦ K∘σ⁻¹``; the right place action is ``K ↦ K∘σ``.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

import numpy as np

from . import ff
from .combin import count_standard_tableaux, fmt, is_p_regular, partition, partitions
from .modules import ModAction, certify_simple, hom_dim, quotient, restrict, simple_iso


def labels(d):
    return [("s", i) for i in range(1, d)]


def tag(d):
    return ("kS", d)


def _with_dim(p, d, dim, mats, name):
    return ModAction(p, dim, list(zip(labels(d), mats)), tag(d), None, name).check()


def compose(s, t):
    """(s∘t)(j) = s(t(j))."""
    return tuple(s[j] for j in t)


def inverse_perm(s):
    out = [0] * len(s)
    for j, x in enumerate(s):
        out[x] = j
    return tuple(out)


def transposition(d, i):
    """s_i (1-based) swapping i-1 and i (0-based)."""
    s = list(range(d))
    s[i - 1], s[i] = s[i], s[i - 1]
    return tuple(s)


def reduced_word(sigma):
    """Indices i with σ = s_{i_1}∘s_{i_2}∘…"""
    sigma = list(sigma)
    word = []
    while True:
        j = next((j for j in range(len(sigma) - 1) if sigma[j] > sigma[j + 1]), None)
        if j is None:
            return word
        sigma[j], sigma[j + 1] = sigma[j + 1], sigma[j]
        word.insert(0, j + 1)


def act(m, sigma):
    """ρ(σ) for a kS_d-module."""
    out = ff.identity(m.dim)
    for i in reduced_word(sigma):
        out = ff.matmul(out, m.gen(("s", i)), m.p)
    return out


# --- standard modules ------------------------------------------------------------


def trivial(d, p):
    return _with_dim(p, d, 1, [ff.identity(1)] * (d - 1), "triv")


def sign(d, p):
    return _with_dim(p, d, 1, [np.array([[p - 1]], dtype=np.int64)] * (d - 1), "sgn")


def regular(d, p):
    perms = list(itertools.permutations(range(d)))
    index = {s: k for k, s in enumerate(perms)}
    mats = []
    for i in range(1, d):
        t = transposition(d, i)
        m = ff.zeros(len(perms), len(perms))
        for s, k in index.items():
            m[index[compose(t, s)], k] = 1
        mats.append(m)
    return _with_dim(p, d, len(perms), mats, "kS")


def _sequences_with_content(lam):
    n = len(lam)
    d = sum(lam)
    out = []
    for seq in itertools.product(range(n), repeat=d):
        if all(seq.count(i) == c for i, c in enumerate(lam)):
            out.append(seq)
    return out


def _place_matrices(seqs, d, p):
    index = {s: k for k, s in enumerate(seqs)}
    mats = []
    for i in range(1, d):
        m = ff.zeros(len(seqs), len(seqs))
        for s, k in index.items():
            t = list(s)
            t[i - 1], t[i] = t[i], t[i - 1]
            m[index[tuple(t)], k] = 1
        mats.append(m)
    return mats


def perm_module(lam, p):
    """M^λ: span of index sequences of content λ (λ a composition)."""
    lam = tuple(int(x) for x in lam)
    if any(x < 0 for x in lam) or sum(lam) == 0:
        raise ValueError(f"invalid composition {lam}")
    d = sum(lam)
    seqs = _sequences_with_content(lam)
    return _with_dim(p, d, len(seqs), _place_matrices(seqs, d, p), f"M^{fmt(lam)}")


def perm_basis(lam):
    return _sequences_with_content(tuple(lam))


def tensor_power(n, d, p):
    """(k^n)^{⊗d} with the left action; the right action of s_i is the same matrix."""
    seqs = [tuple(int(x) for x in row) for row in itertools.product(range(n), repeat=d)]
    return _with_dim(p, d, len(seqs), _place_matrices(seqs, d, p), f"(k^{n})^⊗{d}")


def standard_module(kind, d, p, lam=None, n=None):
    if kind == "trivial":
        return trivial(d, p)
    if kind == "sign":
        return sign(d, p)
    if kind == "regular":
        return regular(d, p)
    if kind == "perm":
        if lam is None or sum(lam) != d:
            raise ValueError(f"perm module needs a composition of {d}")
        return perm_module(lam, p)
    if kind == "tensor_power":
        if n is None or n < 1:
            raise ValueError("tensor_power needs n >= 1")
        return tensor_power(n, d, p)
    raise ValueError(f"unknown kind {kind!r}")


# --- products and duals -------------------------------------------------------------


def _same_degree(a, b):
    if a.algebra_id != b.algebra_id or a.p != b.p:
        raise ValueError(f"degree mismatch: {a.algebra_id} vs {b.algebra_id}")


def kronecker(a, b):
    _same_degree(a, b)
    d = a.algebra_id[1]
    mats = [ff.kron(a.gen(lab), b.gen(lab), a.p) for lab in labels(d)]
    return _with_dim(a.p, d, a.dim * b.dim, mats, f"{a.name}⊗{b.name}")


def internal_dual(a):
    d = a.algebra_id[1]
    # s_i is an involution so ρ(s_i^{-1})ᵀ = ρ(s_i)ᵀ
    mats = [a.gen(lab).T.copy() for lab in labels(d)]
    return _with_dim(a.p, d, a.dim, mats, f"{a.name}*")


dual = internal_dual


def internal_hom(a, b):
    """Hom_k(a, b) with σ·f = σ f σ⁻¹, in column-major coordinates of f."""
    _same_degree(a, b)
    d = a.algebra_id[1]
    mats = [ff.kron(a.gen(lab).T, b.gen(lab), a.p) for lab in labels(d)]
    return _with_dim(a.p, d, a.dim * b.dim, mats, f"Hom({a.name},{b.name})")


def fixed_points(m, gens):
    """Common fixed vectors of the listed generators (columns)."""
    if not gens:
        return ff.identity(m.dim)
    p = m.p
    rows = [(m.gen(("s", i)) - ff.identity(m.dim)) % p for i in gens]
    return ff.kernel(np.concatenate(rows, axis=0), p)


def young_generators(lam):
    """Adjacent transpositions generating the Young subgroup S_λ (blocks of positions)."""
    out, start = [], 0
    for c in lam:
        out += list(range(start + 1, start + c))
        start += c
    return out


# --- Specht and simple modules ---------------------------------------------------------


def standard_tableaux(lam):
    """Standard tableaux as lists of rows of 0-based entries."""
    lam = partition(lam)
    d = sum(lam)
    out = []

    def fill(rows, k):
        if k == d:
            out.append([list(r) for r in rows])
            return
        for i in range(len(lam)):
            if len(rows[i]) < lam[i] and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(k)
                fill(rows, k + 1)
                rows[i].pop()

    fill([[] for _ in lam], 0)
    return out


def _perm_sign(perm):
    seen, sgn = set(), 1
    for start in range(len(perm)):
        if start in seen:
            continue
        length, j = 0, start
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


def polytabloid(tab, lam, p):
    """Coordinates of e_T in M^λ."""
    d = sum(lam)
    seqs = _sequences_with_content(tuple(lam))
    index = {s: k for k, s in enumerate(seqs)}
    row_of = [0] * d
    for r, row in enumerate(tab):
        for x in row:
            row_of[x] = r
    cols = [[tab[r][c] for r in range(len(tab)) if c < len(tab[r])] for c in range(len(tab[0]))]
    vec = np.zeros(len(seqs), dtype=np.int64)
    for parts in itertools.product(*(itertools.permutations(col) for col in cols)):
        pi = list(range(d))
        for col, img in zip(cols, parts):
            for x, y in zip(col, img):
                pi[x] = y
        # tabloid of πT: entry π(x) sits in the row of x
        seq = [0] * d
        for x in range(d):
            seq[pi[x]] = row_of[x]
        vec[index[tuple(seq)]] += _perm_sign(pi)
    return vec % p


def specht(lam, p):
    """S^λ inside M^λ; returns ``(module, basis in M^λ, Gram matrix)``."""
    lam = partition(lam)
    if not lam:
        raise ValueError("empty partition")
    mlam = perm_module(lam, p)
    basis = np.stack([polytabloid(t, lam, p) for t in standard_tableaux(lam)], axis=1)
    if ff.rank(basis, p) != count_standard_tableaux(lam):
        raise AssertionError("polytabloids are dependent")
    mod = restrict(mlam, basis, f"S^{fmt(lam)}")
    gram = ff.matmul(basis.T, basis, p)
    return mod, basis, gram


@lru_cache(maxsize=None)
def simple_D(lam, p):
    """D^λ = S^λ / rad of the tabloid form, for p-regular λ."""
    lam = partition(lam)
    if not is_p_regular(lam, p):
        raise ValueError(f"{fmt(lam)} is not {p}-regular")
    mod, _, gram = specht(lam, p)
    rad = ff.kernel(gram, p)
    out = quotient(mod, rad, f"D^{fmt(lam)}").module
    if not certify_simple(out).simple:
        raise AssertionError(f"D^{fmt(lam)} failed the simplicity certificate")
    return out


def simples(d, p):
    return [(lam, simple_D(lam, p)) for lam in partitions(d) if is_p_regular(lam, p)]


def identify_simple(m, p):
    """Label μ with m ≅ D^μ, or raise."""
    d = m.algebra_id[1]
    hits = [lam for lam, s in simples(d, p) if simple_iso(m, s)]
    if len(hits) != 1:
        raise LookupError(f"simple module matched {len(hits)} labels")
    return hits[0]


def sign_twist_identify(lam, p):
    lam = partition(lam)
    d = sum(lam)
    return identify_simple(kronecker(simple_D(lam, p), sign(d, p)), p)
