"""Schur algebras S(n,d) in the divided-power basis.

A basis element of Γ^d Hom(k^a, k^b) is a multiset of d pairs ``(i, j)`` with
``i < b`` (target) and ``j < a`` (source), stored as a sorted tuple.  Inside the
tensor power it is the orbit sum of ``E_{i1 j1} ⊗ … ⊗ E_{id jd}``, which acts on
``(k^a)^{⊗d}`` by a 0/1 matrix.  Products are computed by multiplying those
matrices and reading coefficients at canonical representatives.

Indices are 0-based internally; generator labels use 1-based ``i`` as in
``("E", i, r)`` which moves r tensor factors from e_{i+1} to e_i.
"""

from __future__ import annotations

import io
import itertools
import json
import struct
from functools import lru_cache
from math import comb

import numpy as np
import scipy.sparse as sp

from . import ff
from .combin import compositions
from .modules import ModAction

SIZE_GUARD = 10**6
DENSE_GUARD = 3000


def content(seq, n):
    out = [0] * n
    for x in seq:
        out[x] += 1
    return tuple(out)


@lru_cache(maxsize=None)
def words(m, d):
    """All index sequences of length d over range(m), row i = base-m digits of i."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64)
    grids = np.indices((m,) * d).reshape(d, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def word_index(seqs, m):
    seqs = np.asarray(seqs, dtype=np.int64)
    d = seqs.shape[-1]
    powers = m ** np.arange(d - 1, -1, -1, dtype=np.int64)
    return seqs @ powers


@lru_cache(maxsize=None)
def word_weights(m, d):
    w = words(m, d)
    return [tuple(int(c) for c in row) for row in np.stack([(w == i).sum(axis=1) for i in range(m)], axis=1)]


def generator_labels(n, d):
    return [(kind, i, r) for i in range(1, n) for kind in ("E", "F") for r in range(1, d + 1)]


@lru_cache(maxsize=None)
def w_generator(m, d, label):
    """Sparse 0/1 matrix of a divided-power generator on (k^m)^{⊗d}."""
    kind, i, r = label
    src, dst = (i, i - 1) if kind == "E" else (i - 1, i)
    w = words(m, d)
    rows, cols = [], []
    for subset in itertools.combinations(range(d), r):
        sub = list(subset)
        hit = np.all(w[:, sub] == src, axis=1)
        new = w[hit].copy()
        new[:, sub] = dst
        rows.append(word_index(new, m))
        cols.append(np.flatnonzero(hit))
    rows = np.concatenate(rows) if rows else np.zeros(0, dtype=np.int64)
    cols = np.concatenate(cols) if cols else np.zeros(0, dtype=np.int64)
    size = m**d
    return sp.csr_matrix((np.ones(len(rows), dtype=np.int64), (rows, cols)), shape=(size, size))


def w_matrix(m, d, label, p):
    """Ambient action of a generator label, including ``("e", weight)``."""
    if label[0] == "e":
        wts = word_weights(m, d)
        diag = np.array([1 if w == tuple(label[1]) else 0 for w in wts], dtype=np.int64)
        return sp.diags(diag, format="csr", dtype=np.int64)
    out = w_generator(m, d, label).copy()
    out.data %= p
    return out


class DividedSpace:
    """Basis of Γ^d Hom(k^a, k^b) with orbit-sum embedding into matrices b^d x a^d."""

    def __init__(self, b, a, d):
        self.b, self.a, self.d = b, a, d
        pairs = [(i, j) for i in range(b) for j in range(a)]
        self.basis = list(itertools.combinations_with_replacement(pairs, d))
        self.index = {x: t for t, x in enumerate(self.basis)}
        self.dim = len(self.basis)
        arr = np.array(self.basis, dtype=np.int64).reshape(self.dim, d, 2)
        self.targets = arr[:, :, 0]
        self.sources = arr[:, :, 1]
        self.cols_per = a**d
        keys = word_index(self.targets, b) * self.cols_per + word_index(self.sources, a)
        order = np.argsort(keys)
        self._keys = keys[order]
        self._keyidx = order
        # all distinct arrangements of every multiset
        perms = np.array(list(itertools.permutations(range(d))), dtype=np.int64).reshape(-1, d)
        t_all = word_index(self.targets[:, perms], b)
        s_all = word_index(self.sources[:, perms], a)
        flat = t_all * self.cols_per + s_all
        owner = np.repeat(np.arange(self.dim), perms.shape[0])
        both = np.unique(np.stack([owner, flat.ravel()], axis=1), axis=0)
        self.orbit_owner = both[:, 0]
        self.orbit_row = both[:, 1] // self.cols_per
        self.orbit_col = both[:, 1] % self.cols_per

    def target_weight(self, t):
        return content(self.targets[t], self.b)

    def source_weight(self, t):
        return content(self.sources[t], self.a)

    def lookup(self, rows, cols):
        """Basis index of canonical (row, col) positions, -1 elsewhere."""
        keys = np.asarray(rows, dtype=np.int64) * self.cols_per + np.asarray(cols, dtype=np.int64)
        pos = np.searchsorted(self._keys, keys)
        pos = np.minimum(pos, len(self._keys) - 1)
        hit = self._keys[pos] == keys
        return np.where(hit, self._keyidx[pos], -1)

    def matrix(self, coeffs, p):
        """Sparse b^d x a^d matrix of a combination ``{basis index: coefficient}``."""
        if isinstance(coeffs, dict):
            vec = np.zeros(self.dim, dtype=np.int64)
            for t, c in coeffs.items():
                vec[t] = c % p
        else:
            vec = np.asarray(coeffs, dtype=np.int64).ravel() % p
        vals = vec[self.orbit_owner]
        keep = vals != 0
        return sp.csr_matrix((vals[keep], (self.orbit_row[keep], self.orbit_col[keep])),
                             shape=(self.b**self.d, self.a**self.d))

    def coords(self, mat, p):
        """Coordinates of an equivariant b^d x a^d matrix."""
        m = sp.coo_matrix(mat)
        idx = self.lookup(m.row, m.col)
        keep = idx >= 0
        out = np.zeros(self.dim, dtype=np.int64)
        np.add.at(out, idx[keep], np.asarray(m.data, dtype=np.int64)[keep])
        return out % p

    def lift_h(self, p):
        """All orbit matrices side by side: b^d x (dim * a^d)."""
        cols = self.orbit_owner * self.cols_per + self.orbit_col
        ones = np.ones(len(cols), dtype=np.int64)
        return sp.csr_matrix((ones, (self.orbit_row, cols)), shape=(self.b**self.d, self.dim * self.cols_per))

    def coords_h(self, mat, p, count):
        """Coordinates of ``count`` side-by-side equivariant blocks (dim x count)."""
        m = sp.coo_matrix(mat)
        block = m.col // self.cols_per
        idx = self.lookup(m.row, m.col % self.cols_per)
        keep = idx >= 0
        out = np.zeros((self.dim, count), dtype=np.int64)
        np.add.at(out, (idx[keep], block[keep]), np.asarray(m.data, dtype=np.int64)[keep])
        return out % p


def compose_divided(f, g, p, spaces=None):
    """Compose divided-power homs given as ``(space, coeff vector)`` pairs."""
    (sf, cf), (sg, cg) = f, g
    if sf.a != sg.b or sf.d != sg.d:
        raise ValueError("dimension mismatch in composition")
    out_space = spaces if spaces is not None else _space(sf.b, sg.a, sf.d)
    prod = ff.matmul(sf.matrix(cf, p), sg.matrix(cg, p), p)
    return out_space, out_space.coords(prod, p)


@lru_cache(maxsize=None)
def _space(b, a, d):
    return DividedSpace(b, a, d)


class SchurAlg:
    """S(n, d) over F_p with lazily memoized products."""

    def __init__(self, n, d, p):
        self.p = ff.check_prime(p)
        if n < 1 or d < 1:
            raise ValueError("need n, d >= 1")
        if n**d > SIZE_GUARD:
            raise ValueError(f"n^d = {n**d} exceeds the size guard {SIZE_GUARD}")
        self.n, self.d = n, d
        self.space = _space(n, n, d)
        self.dim = self.space.dim
        self._memo = {}

    def __repr__(self):
        return f"SchurAlg(n={self.n}, d={self.d}, p={self.p}, dim={self.dim})"

    @property
    def basis(self):
        return self.space.basis

    def element(self, coeffs):
        vec = np.zeros(self.dim, dtype=np.int64)
        for t, c in dict(coeffs).items():
            vec[t] = c % self.p
        return vec

    def rho(self, x):
        """Action on (k^n)^{⊗d} of a coefficient vector."""
        return self.space.matrix(x, self.p)

    def basis_mul(self, s, t):
        key = (s, t)
        if key not in self._memo:
            prod = ff.matmul(self.space.matrix({s: 1}, self.p), self.space.matrix({t: 1}, self.p), self.p)
            vec = self.space.coords(prod, self.p)
            self._memo[key] = {int(k): int(vec[k]) for k in np.flatnonzero(vec)}
        return self._memo[key]

    def mul(self, x, y):
        out = np.zeros(self.dim, dtype=np.int64)
        for s in np.flatnonzero(x):
            for t in np.flatnonzero(y):
                c = x[s] * y[t] % self.p
                for k, v in self.basis_mul(int(s), int(t)).items():
                    out[k] = (out[k] + c * v) % self.p
        return out

    def idempotent(self, lam):
        lam = tuple(lam)
        pairs = tuple(sorted((i, i) for i, c in enumerate(lam) for _ in range(c)))
        return self.element({self.space.index[pairs]: 1})

    def weight_idempotents(self):
        return {lam: self.idempotent(lam) for lam in compositions(self.n, self.d)}

    def unit(self):
        return sum(self.weight_idempotents().values()) % self.p

    def generator(self, label):
        kind, i, r = label
        move = (i - 1, i) if kind == "E" else (i, i - 1)
        out = {}
        for nu in compositions(self.n, self.d - r):
            pairs = [move] * r + [(j, j) for j, c in enumerate(nu) for _ in range(c)]
            out[self.space.index[tuple(sorted(pairs))]] = 1
        return self.element(out)

    def labels(self):
        return generator_labels(self.n, self.d)

    def check_associativity(self, triples=200, seed=0):
        rng = np.random.default_rng(seed)
        for _ in range(triples):
            a, b, c = (int(x) for x in rng.integers(0, self.dim, size=3))
            ea, eb, ec = (self.element({t: 1}) for t in (a, b, c))
            if np.any(self.mul(self.mul(ea, eb), ec) != self.mul(ea, self.mul(eb, ec))):
                return False, (a, b, c)
        return True, None

    # -- symmetric group corner --------------------------------------------

    def corner_index(self, sigma):
        """Basis index of ξ_σ = {(σ(j), j)}; σ is a tuple with σ[j] = σ(j)."""
        return self.space.index[tuple(sorted((int(s), j) for j, s in enumerate(sigma)))]

    def symgroup_corner(self):
        """Map σ -> basis index of e_ω S e_ω; checked multiplicative on all pairs."""
        if self.n < self.d:
            raise ValueError("the corner needs n >= d")
        perms = list(itertools.permutations(range(self.d)))
        table = {s: self.corner_index(s) for s in perms}
        for s in perms:
            for t in perms:
                st = tuple(s[t[j]] for j in range(self.d))
                if self.basis_mul(table[s], table[t]) != {table[st]: 1}:
                    raise AssertionError(f"corner map not multiplicative at {s}, {t}")
        return table

    # -- structure constant cache ---------------------------------------------

    def dump_structure(self, stream, all_pairs=False):
        pairs = itertools.product(range(self.dim), repeat=2) if all_pairs else list(self._memo)
        triples = []
        for s, t in pairs:
            for k, v in self.basis_mul(s, t).items():
                triples.append((s, t, k, v))
        head = json.dumps({"p": self.p, "n": self.n, "d": self.d, "dim": self.dim}).encode()
        stream.write(struct.pack("<I", len(head)) + head)
        ff.write_record(stream, np.array(triples, dtype=np.int64).reshape(-1, 4), max(self.p, self.dim + 1))

    def load_structure(self, stream):
        (size,) = struct.unpack("<I", stream.read(4))
        head = json.loads(stream.read(size))
        if (head["p"], head["n"], head["d"], head["dim"]) != (self.p, self.n, self.d, self.dim):
            raise ValueError("structure cache belongs to a different algebra")
        triples, _ = ff.read_record(stream)
        memo = {}
        for s, t, k, v in triples:
            memo.setdefault((int(s), int(t)), {})[int(k)] = int(v)
        self._memo.update(memo)
        return len(memo)


@lru_cache(maxsize=None)
def schur_algebra(n, d, p):
    return SchurAlg(n, d, p)


build_schur_algebra = schur_algebra


def weight_idempotents(alg):
    return alg.weight_idempotents()


def symgroup_corner(alg):
    return alg.symgroup_corner()


# --- representables and Yoneda ------------------------------------------------


class _Rep:
    """Γ^d Hom(k^m, k^n) with sparse post-composition action of S(n,d) generators."""

    def __init__(self, n, m, d, p):
        self.n, self.m, self.d, self.p = n, m, d, p
        self.space = _space(n, m, d)
        lift = self.space.lift_h(p)
        self.act = {}
        for lab in generator_labels(n, d):
            prod = ff.matmul(w_matrix(n, d, lab, p), lift, p)
            self.act[lab] = sp.csr_matrix(self.space.coords_h(prod, p, self.space.dim))
        self.weights = [self.space.target_weight(t) for t in range(self.space.dim)]
        self.sources = [self.space.source_weight(t) for t in range(self.space.dim)]


@lru_cache(maxsize=16)
def _rep(n, m, d, p):
    return _Rep(n, m, d, p)


def representable(alg, m):
    """Γ^d Hom(k^m, k^n) as a module over S(n,d) by post-composition."""
    dim = comb(alg.n * m + alg.d - 1, alg.d)
    if dim > DENSE_GUARD:
        raise ValueError(f"representable of dimension {dim} exceeds the guard {DENSE_GUARD}")
    rep = _rep(alg.n, m, alg.d, alg.p)
    gens = [(lab, rep.act[lab].toarray()) for lab in alg.labels()]
    return ModAction(alg.p, dim, gens, ("S", alg.n, alg.d), rep.weights, f"Rep(k^{m})")


def regular_module(alg):
    return representable(alg, alg.n)


def _diag_generator(lam, n):
    """u_λ: sends the j-th nonzero source slot to target index (its rank)."""
    pairs = []
    slot = 0
    for j, c in enumerate(lam):
        if c:
            pairs += [(slot, j)] * c
            slot += 1
    mu = [0] * n
    for t, _ in pairs:
        mu[t] += 1
    return tuple(sorted(pairs)), tuple(mu)


def yoneda_evaluate(y, m):
    """Hom_{S(n,d)}(Γ^d Hom(k^m, k^n), y) as a module over S(m,d) by pre-composition."""
    tag, n, d = y.algebra_id
    if tag != "S":
        raise ValueError("yoneda_evaluate needs a Schur algebra module")
    p = y.p
    size = comb(n * m + d - 1, d)
    if size * max(y.dim, 1) > 5 * 10**7:
        raise ValueError("yoneda evaluation exceeds the size guard")
    if n < d:
        return _yoneda_general(y, m)
    rep = _rep(n, m, d, p)
    space = rep.space
    yblocks = y.blocks()
    fams, fweights = [], []
    for lam in compositions(m, d):
        u, mu = _diag_generator(lam, n)
        yix = yblocks.get(mu)
        if yix is None or len(yix) == 0:
            continue
        homs = _cyclic_homs(rep, y, space.index[u], lam, yix)
        fams.append(homs)
        fweights += [lam] * homs.shape[0]
    if not fams:
        return ModAction(p, 0, [(lab, ff.zeros(0, 0)) for lab in generator_labels(m, d)], ("S", m, d), [], "")
    homs = np.concatenate(fams, axis=0)
    for lab in generator_labels(n, d):
        left = ff.matmul(homs.reshape(-1, space.dim), rep.act[lab], p).reshape(homs.shape)
        k, dy, nn = homs.shape
        right = ff.matmul(y.gen(lab), homs.transpose(1, 0, 2).reshape(dy, k * nn), p)
        right = right.reshape(dy, k, nn).transpose(1, 0, 2)
        if np.any(left != right):
            raise AssertionError(f"Yoneda map fails to intertwine {lab}")
    # coordinates: value of a hom at u_λ', read on the e_μ' block of y
    probes = []
    for lam in compositions(m, d):
        u, mu = _diag_generator(lam, n)
        if mu in yblocks:
            probes.append((space.index[u], yblocks[mu]))
    gens = []
    for lab in generator_labels(m, d):
        cols = []
        for t, _ in probes:
            prod = ff.matmul(space.matrix({t: 1}, p), w_matrix(m, d, lab, p), p)
            cols.append(space.coords(prod, p))
        vals = ff.matmul(homs.reshape(-1, space.dim), np.stack(cols, axis=1), p).reshape(homs.shape[0], y.dim, -1)
        mat = np.concatenate([vals[:, yix, c].T for c, (_, yix) in enumerate(probes)], axis=0)
        gens.append((lab, mat))
    return ModAction(p, homs.shape[0], gens, ("S", m, d), fweights, f"{y.name}(k^{m})")


def _cyclic_homs(rep, y, u, lam, yix):
    """Homs out of the cyclic block with source content λ, one per basis vector of e_μ y."""
    p = y.p
    block = np.array([t for t in range(rep.space.dim) if rep.sources[t] == lam], dtype=np.int64)
    pos = {int(t): k for k, t in enumerate(block)}
    acts = {lab: rep.act[lab][block][:, block].tocsr() for lab in rep.act}
    wts = [rep.weights[t] for t in block]
    groups = {}
    for k, w in enumerate(wts):
        groups.setdefault(w, []).append(k)
    groups = {w: np.array(ix) for w, ix in groups.items()}
    spaces = {w: ff.Echelon(len(ix), p) for w, ix in groups.items()}
    accepted = {w: ([], []) for w in groups}  # raw vectors, images in y

    start = ff.zeros(len(block), 1)
    start[pos[u], 0] = 1
    img0 = ff.zeros(y.dim, len(yix))
    img0[yix, np.arange(len(yix))] = 1

    def offer(vecs, imgs):
        """vecs: block-coordinate columns; imgs: list of y-images. Returns accepted pairs."""
        taken = []
        for w, ix in groups.items():
            part = vecs[ix]
            nz = np.flatnonzero(np.any(part != 0, axis=0))
            if nz.size == 0:
                continue
            red = spaces[w].reduce(part[:, nz].T).T
            _, piv = ff.rref(red, p)
            if not piv:
                continue
            chosen = nz[piv]
            spaces[w].add(part[:, chosen].T)
            for c in chosen:
                accepted[w][0].append(part[:, c])
                accepted[w][1].append(imgs[c])
                full = ff.zeros(len(block), 1)
                full[ix, 0] = part[:, c]
                taken.append((full, imgs[c]))
        return taken

    frontier = offer(start, [img0])
    while frontier:
        nxt = []
        batch = np.concatenate([v for v, _ in frontier], axis=1)
        for lab, a in acts.items():
            out = ff.matmul(a, batch, p)
            ya = y.gen(lab)
            imgs = [ff.matmul(ya, im, p) for _, im in frontier]
            nxt += offer(out, imgs)
        frontier = nxt
    homs = np.zeros((len(yix), y.dim, rep.space.dim), dtype=np.int64)
    for w, ix in groups.items():
        raw, imgs = accepted[w]
        if len(raw) != len(ix):
            raise AssertionError("block is not cyclic on the diagonal generator")
        inv = ff.inverse(np.stack(raw, axis=1), p)
        stack = np.stack(imgs, axis=0)  # (t, ydim, v)
        t, dy, nv = stack.shape
        vals = ff.matmul(stack.reshape(t, dy * nv).T, inv, p).reshape(dy, nv, -1).transpose(1, 0, 2)
        homs[:, :, block[ix]] = vals
    return homs


def _yoneda_general(y, m):
    """Plain intertwiner solve; only used when n < d."""
    from .modules import hom_basis

    tag, n, d = y.algebra_id
    p = y.p
    alg = schur_algebra(n, d, p)
    r = representable(alg, m)
    rep = _rep(n, m, d, p)
    space = rep.space
    homs = hom_basis(r, y)
    blocks = []
    weights = []
    for lam in compositions(m, d):
        mask = np.array([s == lam for s in rep.sources])
        part = (homs * mask[None, None, :]).reshape(homs.shape[0], -1)
        rows = ff.row_basis(part, p)
        blocks.append(rows)
        weights += [lam] * rows.shape[0]
    basis = np.concatenate(blocks, axis=0)
    _, piv = ff.rref(basis, p)
    gens = []
    for lab in generator_labels(m, d):
        pre = _precompose_matrix(space, lab, m, d, p)
        moved = ff.matmul(basis.reshape(-1, space.dim), pre, p).reshape(basis.shape[0], -1)
        gens.append((lab, moved[:, piv].T.copy()))
    return ModAction(p, basis.shape[0], gens, ("S", m, d), weights, f"{y.name}(k^{m})")


def _precompose_matrix(space, lab, m, d, p):
    """Matrix of η -> η ∘ ξ on Γ^d Hom(k^m, k^n) for a generator ξ of S(m,d)."""
    g = w_matrix(m, d, lab, p)
    cols = []
    for t in range(space.dim):
        cols.append(space.coords(ff.matmul(space.matrix({t: 1}, p), g, p), p))
    return np.stack(cols, axis=1)
