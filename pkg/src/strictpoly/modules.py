"""Finite-dimensional modules given by generator matrices.

A module is a list of labelled square matrices over F_p acting on column
vectors.  Two algebra tags get relation checks:

* ``("kS", d)``: labels ``("s", i)`` for the adjacent transpositions.
* ``("S", n, d)``: labels ``("E", i, r)`` and ``("F", i, r)`` for divided
  powers of the raising/lowering maps, plus optional ``("e", weight)``
  idempotents.  These modules carry a weight for every basis vector and the
  weight idempotents act diagonally, so they never need to be stored.

Everything randomized takes an explicit seed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import sympy

from . import ff

WORD_LEN = 8
BUDGET = 64
EXHAUSTIVE_LIMIT = 4096
NORTON_POINTS = 512


class AlgebraMismatch(ValueError):
    pass


@dataclass(eq=False)
class ModAction:
    p: int
    dim: int
    gens: list
    algebra_id: tuple
    weights: list | None = None
    name: str = ""
    _blocks: dict | None = field(default=None, repr=False)

    def __post_init__(self):
        self.gens = [(lab, ff.asmat(m, self.p).reshape(self.dim, self.dim)) for lab, m in self.gens]
        if self.weights is not None:
            self.weights = [tuple(w) for w in self.weights]
            if len(self.weights) != self.dim:
                raise ValueError("one weight per basis vector required")

    # -- access -------------------------------------------------------------

    def gen(self, label):
        for lab, m in self.gens:
            if lab == label:
                return m
        raise KeyError(label)

    def labels(self):
        return [lab for lab, _ in self.gens]

    def blocks(self):
        """Basis indices grouped by weight, in order of first appearance."""
        if self.weights is None:
            return {None: np.arange(self.dim)}
        if self._blocks is None:
            out = {}
            for i, w in enumerate(self.weights):
                out.setdefault(w, []).append(i)
            self._blocks = {w: np.array(ix, dtype=np.int64) for w, ix in out.items()}
        return self._blocks

    def weight_projection(self, w):
        m = ff.zeros(self.dim, self.dim)
        ix = self.blocks().get(tuple(w), [])
        m[ix, ix] = 1
        return m

    def all_matrices(self):
        """Generators plus weight projections (used for random algebra elements)."""
        mats = [m for _, m in self.gens]
        if self.weights is not None and len(self.blocks()) > 1:
            mats += [self.weight_projection(w) for w in self.blocks()]
        return mats

    def character(self):
        if self.weights is None:
            return None
        return {w: len(ix) for w, ix in self.blocks().items()}

    def transpose(self):
        """Same space with every generator transposed (the dual lattice)."""
        return ModAction(self.p, self.dim, [(lab, m.T.copy()) for lab, m in self.gens], self.algebra_id,
                         self.weights, self.name + "^T")

    def check(self):
        check_relations(self)
        return self

    def __repr__(self):
        return f"ModAction({self.name or '?'}, dim={self.dim}, {self.algebra_id}, p={self.p})"


@dataclass(eq=False)
class ModMorphism:
    source: ModAction
    target: ModAction
    mat: np.ndarray

    def check(self):
        p = self.source.p
        for (lab, a), (lab2, b) in zip(self.source.gens, self.target.gens):
            if lab != lab2:
                raise AlgebraMismatch(f"generator labels differ: {lab} vs {lab2}")
            if np.any((ff.matmul(self.mat, a, p) - ff.matmul(b, self.mat, p)) % p):
                return False
        return True

    def is_invertible(self):
        return ff.is_invertible(self.mat, self.source.p)


def _labels_match(m, n):
    if m.algebra_id != n.algebra_id or m.p != n.p:
        raise AlgebraMismatch(f"{m.algebra_id}/p={m.p} vs {n.algebra_id}/p={n.p}")
    if m.labels() != n.labels():
        raise AlgebraMismatch("generator labels differ")


# --- relation checks -----------------------------------------------------------


def check_relations(m):
    tag = m.algebra_id[0] if m.algebra_id else None
    if tag == "kS":
        _check_coxeter(m)
    elif tag == "S":
        _check_schur(m)


def _check_coxeter(m):
    p = m.p
    s = {lab[1]: a for lab, a in m.gens if lab[0] == "s"}
    eye = ff.identity(m.dim)
    for i, a in s.items():
        if np.any(ff.matmul(a, a, p) != eye):
            raise ValueError(f"s{i}^2 != 1")
        for j, b in s.items():
            ab = ff.matmul(a, b, p)
            ba = ff.matmul(b, a, p)
            if abs(i - j) > 1 and np.any(ab != ba):
                raise ValueError(f"s{i}, s{j} do not commute")
            if j == i + 1 and np.any(ff.matmul(ab, a, p) != ff.matmul(ba, b, p)):
                raise ValueError(f"braid relation fails for s{i}, s{j}")


def _check_schur(m):
    if m.weights is None:
        raise ValueError("Schur algebra modules need weights")
    if m.dim == 0:
        return
    p = m.p
    wt = np.array(m.weights, dtype=np.int64).reshape(m.dim, -1)
    n = wt.shape[1]
    for lab, a in m.gens:
        rows, cols = np.nonzero(a)
        if lab[0] in ("E", "F"):
            _, i, r = lab
            shift = np.zeros(n, dtype=np.int64)
            sgn = 1 if lab[0] == "E" else -1
            shift[i - 1] += sgn * r
            shift[i] -= sgn * r
            if np.any(wt[rows] - wt[cols] != shift):
                raise ValueError(f"{lab} does not shift weights correctly")
        elif lab[0] == "e":
            if np.any(rows != cols) or np.any(a != np.diag([1 if w == tuple(lab[1]) else 0 for w in m.weights])):
                raise ValueError(f"{lab} is not the weight idempotent")
    if m.dim > 400:
        return
    labs = set(m.labels())
    for i in range(1, n):
        if ("E", i, 1) in labs and ("F", i, 1) in labs:
            e, f = m.gen(("E", i, 1)), m.gen(("F", i, 1))
            h = np.diag((wt[:, i - 1] - wt[:, i]) % p)
            if np.any((ff.matmul(e, f, p) - ff.matmul(f, e, p) - h) % p):
                raise ValueError(f"[E{i}, F{i}] != H{i}")


# --- subspaces, submodules, quotients ---------------------------------------


@dataclass(eq=False)
class Submodule:
    basis: np.ndarray  # columns, in the parent's coordinates
    module: ModAction

    @property
    def dim(self):
        return self.basis.shape[1]


@dataclass(eq=False)
class Quotient:
    proj: np.ndarray  # (dim quotient) x (dim parent)
    section: np.ndarray  # parent coordinates of the complement basis
    module: ModAction


def weight_adapt(m, basis):
    """Re-express a submodule basis as weight vectors grouped by weight."""
    basis = ff.asmat(basis, m.p).reshape(m.dim, -1)
    if m.weights is None:
        return ff.image(basis, m.p)
    cols = []
    for _, ix in m.blocks().items():
        part = ff.image(basis[ix], m.p)
        if part.shape[1]:
            full = ff.zeros(m.dim, part.shape[1])
            full[ix] = part
            cols.append(full)
    return np.concatenate(cols, axis=1) if cols else ff.zeros(m.dim, 0)


def _basis_weights(m, basis):
    if m.weights is None:
        return None
    out = []
    for j in range(basis.shape[1]):
        i = int(np.flatnonzero(basis[:, j])[0])
        out.append(m.weights[i])
    return out


def restrict(m, basis, name=""):
    """Action on an invariant subspace given by a weight-adapted column basis."""
    p = m.p
    c = ff.left_inverse(basis, p)
    gens = [(lab, ff.matmul(c, ff.matmul(a, basis, p), p)) for lab, a in m.gens]
    return ModAction(p, basis.shape[1], gens, m.algebra_id, _basis_weights(m, basis), name)


def submodule(m, basis, name=""):
    basis = weight_adapt(m, basis)
    return Submodule(basis, restrict(m, basis, name))


def quotient(m, basis, name=""):
    """Quotient by the invariant subspace spanned by ``basis``."""
    p = m.p
    basis = weight_adapt(m, basis)
    k = basis.shape[1]
    _, piv = ff.rref(basis.T, p) if k else (None, [])
    comp_ix = [i for i in range(m.dim) if i not in set(piv)]
    comp = ff.zeros(m.dim, len(comp_ix))
    comp[comp_ix, range(len(comp_ix))] = 1
    full = np.concatenate([basis, comp], axis=1)
    inv = ff.inverse(full, p)
    proj = inv[k:]
    gens = [(lab, ff.matmul(proj, ff.matmul(a, comp, p), p)) for lab, a in m.gens]
    weights = None if m.weights is None else [m.weights[i] for i in comp_ix]
    return Quotient(proj, comp, ModAction(p, len(comp_ix), gens, m.algebra_id, weights, name))


def is_stable(m, basis):
    p = m.p
    return all(ff.in_span(basis, ff.matmul(a, basis, p), p) for _, a in m.gens)


def spin(m, seeds):
    """Smallest invariant subspace containing the seed columns."""
    p = m.p
    seeds = ff.asmat(seeds, p).reshape(m.dim, -1)
    blocks = m.blocks()
    spaces = {w: ff.Echelon(len(ix), p) for w, ix in blocks.items()}
    frontier = []
    for w, ix in blocks.items():
        new = spaces[w].add(seeds[ix].T)
        if new.shape[0]:
            frontier.append((w, new))
    mats = [a for _, a in m.gens]
    while frontier:
        nxt = []
        for w, rows in frontier:
            ix = blocks[w]
            for a in mats:
                out = ff.matmul(a[:, ix], rows.T, p)
                for w2, ix2 in blocks.items():
                    part = out[ix2]
                    if part.any():
                        new = spaces[w2].add(part.T)
                        if new.shape[0]:
                            nxt.append((w2, new))
        frontier = nxt
    cols = []
    for w, ix in blocks.items():
        sp_ = spaces[w]
        if sp_.dim:
            full = ff.zeros(m.dim, sp_.dim)
            full[ix] = sp_.basis()
            cols.append(full)
    basis = np.concatenate(cols, axis=1) if cols else ff.zeros(m.dim, 0)
    return Submodule(basis, restrict(m, basis))


# --- constructions -----------------------------------------------------------


def direct_sum(*mods, name=""):
    first = mods[0]
    for x in mods[1:]:
        _labels_match(first, x)
    gens = []
    for j, lab in enumerate(first.labels()):
        mats = [x.gens[j][1] for x in mods]
        gens.append((lab, np.asarray(sp.block_diag(mats).toarray(), dtype=np.int64)))
    weights = None
    if all(x.weights is not None for x in mods):
        weights = [w for x in mods for w in x.weights]
    return ModAction(first.p, sum(x.dim for x in mods), gens, first.algebra_id, weights, name)


def change_basis(m, b, name=""):
    """Module in the basis given by the columns of the invertible ``b``."""
    p = m.p
    inv = ff.inverse(b, p)
    gens = [(lab, ff.matmul(inv, ff.matmul(a, b, p), p)) for lab, a in m.gens]
    return ModAction(p, m.dim, gens, m.algebra_id, _basis_weights(m, b) if m.weights else None, name)


# --- hom spaces --------------------------------------------------------------


def _unknowns(m, n):
    """Flat column-major indices (into vec of a n.dim x m.dim matrix) allowed by weights."""
    if m.weights is None or n.weights is None:
        return np.arange(n.dim * m.dim)
    bm = m.blocks()
    out = []
    for w, rows in n.blocks().items():
        cols = bm.get(w)
        if cols is None:
            continue
        out.append((cols[None, :] * n.dim + rows[:, None]).ravel())
    if not out:
        return np.zeros(0, dtype=np.int64)
    return np.sort(np.concatenate(out))


def hom_basis(m, n, rng=None):
    """Basis of Hom(m, n) as an array of shape (k, n.dim, m.dim)."""
    _labels_match(m, n)
    p = m.p
    unk = _unknowns(m, n)
    u = len(unk)
    if u == 0:
        return np.zeros((0, n.dim, m.dim), dtype=np.int64)
    sol = ff.identity(u)
    eye_m = sp.identity(m.dim, dtype=np.int64, format="csr")
    eye_n = sp.identity(n.dim, dtype=np.int64, format="csr")
    for (_, a), (_, b) in zip(m.gens, n.gens):
        # vec(b X - X a) = (I ⊗ b - aᵀ ⊗ I) vec(X), column-major vec
        op = sp.kron(eye_m, sp.csr_matrix(b)) - sp.kron(sp.csr_matrix(a.T), eye_n)
        op = op.tocsc()[:, unk].tocsr()
        op.data %= p
        op.eliminate_zeros()
        live = np.flatnonzero(np.diff(op.indptr))
        if live.size == 0:
            continue
        res = ff.matmul(op[live], sol, p)
        ker = ff.kernel(res, p, rng)
        sol = ff.matmul(sol, ker, p)
        if sol.shape[1] == 0:
            break
    k = sol.shape[1]
    out = np.zeros((k, n.dim * m.dim), dtype=np.int64)
    out[:, unk] = sol.T
    return out.reshape(k, m.dim, n.dim).transpose(0, 2, 1).copy()


def hom_space(m, n):
    return [ModMorphism(m, n, x) for x in hom_basis(m, n)]


def hom_dim(m, n):
    return hom_basis(m, n).shape[0]


def end_dim(m):
    return hom_dim(m, m)


def _combine(basis, coeffs, p):
    return np.tensordot(np.asarray(coeffs, dtype=np.int64), basis, axes=1) % p


def projective_points(k, p):
    """Coefficient vectors of F_p^k with first nonzero entry 1."""
    for lead in range(k):
        for tail in itertools.product(range(p), repeat=k - lead - 1):
            yield (0,) * lead + (1,) + tail


# --- isomorphism ---------------------------------------------------------------


@dataclass
class IsoResult:
    iso: bool | None
    witness: ModMorphism | None = None
    reason: str = ""

    def __bool__(self):
        return bool(self.iso)


def _class_words(d):
    """Adjacent-transposition words for one element of every cycle type of S_d."""
    from .combin import partitions

    words = []
    for lam in partitions(d):
        word, start = [], 1
        for part in lam:
            word += list(range(start, start + part - 1))
            start += part
        words.append((lam, word))
    return words


def kS_character(m):
    """Traces (mod p) of one element per cycle type; group modules only."""
    p = m.p
    d = m.algebra_id[1]
    out = {}
    for lam, word in _class_words(d):
        g = ff.identity(m.dim)
        for i in word:
            g = ff.matmul(g, m.gen(("s", i)), p)
        out[lam] = int(np.trace(g) % p)
    return out


def is_isomorphic(m, n, seed=0, simples=None):
    _labels_match(m, n)
    p = m.p
    if m.dim != n.dim:
        return IsoResult(False, reason=f"dimension {m.dim} != {n.dim}")
    if m.weights is not None and n.weights is not None and m.character() != n.character():
        return IsoResult(False, reason="weight characters differ")
    if m.algebra_id[0] == "kS":
        cm, cn = kS_character(m), kS_character(n)
        if cm != cn:
            bad = next(k for k in cm if cm[k] != cn[k])
            return IsoResult(False, reason=f"character differs on cycle type {bad}: {cm[bad]} vs {cn[bad]}")
    if m.dim == 0:
        return IsoResult(True, ModMorphism(m, n, ff.zeros(0, 0)), "zero modules")
    rng = np.random.default_rng(seed)
    hb = hom_basis(m, n, rng)
    k = hb.shape[0]
    if k == 0:
        return IsoResult(False, reason="Hom(M, N) = 0")
    ek = end_dim(m)
    if ek != k:
        return IsoResult(False, reason=f"dim Hom(M, N) = {k} but dim End(M) = {ek}")
    cands = [rng.integers(0, p, size=k) for _ in range(BUDGET)]
    cands += [np.eye(k, dtype=np.int64)[i] for i in range(k)]
    cands += [np.eye(k, dtype=np.int64)[i] + np.eye(k, dtype=np.int64)[j] for i in range(k) for j in range(i + 1, k)]
    for c in cands:
        x = _combine(hb, c, p)
        if ff.is_invertible(x, p):
            return IsoResult(True, ModMorphism(m, n, x), "invertible intertwiner")
    if p ** k <= EXHAUSTIVE_LIMIT:
        for c in projective_points(k, p):
            x = _combine(hb, c, p)
            if ff.is_invertible(x, p):
                return IsoResult(True, ModMorphism(m, n, x), "invertible intertwiner")
        return IsoResult(False, reason=f"no invertible element among all {p}^{k} points of Hom(M, N)")
    if simples:
        for lab, s in simples:
            if hom_dim(m, s) != hom_dim(n, s):
                return IsoResult(False, reason=f"multiplicity of {lab} in the top differs")
            if hom_dim(s, m) != hom_dim(s, n):
                return IsoResult(False, reason=f"multiplicity of {lab} in the socle differs")
    fm = composition_factors(m, seed)
    fn = composition_factors(n, seed)
    if not same_factors(fm, fn):
        return IsoResult(False, reason="composition factors differ")
    return IsoResult(None, reason="inconclusive: random search exhausted")


def simple_iso(a, b):
    """Isomorphism test for two modules known to be simple."""
    return a.dim == b.dim and (a.character() == b.character()) and hom_dim(a, b) > 0


def same_factors(fa, fb):
    rest = list(fb)
    for x in fa:
        hit = next((i for i, y in enumerate(rest) if simple_iso(x, y)), None)
        if hit is None:
            return False
        rest.pop(hit)
    return not rest


# --- simplicity (Meataxe with Norton's criterion) ------------------------------


@dataclass
class SimpleResult:
    simple: bool | None
    witness: np.ndarray | None = None  # basis of a proper invariant subspace
    detail: str = ""

    def __bool__(self):
        return bool(self.simple)


def _roots(poly, p):
    if p <= 2000:
        xs = np.arange(p, dtype=np.int64)
        acc = np.zeros(p, dtype=np.int64)
        for c in poly:
            acc = (acc * xs + c) % p
        return [int(x) for x in np.flatnonzero(acc == 0)]
    x = sympy.symbols("x")
    fac = sympy.Poly(poly, x, modulus=p).factor_list()[1]
    return sorted(int(-f.all_coeffs()[1]) % p for f, _ in fac if f.degree() == 1)


def _random_element(mats, rng, p):
    dim = mats[0].shape[0]
    out = ff.zeros(dim, dim)
    for _ in range(3):
        length = int(rng.integers(1, WORD_LEN + 1))
        w = mats[int(rng.integers(len(mats)))]
        for _ in range(length - 1):
            w = ff.matmul(w, mats[int(rng.integers(len(mats)))], p)
        out = (out + int(rng.integers(1, p)) * w) % p
    return out


def _sweep_elements(mats, p):
    for a in mats:
        yield a
    for a, b in itertools.combinations(mats, 2):
        yield (a + b) % p
        yield ff.matmul(a, b, p)


def _norton_test(m, block, a_w, c):
    """Spin every kernel point of θ and of θᵀ; returns a witness basis or None."""
    p = m.p
    ix = m.blocks()[block]
    shifted = (a_w - c * ff.identity(len(ix))) % p
    for mod, mat, dual in ((m, shifted, False), (m.transpose(), shifted.T, True)):
        ker = ff.kernel(mat, p)
        for coeffs in projective_points(ker.shape[1], p):
            v = ff.zeros(m.dim, 1)
            v[ix, 0] = ff.matmul(ker, np.array(coeffs, dtype=np.int64).reshape(-1, 1), p)[:, 0]
            sub = spin(mod, v)
            if sub.dim < m.dim:
                if not dual:
                    return sub.basis
                # annihilator of an invariant subspace of the dual
                return ff.kernel(sub.basis.T, p)
    return None


def certify_simple(m, seed=0):
    if m.dim == 0:
        raise ValueError("zero module")
    if m.dim == 1:
        return SimpleResult(True, detail="dimension 1")
    p = m.p
    rng = np.random.default_rng(seed)
    blocks = m.blocks()
    mats = m.all_matrices()
    small = sorted(blocks, key=lambda w: len(blocks[w]))
    if m.weights is not None and len(blocks[small[0]]) == 1:
        w = small[0]
        res = _norton_test(m, w, ff.zeros(1, 1), 0)
        return _verdict(m, res, f"θ = 1 - e_{w}")
    best = None

    def consider(a):
        nonlocal best
        for w in (small[:3] if m.weights is not None else [None]):
            ix = blocks[w]
            a_w = a[np.ix_(ix, ix)]
            for c in _roots(ff.charpoly(a_w, p), p):
                nul = len(ix) - ff.rank((a_w - c * ff.identity(len(ix))) % p, p)
                if best is None or nul < best[0]:
                    best = (nul, w, a_w, c)
        return best is not None and best[0] == 1

    done = False
    for _ in range(BUDGET):
        if consider(_random_element(mats, rng, p)):
            done = True
            break
    if not done:
        for a in _sweep_elements(mats, p):
            if consider(a):
                break
    if best is None or (p ** best[0] - 1) // (p - 1) > NORTON_POINTS:
        return SimpleResult(None, detail="no singular element of small nullity found")
    nul, w, a_w, c = best
    res = _norton_test(m, w, a_w, c)
    return _verdict(m, res, f"nullity {nul} at weight {w}, eigenvalue {c}")


def _verdict(m, res, detail):
    if res is None:
        return SimpleResult(True, detail=f"Norton criterion ({detail})")
    return SimpleResult(False, weight_adapt(m, res), detail=f"invariant subspace of dim {res.shape[1]}")


def composition_factors(m, seed=0):
    """Simple subquotients of a composition series (list of ModActions)."""
    out = []
    todo = [m]
    step = 0
    while todo:
        x = todo.pop()
        if x.dim == 0:
            continue
        res = certify_simple(x, seed + step)
        step += 1
        if res.simple is None:
            raise RuntimeError(f"could not decide simplicity of a {x.dim}-dimensional subquotient")
        if res.simple:
            out.append(x)
            continue
        todo.append(quotient(x, res.witness).module)
        todo.append(restrict(x, res.witness))
    return out


# --- radical and top -------------------------------------------------------------


def radical_top(m, simples, check=True):
    """Radical as the common kernel of all maps to simples, and the top M/rad.

    ``simples`` is a list of ``(label, module)``.  Returns
    ``(rad_basis, top_quotient, multiplicities)``.
    """
    p = m.p
    rows = []
    mult = {}
    for lab, s in simples:
        hb = hom_basis(m, s)
        mult[lab] = hb.shape[0] // max(end_dim(s), 1)
        if hb.shape[0]:
            rows.append(hb.reshape(-1, m.dim))
    rad = ff.kernel(np.concatenate(rows, axis=0), p) if rows else ff.identity(m.dim)
    rad = weight_adapt(m, rad)
    top = quotient(m, rad)
    if check:
        expected = sum(mult[lab] * s.dim for lab, s in simples)
        if top.module.dim != expected:
            raise ValueError("top is not semisimple: simple list incomplete")
        for f in composition_factors(m):
            if not any(simple_iso(f, s) for _, s in simples):
                raise ValueError(f"a {f.dim}-dimensional composition factor is missing from the simple list")
    return rad, top, {k: v for k, v in mult.items() if v}


# --- Fitting decomposition -------------------------------------------------------


@dataclass(eq=False)
class Summand:
    basis: np.ndarray
    module: ModAction
    certified: bool
    flag: str = ""

    @property
    def dim(self):
        return self.module.dim


def _factor(poly, p):
    x = sympy.symbols("x")
    _, fac = sympy.Poly(poly, x, modulus=p).factor_list()
    return [([int(c) % p for c in f.all_coeffs()], e) for f, e in fac]


def _poly_power(coeffs, e, p):
    out = [1]
    for _ in range(e):
        out = [int(c) % p for c in np.convolve(out, coeffs)]
    return out


def _local_certificate(endo, p):
    """True when End = k·1 + J with J a nilpotent ideal spanned by b_i - c_i."""
    n = endo.shape[1]
    nil = []
    for b in endo:
        cp = ff.charpoly(b, p)
        c = (-cp[1]) * ff.inv_mod(n, p) % p if n % p else None
        if c is None:
            roots = _roots(cp, p)
            if len(roots) != 1:
                return False
            c = roots[0]
        if cp != _poly_power([1, (-c) % p], n, p):
            return False
        nil.append((b - c * ff.identity(n)) % p)
    flat = np.array([x.ravel() for x in nil]).T
    j = ff.image(flat, p)
    power = j
    for _ in range(n + 1):
        if power.shape[1] == 0:
            return True
        prods = [ff.matmul(power[:, a].reshape(n, n), j[:, b].reshape(n, n), p).ravel()
                 for a in range(power.shape[1]) for b in range(j.shape[1])]
        nxt = ff.image(np.array(prods).T, p)
        if not ff.in_span(j, nxt, p):
            return False
        power = nxt
    return power.shape[1] == 0


def fitting_decompose(m, seed=0):
    """Split into indecomposable summands via Fitting's lemma on random endomorphisms."""
    rng = np.random.default_rng(seed)
    return _decompose(m, ff.identity(m.dim), rng)


def _decompose(m, emb, rng):
    p = m.p
    if m.dim == 0:
        return []
    endo = hom_basis(m, m, rng)
    k = endo.shape[0]
    if k == 1:
        return [Summand(emb, m, True)]
    cands = [endo[i] for i in range(k)] + [_combine(endo, rng.integers(0, p, size=k), p) for _ in range(BUDGET)]
    for a in cands:
        fac = _factor(ff.charpoly(a, p), p)
        if len(fac) < 2:
            continue
        f1, e1 = fac[0]
        rest = [1]
        for f, e in fac[1:]:
            rest = [int(c) % p for c in np.convolve(rest, _poly_power(f, e, p))]
        k1 = weight_adapt(m, ff.kernel(ff.poly_eval_matrix(_poly_power(f1, e1, p), a, p), p))
        k2 = weight_adapt(m, ff.kernel(ff.poly_eval_matrix(rest, a, p), p))
        if k1.shape[1] + k2.shape[1] != m.dim:
            raise AssertionError("Fitting split does not add up")
        out = []
        for kb in (k1, k2):
            out += _decompose(restrict(m, kb), ff.matmul(emb, kb, p), rng)
        return out
    if _local_certificate(endo, p):
        return [Summand(emb, m, True)]
    return [Summand(emb, m, False, "may be decomposable")]


def summand_projections(summands, p):
    """Projections onto each summand along the others."""
    full = np.concatenate([s.basis for s in summands], axis=1)
    inv = ff.inverse(full, p)
    out, at = [], 0
    for s in summands:
        k = s.basis.shape[1]
        out.append(ff.matmul(s.basis, inv[at : at + k], p))
        at += k
    return out
