"""Strict polynomial functors as construction expressions.

Evaluating an expression at ``k^m`` gives a :class:`Realization`: a module over
S(m,d) presented as a subquotient of an ambient space ``(k^m)^{⊗d} ⊗ k^e``.
It stores a lift ``L`` (ambient x dim) and a coordinate map ``C`` (dim x ambient)
with ``C L = I``; an element acting on the tensor power by ``M`` acts on the
functor by ``C (M ⊗ I_e) L``.  Because any Schur algebra element can be fed in
as an ambient matrix, realizations act by the whole algebra, not just by the
generators kept in the derived :class:`~strictpoly.modules.ModAction`.
"""

from __future__ import annotations

import itertools
import re
import threading
from dataclasses import dataclass, field
from math import comb, prod
from typing import NamedTuple

import numpy as np
import scipy.sparse as sp

from . import ff, modules, schur
from .combin import compositions, conjugate, dominates, fmt, partition, partitions

AMBIENT_GUARD = 2 * 10**5


# --- expressions -------------------------------------------------------------------


class Expr(NamedTuple):
    kind: str
    args: tuple

    def __str__(self):
        return render(self)


class SymExpr(NamedTuple):
    """A kS_d-module built from standard pieces; ``F(e)`` applies the Schur functor."""

    kind: str
    args: tuple
    d: int

    def __str__(self):
        return render_sym(self)

    def build(self, p):
        return _build_sym(self, p)


def render_sym(n):
    if n.kind in ("triv", "sgn", "reg"):
        return f"{n.kind}({n.d})"
    if n.kind in ("M", "D"):
        return f"{n.kind}({','.join(str(x) for x in n.args[0])})"
    if n.kind == "F":
        return f"F({render(n.args[0])})"
    if n.kind == "raw":
        return f"<{n.args[0]}>"
    return f"{n.kind}({', '.join(render_sym(a) for a in n.args)})"


_SYM_MEMO = {}


def _build_sym(n, p):
    from . import symgrp

    key = (n, p)
    if key in _SYM_MEMO:
        return _SYM_MEMO[key]
    k = n.kind
    if k == "triv":
        out = symgrp.trivial(n.d, p)
    elif k == "sgn":
        out = symgrp.sign(n.d, p)
    elif k == "reg":
        out = symgrp.regular(n.d, p)
    elif k == "M":
        out = symgrp.perm_module(n.args[0], p)
    elif k == "D":
        out = symgrp.simple_D(n.args[0], p)
    elif k == "sdual":
        out = symgrp.internal_dual(n.args[0].build(p))
    elif k == "kron":
        out = symgrp.kronecker(n.args[0].build(p), n.args[1].build(p))
    elif k == "F":
        from .adjoints import schur_F

        out = schur_F(realize(n.args[0], n.d, p))
    else:
        raise ValueError(f"unknown module kind {k!r}")
    _SYM_MEMO[key] = out
    return out


LEAVES = {"Gamma", "Sym", "Ext", "Weyl", "L", "P"}


def Gamma(lam):
    return Expr("Gamma", (tuple(lam),))


def Sym(lam):
    return Expr("Sym", (tuple(lam),))


def Ext(lam):
    return Expr("Ext", (tuple(lam),))


def T(d):
    return Expr("T", (d,))


def Q(d):
    return Expr("Q", (d,))


def Weyl(lam):
    return Expr("Weyl", (partition(lam),))


def Simple(lam):
    return Expr("L", (partition(lam),))


def ProjCover(lam):
    return Expr("P", (partition(lam),))


def KuhnDual(e):
    return Expr("dual", (e,))


def ITensor(a, b):
    return Expr("tensor", (a, b))


def IHom(a, b):
    return Expr("ihom", (a, b))


def MonDual(e):
    return Expr("mdual", (e,))


def GTensor(n):
    return Expr("Gtensor", (n,))


def GHom(n):
    return Expr("Ghom", (n,))


def degree(e):
    k = e.kind
    if k in LEAVES:
        return sum(e.args[0])
    if k in ("T", "Q"):
        return e.args[0]
    if k in ("Gtensor", "Ghom"):
        return e.args[0].d
    if k in ("tensor", "ihom"):
        da, db = degree(e.args[0]), degree(e.args[1])
        if da != db:
            raise ValueError(f"degrees differ in {render(e)}: {da} vs {db}")
        return da
    return degree(e.args[0])


def render(e):
    names = {"Gamma": "Gamma", "Sym": "S", "Ext": "Lambda", "Weyl": "Weyl", "L": "L", "P": "P"}
    k = e.kind
    if k in names:
        return f"{names[k]}({','.join(str(x) for x in e.args[0])})"
    if k in ("T", "Q"):
        return f"{k}({e.args[0]})"
    if k in ("Gtensor", "Ghom"):
        return f"{'Gt' if k == 'Gtensor' else 'Gh'}({render_sym(e.args[0])})"
    return f"{k}({', '.join(render(a) for a in e.args)})"


def evaluable(e):
    """Cheap to re-run at a larger evaluation dimension."""
    if e.kind in ("Gamma", "Sym", "Ext", "T", "Q", "Weyl", "L", "Gtensor", "Ghom"):
        return True
    if e.kind == "dual":
        return evaluable(e.args[0])
    return False


# --- surface syntax -------------------------------------------------------------------


class ParseError(ValueError):
    def __init__(self, msg, text, pos):
        super().__init__(f"{msg} at position {pos}: {text[:pos]}⟨here⟩{text[pos:]}")
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")

_FUNCTORS = {"Gamma": Gamma, "S": Sym, "Lambda": Ext, "Weyl": Weyl, "L": Simple, "P": ProjCover}
_UNARY = {"dual": KuhnDual, "mdual": MonDual}
_BINARY = {"tensor": ITensor, "ihom": IHom}


def _tokens(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.group(0).strip() == "":
            break
        start = m.start(m.lastindex)
        out.append((m.group(m.lastindex), start))
        pos = m.end()
    out.append(("", len(text)))
    return out


class _Parser:
    def __init__(self, text, d):
        self.text = text
        self.d = d
        self.toks = _tokens(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, want=None):
        tok, pos = self.toks[self.i]
        if want is not None and tok != want:
            if tok == "":
                raise ParseError(f"unbalanced parenthesis, expected {want!r}", self.text, pos)
            raise ParseError(f"expected {want!r}, found {tok!r}", self.text, pos)
        self.i += 1
        return tok, pos

    def parts(self):
        self.take("(")
        out = []
        while True:
            tok, pos = self.take()
            if not tok.isdigit():
                raise ParseError(f"expected a non-negative integer, found {tok or 'end of input'!r}", self.text, pos)
            out.append(int(tok))
            tok, pos = self.take()
            if tok == ")":
                return tuple(out), pos
            if tok != ",":
                raise ParseError(f"expected ',' or ')', found {tok or 'end of input'!r}", self.text, pos)

    def degree_arg(self, name, pos):
        """Optional ``(d)`` after a degree-only name, else the context degree."""
        if self.peek()[0] == "(":
            self.take("(")
            tok, tpos = self.take()
            if not tok.isdigit() or int(tok) < 1:
                raise ParseError(f"expected a positive degree, found {tok or 'end of input'!r}", self.text, tpos)
            self.take(")")
            d = int(tok)
            if self.d is not None and d != self.d:
                raise ParseError(f"{name} has degree {d}, expected {self.d}", self.text, pos)
            return d
        if self.d is None:
            raise ParseError(f"{name} needs a degree", self.text, pos)
        return self.d

    def expr(self):
        name, pos = self.take()
        if name in _FUNCTORS:
            lam, end = self.parts()
            if name in ("Weyl", "L", "P") and any(a < b for a, b in zip(lam, lam[1:])):
                raise ParseError(f"{fmt(lam)} is not weakly decreasing", self.text, pos)
            if self.d is not None and sum(lam) != self.d:
                raise ParseError(f"{fmt(lam)} has degree {sum(lam)}, expected {self.d}", self.text, pos)
            return _FUNCTORS[name](lam)
        if name in ("Q", "T"):
            d = self.degree_arg(name, pos)
            return Q(d) if name == "Q" else T(d)
        if name in _UNARY:
            self.take("(")
            a = self.expr()
            self.take(")")
            return _UNARY[name](a)
        if name in _BINARY:
            self.take("(")
            a = self.expr()
            self.take(",")
            b = self.expr()
            self.take(")")
            if degree(a) != degree(b):
                raise ParseError(f"degrees differ: {degree(a)} vs {degree(b)}", self.text, pos)
            return _BINARY[name](a, b)
        if name in ("Gt", "Gh"):
            self.take("(")
            n = self.sym()
            self.take(")")
            if self.d is not None and n.d != self.d:
                raise ParseError(f"module has degree {n.d}, expected {self.d}", self.text, pos)
            return GTensor(n) if name == "Gt" else GHom(n)
        raise ParseError(f"unknown functor {name or 'end of input'!r}", self.text, pos)

    def sym(self):
        name, pos = self.take()
        if name in ("triv", "sgn", "reg"):
            return SymExpr(name, (), self.degree_arg(name, pos))
        if name in ("M", "D"):
            lam, _ = self.parts()
            if name == "D" and any(a < b for a, b in zip(lam, lam[1:])):
                raise ParseError(f"{fmt(lam)} is not weakly decreasing", self.text, pos)
            if self.d is not None and sum(lam) != self.d:
                raise ParseError(f"{fmt(lam)} has degree {sum(lam)}, expected {self.d}", self.text, pos)
            return SymExpr(name, (lam,), sum(lam))
        if name == "sdual":
            self.take("(")
            a = self.sym()
            self.take(")")
            return SymExpr("sdual", (a,), a.d)
        if name == "kron":
            self.take("(")
            a = self.sym()
            self.take(",")
            b = self.sym()
            self.take(")")
            if a.d != b.d:
                raise ParseError(f"degrees differ: {a.d} vs {b.d}", self.text, pos)
            return SymExpr("kron", (a, b), a.d)
        if name == "F":
            self.take("(")
            e = self.expr()
            self.take(")")
            return SymExpr("F", (e,), degree(e))
        raise ParseError(f"unknown module {name or 'end of input'!r}", self.text, pos)


def _finish(p, out):
    tok, pos = p.peek()
    if tok != "":
        raise ParseError(f"trailing input {tok!r}", p.text, pos)
    return out


def parse(text, d=None):
    """Parse a functor expression, e.g. ``tensor(Lambda(1,1,1), Q)``."""
    p = _Parser(text, d)
    e = p.expr()
    degree(e)
    return _finish(p, e)


def parse_sym(text, d=None):
    """Parse a symmetric group module expression, e.g. ``kron(sgn, M(2,1))``."""
    p = _Parser(text, d)
    return _finish(p, p.sym())


def parse_expr(text, d=None):
    """Functor expression, or module expression when the text starts with ``F(`` or a module name."""
    head = text.lstrip()
    if re.match(r"(F|triv|sgn|reg|M|D|sdual|kron)\b", head):
        return parse_sym(text, d)
    return parse(text, d)


# --- realizations ---------------------------------------------------------------------


def _dense(x):
    return x.toarray() if sp.issparse(x) else np.asarray(x)


@dataclass(eq=False)
class Realization:
    expr: Expr
    m: int
    d: int
    p: int
    L: object  # ambient x dim (sparse or dense)
    C: object  # dim x ambient
    extra: int
    weights: list
    name: str = ""
    info: dict = field(default_factory=dict)
    _module: modules.ModAction | None = field(default=None, repr=False)

    @property
    def dim(self):
        return self.L.shape[1]

    @property
    def ambient(self):
        return self.m**self.d * self.extra

    def amb(self, mat):
        mat = sp.csr_matrix(mat)
        if self.extra == 1:
            return mat
        return sp.kron(mat, sp.identity(self.extra, dtype=np.int64, format="csr"), format="csr")

    def act(self, mat):
        """Action of the element whose tensor-power matrix is ``mat``."""
        p = self.p
        return _dense(ff.matmul(self.C, ff.matmul(self.amb(mat), self.L, p), p)) % p

    def act_element(self, coeffs):
        space = schur._space(self.m, self.m, self.d)
        return self.act(space.matrix(coeffs, self.p))

    @property
    def module(self):
        if self._module is None:
            gens = [(lab, self.act(schur.w_matrix(self.m, self.d, lab, self.p)))
                    for lab in schur.generator_labels(self.m, self.d)]
            self._module = modules.ModAction(self.p, self.dim, gens, ("S", self.m, self.d), self.weights,
                                             self.name or render(self.expr)).check()
        return self._module

    def check(self, seed=0):
        """Representation sanity check: C M1 (L C - I) M2 L v = 0 on random v."""
        p = self.p
        if np.any(_dense(ff.matmul(self.C, self.L, p)) != np.eye(self.dim, dtype=np.int64)):
            raise AssertionError(f"C L != I for {render(self.expr)}")
        if self.dim == 0:
            return self
        rng = np.random.default_rng(seed)
        v = rng.integers(0, p, size=(self.dim, 2))
        mats = [self.amb(schur.w_matrix(self.m, self.d, lab, p)) for lab in schur.generator_labels(self.m, self.d)]
        lc = ff.matmul(self.L, self.C, p)
        for m2 in mats:
            w = _dense(ff.matmul(m2, _dense(ff.matmul(self.L, v, p)), p))
            w = (_dense(ff.matmul(lc, w, p)) - w) % p
            for m1 in mats:
                if np.any(_dense(ff.matmul(self.C, _dense(ff.matmul(m1, w, p)), p)) % p):
                    raise AssertionError(f"subspace/quotient not stable for {render(self.expr)}")
        return self


def _block_structure(lam):
    starts = np.cumsum((0,) + tuple(lam))[:-1]
    return [(int(s), int(c)) for s, c in zip(starts, lam)]


def _arrangements(multi):
    """Distinct permutations of a sorted tuple with the sign of a sorting permutation."""
    seen = {}
    for perm in itertools.permutations(range(len(multi))):
        seq = tuple(multi[j] for j in perm)
        if seq not in seen:
            seen[seq] = _sign(perm)
    return seen


def _sign(perm):
    s = 1
    perm = list(perm)
    for i in range(len(perm)):
        for j in range(i + 1, len(perm)):
            if perm[i] > perm[j]:
                s = -s
    return s


def _block_basis(m, lam, kind):
    """Canonical sequences and their arrangements for Γ^λ / S^λ / Λ^λ / Q."""
    per_block = []
    for c in lam:
        if kind == "Ext":
            per_block.append(list(itertools.combinations(range(m), c)))
        else:
            per_block.append(list(itertools.combinations_with_replacement(range(m), c)))
    out = []
    for combo in itertools.product(*per_block):
        arrs = [_arrangements(b) for b in combo]
        out.append((sum(combo, ()), arrs))
    return out


def _orbit_matrix(m, d, lam, basis, signed):
    """Sparse ambient x |basis| matrix of (signed) orbit sums."""
    rows, cols, vals = [], [], []
    for k, (_, arrs) in enumerate(basis):
        for pieces in itertools.product(*(a.items() for a in arrs)):
            seq = sum((s for s, _ in pieces), ())
            sgn = prod(g for _, g in pieces) if signed else 1
            rows.append(seq)
            cols.append(k)
            vals.append(sgn)
    idx = schur.word_index(np.array(rows, dtype=np.int64).reshape(len(rows), d), m) if rows else np.zeros(0, dtype=np.int64)
    return sp.csr_matrix((np.array(vals, dtype=np.int64), (idx, np.array(cols, dtype=np.int64))), shape=(m**d, len(basis)))


def _unit_matrix(m, d, basis):
    idx = schur.word_index(np.array([b[0] for b in basis], dtype=np.int64).reshape(len(basis), d), m)
    return sp.csr_matrix((np.ones(len(basis), dtype=np.int64), (idx, np.arange(len(basis)))), shape=(m**d, len(basis)))


def _leaf(kind, lam, m, p, expr):
    d = sum(lam)
    if m**d > AMBIENT_GUARD:
        raise ValueError(f"tensor power of dimension {m**d} exceeds the ambient guard")
    basis = _block_basis(m, lam, "Ext" if kind == "Ext" else "Gamma")
    if kind == "Q":
        basis = [b for b in basis if all(b[0].count(x) < p for x in set(b[0]))]
    weights = [schur.content(b[0], m) for b in basis]
    units = _unit_matrix(m, d, basis)
    if kind == "Gamma":
        L, C = _orbit_matrix(m, d, lam, basis, False), units.T.tocsr()
    elif kind in ("Sym", "Q"):
        L, C = units, _orbit_matrix(m, d, lam, basis, False).T.tocsr()
    else:
        L, C = units, _orbit_matrix(m, d, lam, basis, True).T.tocsr()
    L.data %= p
    C.data %= p
    return Realization(expr, m, d, p, L, C, 1, weights, render(expr))


def _sub_realization(parent, basis, expr, info=None):
    """Realization of an invariant subspace given in parent coordinates."""
    p = parent.p
    basis = modules.weight_adapt(parent.module, basis)
    L = _dense(ff.matmul(parent.L, basis, p))
    C = ff.matmul(ff.left_inverse(basis, p), _dense(parent.C), p)
    wts = modules._basis_weights(parent.module, basis)
    return Realization(expr, parent.m, parent.d, p, L, C, parent.extra, wts, render(expr), info or {})


def _quotient_realization(parent, sub, expr, info=None):
    p = parent.p
    q = modules.quotient(parent.module, sub)
    L = _dense(ff.matmul(parent.L, q.section, p))
    C = ff.matmul(q.proj, _dense(parent.C), p)
    return Realization(expr, parent.m, parent.d, p, L, C, parent.extra, q.module.weights, render(expr), info or {})


def kuhn_dual(r, expr=None):
    expr = expr if expr is not None else KuhnDual(r.expr)
    L = r.C.T.tocsr() if sp.issparse(r.C) else np.ascontiguousarray(r.C.T)
    C = r.L.T.tocsr() if sp.issparse(r.L) else np.ascontiguousarray(r.L.T)
    return Realization(expr, r.m, r.d, r.p, L, C, r.extra, list(r.weights), render(expr))


def highest_weight_vector(lam, m):
    """Canonical sequence of v_λ inside Λ^{λ'}: column j holds 0..λ'_j-1."""
    return sum((tuple(range(c)) for c in conjugate(lam)), ())


def weyl_module(lam, m, p):
    return realize(Weyl(lam), m, p)


def simple_module(lam, m, p):
    return realize(Simple(lam), m, p)


def _weyl(lam, m, p, expr):
    lam = partition(lam)
    if len(lam) > m:
        raise ValueError(f"{fmt(lam)} has more than {m} parts")
    ext = realize(Ext(conjugate(lam)), m, p)
    seq = highest_weight_vector(lam, m)
    idx = schur.word_index(np.array([seq]), m)[0]
    v = _dense(ext.C[:, [idx]]) if sp.issparse(ext.C) else ext.C[:, [idx]]
    sub = modules.spin(ext.module, v)
    return _sub_realization(ext, sub.basis, expr, {"parent": ext, "basis": sub.basis})


def _simple(lam, m, p, expr):
    weyl = realize(Weyl(lam), m, p)
    b = weyl.info["basis"]
    gram = ff.matmul(b.T, b, p)
    rad = ff.kernel(gram, p)
    top = _quotient_realization(weyl, rad, expr)
    top.info["gram_rank"] = weyl.dim - rad.shape[1]
    return top


def _proj_cover(mu, m, p, expr):
    mu = partition(mu)
    gam = realize(Gamma(mu), m, p)
    d = sum(mu)
    target = realize(Simple(mu), m, p).module
    summands = modules.fitting_decompose(gam.module)
    inv = ff.inverse(np.concatenate([s.basis for s in summands], axis=1), p)
    at = np.cumsum([0] + [s.dim for s in summands])
    for k, s in enumerate(summands):
        pr = inv[at[k] : at[k + 1]]
        if modules.hom_dim(s.module, target):
            L = _dense(ff.matmul(gam.L, s.basis, p))
            C = ff.matmul(pr, _dense(gam.C), p)
            wts = modules._basis_weights(gam.module, s.basis)
            r = Realization(expr, m, d, p, L, C, 1, wts, render(expr), {"certified": s.certified})
            _, _, mult = modules.radical_top(r.module, simple_list(m, d, p), check=False)
            if mult != {mu: 1}:
                raise AssertionError(f"top of the summand is {mult}, expected L{fmt(mu)}")
            return r
    raise AssertionError(f"no summand of Gamma{fmt(mu)} maps onto L{fmt(mu)}")


_MEMO = {}
_LOCK = threading.RLock()


def realize(expr, m, p):
    """Evaluate an expression at k^m (memoized, single-flight)."""
    key = (expr, m, p)
    hit = _MEMO.get(key)
    if hit is not None:
        return hit
    with _LOCK:
        hit = _MEMO.get(key)
        if hit is None:
            hit = _build(expr, m, p)
            want = predicted_dim(expr, m)
            if want is not None and hit.dim != want:
                raise AssertionError(f"{render(expr)} at k^{m}: dim {hit.dim}, predicted {want}")
            _MEMO[key] = hit
        return hit


def clear_cache():
    with _LOCK:
        _MEMO.clear()


def _build(expr, m, p):
    k = expr.kind
    if k in ("Gamma", "Sym", "Ext"):
        lam = expr.args[0]
        return _leaf(k, lam, m, p, expr).check()
    if k == "T":
        d = expr.args[0]
        if m**d > AMBIENT_GUARD:
            raise ValueError("tensor power exceeds the ambient guard")
        eye = sp.identity(m**d, dtype=np.int64, format="csr")
        return Realization(expr, m, d, p, eye, eye, 1, schur.word_weights(m, d), "T")
    if k == "Q":
        return _leaf("Q", (expr.args[0],), m, p, expr).check()
    if k == "Weyl":
        return _weyl(expr.args[0], m, p, expr)
    if k == "L":
        return _simple(expr.args[0], m, p, expr)
    if k == "P":
        return _proj_cover(expr.args[0], m, p, expr)
    if k == "dual":
        return kuhn_dual(realize(expr.args[0], m, p), expr)
    if k == "tensor":
        a, b = expr.args
        return _internal_tensor(a, b, m, p, expr)
    if k == "ihom":
        a, b = expr.args
        return realize(KuhnDual(ITensor(a, KuhnDual(b))), m, p)
    if k == "mdual":
        e = expr.args[0]
        return realize(KuhnDual(ITensor(e, Sym((degree(e),)))), m, p)
    if k in ("Gtensor", "Ghom"):
        from . import adjoints

        n = expr.args[0].build(p)
        fn = adjoints.g_tensor_realization if k == "Gtensor" else adjoints.g_hom_realization
        return fn(n, m, expr)
    raise ValueError(f"unknown expression kind {k!r}")


def predicted_dim(expr, m):
    k = expr.kind
    if k in ("Gamma", "Sym"):
        return prod(comb(m + c - 1, c) for c in expr.args[0])
    if k == "Ext":
        return prod(comb(m, c) for c in expr.args[0])
    if k == "T":
        return m ** expr.args[0]
    if k == "dual":
        return predicted_dim(expr.args[0], m)
    return None


# --- internal tensor -------------------------------------------------------------------


def _module_generators(mod):
    """Weight vectors generating the module, chosen from the top weight down."""
    p = mod.p
    chosen = []
    span = ff.zeros(mod.dim, 0)
    order = sorted(mod.blocks(), key=lambda w: tuple(w), reverse=True)
    for w in order:
        for i in mod.blocks()[w]:
            v = ff.zeros(mod.dim, 1)
            v[i, 0] = 1
            if span.shape[1] and ff.in_span(span, v, p):
                continue
            chosen.append((int(i), w))
            seeds = ff.zeros(mod.dim, len(chosen))
            for c, (j, _) in enumerate(chosen):
                seeds[j, c] = 1
            span = modules.spin(mod, seeds).basis
            if span.shape[1] == mod.dim:
                return chosen
    return chosen


def _reshuffle_index(n, d, extra):
    """Map ambient index of (k^{n²})^{⊗d} ⊗ k^e to (A, B, j) with c_t = a_t n + b_t."""
    w = schur.words(n * n, d)
    a = schur.word_index(w // n, n)
    b = schur.word_index(w % n, n)
    base = np.repeat(np.arange(w.shape[0]), extra) * 0
    amb_a = np.repeat(a, extra)
    amb_b = np.repeat(b, extra)
    j = np.tile(np.arange(extra), w.shape[0])
    return amb_a + base, amb_b, j


def internal_tensor(x, y):
    """X ⊗ Y of two realizations at the same k^n."""
    if x.m != y.m or x.d != y.d or x.p != y.p:
        raise ValueError("internal tensor needs realizations at the same (n, d, p)")
    return realize(ITensor(x.expr, y.expr), x.m, x.p)


def internal_hom(x, y):
    return realize(IHom(x.expr, y.expr), x.m, x.p)


def mon_dual(x):
    return realize(MonDual(x.expr), x.m, x.p)


def _internal_tensor(a, b, n, p, expr):
    if not evaluable(b):
        if not evaluable(a):
            raise ValueError(f"neither factor of {render(expr)} can be evaluated at k^{n * n}")
        a, b = b, a
    d = degree(a)
    x = realize(a, n, p)
    if (n * n) ** d > AMBIENT_GUARD:
        raise ValueError(f"internal tensor needs k^{n * n} in degree {d}; beyond the size guard")
    y = realize(b, n * n, p)
    return _tensor_core(x, y, n, d, p, expr)


def _tensor_core(x, y, n, d, p, expr):
    space = schur._space(n, n, d)
    xmod = x.module
    gens = _module_generators(xmod)
    lams = [w for _, w in gens]
    # images of e_μ S e_λ applied to each generator, for every μ
    tw = [space.target_weight(t) for t in range(space.dim)]
    sw = [space.source_weight(t) for t in range(space.dim)]
    relations = []  # (mu, {i: coefficient vector over space})
    cols_by_mu = {}
    for i, (gi, lam) in enumerate(gens):
        w = _dense(ff.matmul(x.L, np.eye(x.dim, dtype=np.int64)[:, [gi]], p)).reshape(n**d, x.extra)
        sel = np.array([t for t in range(space.dim) if sw[t] == lam], dtype=np.int64)
        where = np.full(space.dim, -1)
        where[sel] = np.arange(len(sel))
        keep = where[space.orbit_owner] >= 0
        owner = where[space.orbit_owner[keep]]
        rows = space.orbit_row[keep]
        cols = space.orbit_col[keep]
        rr = (rows[:, None] * x.extra + np.arange(x.extra)[None, :]).ravel()
        cc = np.repeat(owner, x.extra)
        vv = w[cols].ravel()
        z = sp.csr_matrix((vv, (rr, cc)), shape=(n**d * x.extra, len(sel)))
        img = _dense(ff.matmul(x.C, z, p))
        for k, t in enumerate(sel):
            cols_by_mu.setdefault(tw[t], []).append((i, int(t), img[:, k]))
    for mu, entries in cols_by_mu.items():
        mat = np.stack([v for _, _, v in entries], axis=1)
        ker = ff.kernel(mat, p)
        for c in range(ker.shape[1]):
            rel = {}
            for (i, t, _), coef in zip(entries, ker[:, c]):
                if coef:
                    rel.setdefault(i, np.zeros(space.dim, dtype=np.int64))[t] = coef
            relations.append((mu, rel))
    # split Y(k^{n²}) coordinates by a-content and b-content
    yw = np.array(y.weights, dtype=np.int64).reshape(y.dim, n, n)
    a_content = [tuple(int(v) for v in r) for r in yw.sum(axis=2)]
    b_content = [tuple(int(v) for v in r) for r in yw.sum(axis=1)]
    blocks = [np.array([t for t in range(y.dim) if b_content[t] == lam], dtype=np.int64) for lam in lams]
    offsets = np.cumsum([0] + [len(b) for b in blocks])
    total = int(offsets[-1])
    amb_a, amb_b, amb_j = _reshuffle_index(n, d, y.extra)
    nd = n**d
    ycd = sp.csr_matrix(y.C) if not sp.issparse(y.C) else y.C
    rel_vecs = []
    for mu, rel in relations:
        ys = np.array([t for t in range(y.dim) if b_content[t] == mu], dtype=np.int64)
        if ys.size == 0:
            continue
        lifted = _dense(ff.matmul(y.L, np.eye(y.dim, dtype=np.int64)[:, ys], p))
        vec = np.zeros((total, len(ys)), dtype=np.int64)
        for i, k in rel.items():
            rk = schur._space(n, n, d).matrix(k, p).T.tocsr()
            # act on the b-index of every ambient coordinate
            arr = np.zeros((nd, nd * y.extra * len(ys)), dtype=np.int64)
            arr_view = arr.reshape(nd, nd, y.extra, len(ys))
            arr_view[amb_b, amb_a, amb_j] = lifted
            moved = _dense(ff.matmul(rk, arr, p)).reshape(nd, nd, y.extra, len(ys))
            back = moved[amb_b, amb_a, amb_j]
            coords = _dense(ff.matmul(ycd, back, p))
            outside = np.ones(y.dim, dtype=bool)
            outside[blocks[i]] = False
            if np.any(coords[outside]):
                raise AssertionError("relation image left the expected weight block")
            vec[offsets[i] : offsets[i + 1]] = (vec[offsets[i] : offsets[i + 1]] + coords[blocks[i]]) % p
        rel_vecs.append(vec)
    o_weights = [a_content[t] for b in blocks for t in b]
    relmat = np.concatenate(rel_vecs, axis=1) if rel_vecs else np.zeros((total, 0), dtype=np.int64)
    # cokernel, block by a-content
    by_w = {}
    for o, w in enumerate(o_weights):
        by_w.setdefault(w, []).append(o)
    sec_cols, proj_rows, out_w = [], [], []
    proj = []
    section = []
    for w, ix in by_w.items():
        ix = np.array(ix)
        sub = relmat[ix]
        sub = sub[:, np.any(sub != 0, axis=0)] if sub.size else sub
        img = ff.image(sub, p) if sub.shape[1] else np.zeros((len(ix), 0), dtype=np.int64)
        k = img.shape[1]
        _, piv = ff.rref(img.T, p) if k else (None, [])
        free = [c for c in range(len(ix)) if c not in set(piv)]
        comp = np.zeros((len(ix), len(free)), dtype=np.int64)
        comp[free, range(len(free))] = 1
        inv = ff.inverse(np.concatenate([img, comp], axis=1), p)
        pr = np.zeros((len(free), total), dtype=np.int64)
        pr[:, ix] = inv[k:]
        sc = np.zeros((total, len(free)), dtype=np.int64)
        sc[ix] = comp
        proj.append(pr)
        section.append(sc)
        out_w += [w] * len(free)
    proj = np.concatenate(proj, axis=0) if proj else np.zeros((0, total), dtype=np.int64)
    section = np.concatenate(section, axis=1) if section else np.zeros((total, 0), dtype=np.int64)
    # ambient of the result: W_n ⊗ (blocks ⊗ W_n ⊗ k^e)
    r = len(gens)
    extra = r * nd * y.extra
    amb_of = lambda i: amb_a * extra + i * nd * y.extra + amb_b * y.extra + amb_j  # noqa: E731
    ylc = sp.csc_matrix(y.L) if sp.issparse(y.L) else sp.csc_matrix(np.asarray(y.L))
    lrows, lcols, lvals = [], [], []
    crows, ccols, cvals = [], [], []
    ycc = ycd.tocsr()
    for i, blk in enumerate(blocks):
        sub_l = ylc[:, blk].tocoo()
        lrows.append(amb_of(i)[sub_l.row])
        lcols.append(sub_l.col + offsets[i])
        lvals.append(sub_l.data)
        sub_c = ycc[blk].tocoo()
        crows.append(sub_c.row + offsets[i])
        ccols.append(amb_of(i)[sub_c.col])
        cvals.append(sub_c.data)
    size = nd * extra
    lsel = sp.csr_matrix((np.concatenate(lvals), (np.concatenate(lrows), np.concatenate(lcols))), shape=(size, total))
    csel = sp.csr_matrix((np.concatenate(cvals), (np.concatenate(crows), np.concatenate(ccols))), shape=(total, size))
    L = _dense(ff.matmul(lsel, section, p))
    C = _dense(ff.matmul(sp.csr_matrix(proj), csel, p))
    info = {"generators": lams, "relations": len(relations)}
    return Realization(expr, n, d, p, sp.csr_matrix(L), sp.csr_matrix(C), extra, out_w, render(expr), info)


# --- simples, characters, projectives, Ext -------------------------------------------------


def simple_list(m, d, p):
    return [(lam, realize(Simple(lam), m, p).module) for lam in partitions(d, m)]


def character(mod):
    return mod.character()


def simple_characters(m, d, p):
    return {lam: realize(Simple(lam), m, p).module.character() for lam in partitions(d, m)}


def character_multiplicities(x, m=None):
    """Multiplicities of the simples L_λ in a module over S(m,d) via its character."""
    tag, m, d = x.algebra_id
    chars = simple_characters(m, d, x.p)
    rest = dict(x.character())
    mult = {}
    for lam in sorted(chars, reverse=True):
        key = lam + (0,) * (m - len(lam))
        c = rest.get(key, 0)
        if c == 0:
            continue
        mult[lam] = c
        for w, k in chars[lam].items():
            rest[w] = rest.get(w, 0) - c * k
    if any(v < 0 for v in rest.values()):
        raise ArithmeticError("negative multiplicity: simple character table is wrong")
    if any(v for v in rest.values()):
        raise ArithmeticError("character not exhausted by simple characters")
    return mult


def projective_cover(mu, m, p):
    return realize(ProjCover(mu), m, p)


def ext1(mu, nu, m, p):
    """dim Ext¹(L_μ, L_ν) as the multiplicity of L_ν in the top of rad P_μ."""
    pc = projective_cover(mu, m, p).module
    d = sum(mu)
    sims = simple_list(m, d, p)
    rad, _, _ = modules.radical_top(pc, sims, check=False)
    radmod = modules.restrict(pc, rad)
    if radmod.dim == 0:
        return 0
    _, _, mult = modules.radical_top(radmod, sims, check=False)
    value = mult.get(partition(nu), 0)
    target = dict(sims)[partition(nu)]
    if value != modules.hom_dim(radmod, target):
        raise AssertionError("top multiplicity and Hom dimension disagree")
    return value


def hom_from_gamma_dim(lam, x):
    """dim Hom(Γ^λ, x) computed as an intertwiner space."""
    tag, m, d = x.algebra_id
    return modules.hom_dim(realize(Gamma(lam), m, x.p).module, x)
