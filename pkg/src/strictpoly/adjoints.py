"""The Schur functor F, its adjoints G_⊗ and G_Hom, and verification suites.

``G_⊗(N)(V) = (V^{⊗d} ⊗ N)_{S_d}`` and ``G_Hom(N)(V) = (V^{⊗d} ⊗ N)^{S_d}`` for the
diagonal action (place permutations on the tensor power), so both are
realizations with ambient ``(k^m)^{⊗d} ⊗ N``.  F is the ω-weight space with
``σ`` acting through the corner element ``ξ_σ = {(σ(j), j)}``.
"""

from __future__ import annotations

import json
import os
import time
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from . import ff, modules, schur, symgrp
from . import polyfun as pf
from .combin import (
    compositions,
    conjugate,
    dominates,
    fmt,
    is_p_core,
    is_p_regular,
    is_p_restricted,
    mullineux,
    mullineux_restricted,
    partitions,
)

ASSOC_TRIPLES = 200

# theorem keys whose suite passed at n = d <= 3 in this process; gates shortcut use
VERIFIED = set()


# --- the functors ------------------------------------------------------------------------


def omega(m, d):
    return (1,) * d + (0,) * (m - d)


def corner_matrix(m, d, sigma, p):
    """ρ(ξ_σ) on (k^m)^{⊗d}: e_K ↦ e_{σ∘K} on sequences that are permutations."""
    space = schur._space(m, m, d)
    key = tuple(sorted((int(sigma[j]), j) for j in range(d)))
    vec = np.zeros(space.dim, dtype=np.int64)
    vec[space.index[key]] = 1
    return space.matrix(vec, p)


def schur_F(x):
    """F(x) = e_ω x as a kS_d-module (x a Realization or a Schur algebra ModAction)."""
    if isinstance(x, pf.Realization):
        m, d, p = x.m, x.d, x.p
        if m < d:
            raise ValueError(f"the Schur functor needs m >= d, got m={m}, d={d}")
        idx = np.array([i for i, w in enumerate(x.weights) if tuple(w) == omega(m, d)], dtype=np.int64)
        mats = []
        for i in range(1, d):
            full = x.act(corner_matrix(m, d, symgrp.transposition(d, i), p))
            mats.append(full[np.ix_(idx, idx)])
        return symgrp._with_dim(p, d, len(idx), mats, f"F({x.name})")
    tag, m, d = x.algebra_id
    if tag != "S" or m < d:
        raise ValueError("the Schur functor needs a module over S(m,d) with m >= d")
    p = x.p
    idx = x.blocks().get(omega(m, d), np.zeros(0, dtype=np.int64))
    mats = []
    for i in range(1, d):
        ef = ff.matmul(x.gen(("E", i, 1)), x.gen(("F", i, 1)), p)
        mats.append((ef[np.ix_(idx, idx)] - ff.identity(len(idx))) % p)
    return symgrp._with_dim(p, d, len(idx), mats, f"F({x.name})")


def _perm_actions(n_mod, d):
    cache = {}

    def rho(sigma):
        if sigma not in cache:
            cache[sigma] = symgrp.act(n_mod, sigma)
        return cache[sigma]

    return rho


def _classes(m, d):
    """Sequences grouped by content; each with the stable sorting permutation τ (K∘τ sorted)."""
    w = schur.words(m, d)
    out = {}
    for k in range(w.shape[0]):
        seq = w[k]
        tau = tuple(int(t) for t in np.argsort(seq, kind="stable"))
        out.setdefault(schur.content(seq, m), []).append((k, tau))
    return out


def _young(lam):
    """Adjacent transposition indices generating the stabilizer of the sorted sequence of content λ."""
    return symgrp.young_generators([c for c in lam if c])


def g_tensor_realization(n_mod, m, expr=None):
    p = n_mod.p
    d = n_mod.algebra_id[1]
    e = n_mod.dim
    rho = _perm_actions(n_mod, d)
    lrows, lcols, lvals = [], [], []
    crows, ccols, cvals = [], [], []
    weights = []
    at = 0
    for lam, members in _classes(m, d).items():
        gens = _young(lam)
        if gens:
            img = np.concatenate([(n_mod.gen(("s", i)) - ff.identity(e)) % p for i in gens], axis=1)
            img = ff.image(img, p)
        else:
            img = ff.zeros(e, 0)
        k = img.shape[1]
        _, piv = ff.rref(img.T, p) if k else (None, [])
        free = [c for c in range(e) if c not in set(piv)]
        comp = ff.zeros(e, len(free))
        comp[free, range(len(free))] = 1
        proj = ff.inverse(np.concatenate([img, comp], axis=1), p)[k:]
        q = len(free)
        if q == 0:
            continue
        base = members[0][0]
        for j in range(q):
            rows = base * e + np.flatnonzero(comp[:, j])
            lrows += list(rows)
            lcols += [at + j] * len(rows)
            lvals += list(comp[comp[:, j] != 0, j])
        for kidx, tau in members:
            block = ff.matmul(proj, rho(symgrp.inverse_perm(tau)), p)
            r, c = np.nonzero(block)
            crows += list(at + r)
            ccols += list(kidx * e + c)
            cvals += list(block[r, c])
        weights += [lam] * q
        at += q
    size = m**d * e
    L = sp.csr_matrix((np.array(lvals, dtype=np.int64), (lrows, lcols)), shape=(size, at))
    C = sp.csr_matrix((np.array(cvals, dtype=np.int64), (crows, ccols)), shape=(at, size))
    expr = expr if expr is not None else pf.GTensor(pf.SymExpr("raw", (n_mod.name,), d))
    return pf.Realization(expr, m, d, p, L, C, e, weights, pf.render(expr)).check()


def g_hom_realization(n_mod, m, expr=None):
    p = n_mod.p
    d = n_mod.algebra_id[1]
    e = n_mod.dim
    rho = _perm_actions(n_mod, d)
    lrows, lcols, lvals = [], [], []
    crows, ccols, cvals = [], [], []
    weights = []
    at = 0
    for lam, members in _classes(m, d).items():
        fix = symgrp.fixed_points(n_mod, _young(lam))
        q = fix.shape[1]
        if q == 0:
            continue
        for kidx, tau in members:
            block = ff.matmul(rho(tau), fix, p)
            r, c = np.nonzero(block)
            lrows += list(kidx * e + r)
            lcols += list(at + c)
            lvals += list(block[r, c])
        base = members[0][0]
        left = ff.left_inverse(fix, p)
        r, c = np.nonzero(left)
        crows += list(at + r)
        ccols += list(base * e + c)
        cvals += list(left[r, c])
        weights += [lam] * q
        at += q
    size = m**d * e
    L = sp.csr_matrix((np.array(lvals, dtype=np.int64), (lrows, lcols)), shape=(size, at))
    C = sp.csr_matrix((np.array(cvals, dtype=np.int64), (crows, ccols)), shape=(at, size))
    expr = expr if expr is not None else pf.GHom(pf.SymExpr("raw", (n_mod.name,), d))
    return pf.Realization(expr, m, d, p, L, C, e, weights, pf.render(expr)).check()


def g_tensor(n, m, p=None):
    """G_⊗(N) at k^m; ``n`` is a SymExpr (memoized) or a kS_d ModAction."""
    if isinstance(n, pf.SymExpr):
        return pf.realize(pf.GTensor(n), m, p)
    return g_tensor_realization(n, m)


def g_hom(n, m, p=None):
    if isinstance(n, pf.SymExpr):
        return pf.realize(pf.GHom(n), m, p)
    return g_hom_realization(n, m)


def GF(expr):
    """Expression for G_⊗F(X)."""
    return pf.GTensor(pf.SymExpr("F", (expr,), pf.degree(expr)))


def GhF(expr):
    return pf.GHom(pf.SymExpr("F", (expr,), pf.degree(expr)))


# --- context ---------------------------------------------------------------------------------


class AdjointContext:
    """Configuration (p, n, d) with n >= d, the Schur algebra and the corner checked."""

    def __init__(self, p, n, d, seed=0, jobs=1, cache_dir=None):
        ff.check_prime(p)
        if n < d:
            raise ValueError(f"adjoint computations need n >= d, got n={n}, d={d}")
        self.p, self.n, self.d = p, n, d
        self.seed = seed
        self.jobs = max(1, int(jobs))
        self.cache_dir = cache_dir
        self.alg = schur.schur_algebra(n, d, p)
        self.assoc_ok, bad = self.alg.check_associativity(ASSOC_TRIPLES, seed)
        if not self.assoc_ok:
            raise AssertionError(f"Schur algebra failed the associativity check at basis triple {bad}")
        schur.symgroup_corner(self.alg)
        self.tensor_power = pf.realize(pf.T(d), n, p)
        self.verified = VERIFIED

    def real(self, expr):
        return pf.realize(expr, self.n, self.p)

    def mod(self, expr):
        return self.real(expr).module

    def sym(self, kind, *args):
        return pf.SymExpr(kind, tuple(args), self.d)


# --- reports ---------------------------------------------------------------------------------


STATUSES = ("verified", "refuted", "inconclusive", "discrepancy")


@dataclass
class Report:
    id: str
    claim: str
    anchor: str
    status: str
    dims: tuple = ()
    seed: int = 0
    ms: float = 0.0
    detail: str = ""
    witness: np.ndarray | None = field(default=None, repr=False)
    witness_file: str | None = None
    chain: list = field(default_factory=list)

    def to_json(self):
        return {
            "id": self.id,
            "anchor": self.anchor,
            "status": self.status,
            "claim": self.claim,
            "dims": list(self.dims),
            "detail": self.detail,
            "witness_file": self.witness_file,
            "seed": self.seed,
            "chain": self.chain,
            "ms": round(self.ms, 1),
        }

    def line(self):
        return json.dumps(self.to_json(), ensure_ascii=False, sort_keys=True)


def claim_seed(seed, cid):
    return (seed + zlib.crc32(cid.encode())) % (2**31)


def _witness_path(cache_dir, cid):
    safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in cid)
    return os.path.join(cache_dir, "witness", safe + ".spfm")


def save_witness(report, cache_dir, p):
    path = _witness_path(cache_dir, report.id)
    os.makedirs(os.path.dirname(path), exist_ok=True)
    with open(path, "wb") as fh:
        ff.write_record(fh, report.witness, p)
    report.witness_file = os.path.relpath(path, cache_dir)
    return path


def load_witness(path):
    with open(path, "rb") as fh:
        mat, p = ff.read_record(fh)
    return mat, p


def revalidate(mat, source, target):
    """True iff ``mat`` is an invertible intertwiner source → target."""
    mor = modules.ModMorphism(source, target, mat)
    try:
        return bool(mor.check()) and mor.is_invertible()
    except (ValueError, modules.AlgebraMismatch):
        return False


def iso_claim(ctx, cid, claim, anchor, lhs, rhs, expect=True):
    """Compare two modules (thunks); ``expect=False`` states non-isomorphism."""
    t0 = time.perf_counter()
    seed = claim_seed(ctx.seed, cid)
    a, b = lhs(), rhs()
    res = modules.is_isomorphic(a, b, seed=seed)
    rep = Report(cid, claim, anchor, "inconclusive", (a.dim, b.dim), seed, detail=res.reason)
    if res.iso is None:
        pass
    elif res.iso == expect:
        rep.status = "verified"
    else:
        rep.status = "refuted"
    if res.iso:
        rep.witness = res.witness.mat
        if ctx.cache_dir:
            path = save_witness(rep, ctx.cache_dir, a.p)
            mat, _ = load_witness(path)
            if not revalidate(mat, a, b):
                rep.status = "inconclusive"
                rep.detail = "stored witness failed re-validation"
    rep.ms = (time.perf_counter() - t0) * 1000
    return rep


def value_claim(ctx, cid, claim, anchor, lhs, rhs):
    """Equality of two computed integers (e.g. Hom dimensions)."""
    t0 = time.perf_counter()
    a, b = lhs(), rhs()
    status = "verified" if a == b else "refuted"
    return Report(cid, claim, anchor, status, (a, b), claim_seed(ctx.seed, cid), (time.perf_counter() - t0) * 1000,
                  f"{a} vs {b}")


def run_claims(ctx, thunks):
    """Evaluate claim thunks, possibly concurrently; ordered by claim id as listed."""
    if ctx.jobs > 1 and len(thunks) > 1:
        with ThreadPoolExecutor(max_workers=ctx.jobs) as pool:
            out = list(pool.map(lambda f: f(), thunks))
    else:
        out = [f() for f in thunks]
    return out


# --- suites -----------------------------------------------------------------------------------


def _module_set(ctx):
    d, p = ctx.d, ctx.p
    out = [ctx.sym("triv"), ctx.sym("sgn"), ctx.sym("M", (d - 1, 1))]
    if d >= 2 and is_p_regular((d - 1, 1), p):
        out.append(ctx.sym("D", (d - 1, 1)))
    return out


def verify_identity_suite(ctx):
    d, n = ctx.d, ctx.n
    G, S = pf.Gamma((d,)), pf.Sym((d,))
    c = []

    def iso(cid, claim, anchor, lhs, rhs, expect=True):
        c.append(lambda: iso_claim(ctx, cid, claim, anchor, lambda: ctx.mod(lhs), lambda: ctx.mod(rhs), expect))

    samples = [pf.Sym((d - 1, 1)), pf.Ext((1,) * d), pf.Simple((d - 1, 1))]
    for x in samples:
        iso(f"identity/unit/{pf.render(x)}", f"{pf.render(x)} ⊗ Γ^d ≅ {pf.render(x)}", "tensor unit",
            pf.ITensor(x, G), x)
    iso("identity/SxS", "S^d ⊗ S^d ≅ S^d", "symmetric square", pf.ITensor(S, S), S)
    iso("identity/mdual-Gamma", "(Γ^d)^∨ ≅ Γ^d", "monoidal dual of the unit", pf.MonDual(G), G)
    for lam in compositions(n, d):
        tag = fmt(lam)
        iso(f"identity/GammaxS/{tag}", f"Γ^{tag} ⊗ S^d ≅ S^{tag}", "Gamma times S", pf.ITensor(pf.Gamma(lam), S),
            pf.Sym(lam))
        iso(f"identity/HomSS/{tag}", f"Hom(S^d, S^{tag}) ≅ S^{tag}", "Hom from S", pf.IHom(S, pf.Sym(lam)),
            pf.Sym(lam))
        iso(f"identity/HomSS-Gamma/{tag}", f"Hom(S^d, S^{tag}) ≅ Γ^{tag}", "Hom from S via duality",
            pf.IHom(S, pf.Sym(lam)), pf.Gamma(lam))
    c += _adjoint_proposition_claims(ctx)
    return run_claims(ctx, c)


def _adjoint_proposition_claims(ctx):
    d, n, p = ctx.d, ctx.n, ctx.p
    c = []
    for nn in _module_set(ctx):
        name = pf.render_sym(nn)
        c.append(lambda nn=nn, name=name: iso_claim(
            ctx, f"adjoint/FGt/{name}", f"F G_⊗({name}) ≅ {name}", "unit of G_⊗ ⊣ F",
            lambda: schur_F(ctx.real(pf.GTensor(nn))), lambda: nn.build(p)))
        c.append(lambda nn=nn, name=name: iso_claim(
            ctx, f"adjoint/FGh/{name}", f"F G_Hom({name}) ≅ {name}", "counit of F ⊣ G_Hom",
            lambda: schur_F(ctx.real(pf.GHom(nn))), lambda: nn.build(p)))
    for lam in compositions(n, d):
        tag = fmt(lam)
        c.append(lambda lam=lam, tag=tag: iso_claim(
            ctx, f"adjoint/GtF-S/{tag}", f"G_⊗F(S^{tag}) ≅ S^{tag}", "G_⊗F on add S",
            lambda: ctx.mod(GF(pf.Sym(lam))), lambda: ctx.mod(pf.Sym(lam))))
        c.append(lambda lam=lam, tag=tag: iso_claim(
            ctx, f"adjoint/GhF-Gamma/{tag}", f"G_Hom F(Γ^{tag}) ≅ Γ^{tag}", "G_Hom F on add Γ",
            lambda: ctx.mod(GhF(pf.Gamma(lam))), lambda: ctx.mod(pf.Gamma(lam))))
        c.append(lambda lam=lam, tag=tag: iso_claim(
            ctx, f"adjoint/F-Gamma/{tag}", f"F(Γ^{tag}) ≅ M^{tag}", "add Γ ≃ add M",
            lambda: schur_F(ctx.real(pf.Gamma(lam))), lambda: symgrp.perm_module(lam, p)))
    return c


def default_sample(d):
    return [pf.Gamma((d - 1, 1)), pf.Sym((d - 1, 1)), pf.Ext((d,)), pf.Sym((d,)), pf.Simple((d - 1, 1))]


def verify_adjoint_theorems(ctx, sample=None):
    d, p = ctx.d, ctx.p
    sample = sample if sample is not None else default_sample(d)
    S = pf.Sym((d,))
    c = []
    for x in sample:
        tag = pf.render(x)
        c.append(lambda x=x, tag=tag: iso_claim(
            ctx, f"theorem/GtF/{tag}", f"G_⊗F({tag}) ≅ S^d ⊗ {tag}", "G_⊗F is S^d ⊗ −",
            lambda: ctx.mod(GF(x)), lambda: ctx.mod(pf.ITensor(S, x))))
        c.append(lambda x=x, tag=tag: iso_claim(
            ctx, f"theorem/GhF/{tag}", f"G_Hom F({tag}) ≅ Hom(S^d, {tag})", "G_Hom F is Hom(S^d, −)",
            lambda: ctx.mod(GhF(x)), lambda: ctx.mod(pf.IHom(S, x))))
        c.append(lambda x=x, tag=tag: iso_claim(
            ctx, f"theorem/bridge/{tag}", f"(G_⊗F({tag}))° ≅ G_Hom F({tag}°)", "duality bridge",
            lambda: ctx.mod(pf.KuhnDual(GF(x))), lambda: ctx.mod(GhF(pf.KuhnDual(x)))))
        c.append(lambda x=x, tag=tag: iso_claim(
            ctx, f"theorem/mdual/{tag}", f"G_⊗F({tag}) ≅ (({tag})^∨)°", "G_⊗F via the monoidal dual",
            lambda: ctx.mod(GF(x)), lambda: ctx.mod(pf.KuhnDual(pf.MonDual(x)))))
        c.append(lambda x=x, tag=tag: iso_claim(
            ctx, f"theorem/kdual/{tag}", f"G_Hom F({tag}) ≅ (({tag})°)^∨", "G_Hom F via both duals",
            lambda: ctx.mod(GhF(x)), lambda: ctx.mod(pf.MonDual(pf.KuhnDual(x)))))
    for nn in _module_set(ctx):
        name = pf.render_sym(nn)
        dual = pf.SymExpr("sdual", (nn,), d)
        c.append(lambda nn=nn, name=name, dual=dual: iso_claim(
            ctx, f"theorem/Gdual/{name}", f"G_⊗({name})° ≅ G_Hom({name}*)", "G_⊗ and G_Hom related by duals",
            lambda: ctx.mod(pf.KuhnDual(pf.GTensor(nn))), lambda: ctx.mod(pf.GHom(dual))))
    for nn in _module_set(ctx)[:3]:
        name = pf.render_sym(nn)
        for x in sample:
            tag = pf.render(x)
            c.append(lambda nn=nn, name=name, x=x, tag=tag: value_claim(
                ctx, f"theorem/adj-tensor/{name}/{tag}", f"dim Hom(G_⊗{name}, {tag}) = dim Hom({name}, F {tag})",
                "G_⊗ ⊣ F", lambda: modules.hom_dim(ctx.mod(pf.GTensor(nn)), ctx.mod(x)),
                lambda: modules.hom_dim(nn.build(p), schur_F(ctx.real(x)))))
            c.append(lambda nn=nn, name=name, x=x, tag=tag: value_claim(
                ctx, f"theorem/adj-hom/{name}/{tag}", f"dim Hom(F {tag}, {name}) = dim Hom({tag}, G_Hom {name})",
                "F ⊣ G_Hom", lambda: modules.hom_dim(schur_F(ctx.real(x)), nn.build(p)),
                lambda: modules.hom_dim(ctx.mod(x), ctx.mod(pf.GHom(nn)))))
    reports = run_claims(ctx, c)
    if all(r.status == "verified" for r in reports if r.id.startswith("theorem/GtF/")):
        ctx.verified.add("GtF")
    return reports


def monoidal_pairs(d):
    S, L = pf.Sym((d - 1, 1)), pf.Simple((d - 1, 1))
    G, E = pf.Gamma((d - 1, 1)), pf.Ext((d,))
    return [(E, E), (E, L), (L, L), (G, S), (S, pf.Sym((d,)))]


def verify_monoidality(ctx):
    d, p = ctx.d, ctx.p
    c = []
    for x, y in monoidal_pairs(d):
        tag = f"{pf.render(x)},{pf.render(y)}"
        c.append(lambda x=x, y=y, tag=tag: iso_claim(
            ctx, f"monoidal/F/{tag}", f"F({pf.render(x)} ⊗ {pf.render(y)}) ≅ F ⊗ F", "F is monoidal",
            lambda: schur_F(ctx.real(pf.ITensor(x, y))),
            lambda: symgrp.kronecker(schur_F(ctx.real(x)), schur_F(ctx.real(y)))))
    pairs = [(ctx.sym("sgn"), ctx.sym("sgn")), (ctx.sym("sgn"), ctx.sym("M", (d - 1, 1))),
             (ctx.sym("M", (d - 1, 1)), ctx.sym("triv"))]
    for a, b in pairs:
        tag = f"{pf.render_sym(a)},{pf.render_sym(b)}"
        kr = pf.SymExpr("kron", (a, b), d)
        c.append(lambda a=a, b=b, kr=kr, tag=tag: iso_claim(
            ctx, f"monoidal/Gt/{tag}", f"G_⊗({tag.replace(',', '⊗')}) ≅ G_⊗ ⊗ G_⊗", "G_⊗ respects ⊗",
            lambda: ctx.mod(pf.GTensor(kr)), lambda: ctx.mod(pf.ITensor(pf.GTensor(a), pf.GTensor(b)))))
    G, S = pf.Gamma((d,)), pf.Sym((d,))

    def iso(cid, claim, lhs, rhs, expect=True):
        c.append(lambda: iso_claim(ctx, cid, claim, "negative results", lambda: ctx.mod(lhs), lambda: ctx.mod(rhs),
                                   expect))

    if p != 2:
        iso("monoidal/Gh-sgn", "G_Hom(sgn) ≅ Λ^d", pf.GHom(ctx.sym("sgn")), pf.Ext((d,)))
    iso("monoidal/Gh-triv", "G_Hom(triv) ≅ Γ^d", pf.GHom(ctx.sym("triv")), G)
    iso("monoidal/Gt-triv", "G_⊗(triv) ≅ S^d", pf.GTensor(ctx.sym("triv")), S)
    if d % p == 0:
        iso("monoidal/Gamma-vs-S", "Γ^d ≇ S^d", G, S, expect=False)
        iso("monoidal/Gt-unit", "G_⊗(triv) ≇ Γ^d (not the tensor unit)", pf.GTensor(ctx.sym("triv")), G,
            expect=False)
    return run_claims(ctx, c)


# --- Mullineux ------------------------------------------------------------------------------


def verify_mullineux(seed=0, primes=(3, 5), max_d=5, involution_d=8):
    out = []
    for p in primes:
        for d in range(1, max_d + 1):
            for lam in partitions(d):
                if not is_p_regular(lam, p):
                    continue
                t0 = time.perf_counter()
                comb_val = mullineux(lam, p)
                oracle = symgrp.sign_twist_identify(lam, p)
                ok = comb_val == oracle
                out.append(Report(f"mullineux/oracle/p{p}/{fmt(lam)}", f"m{fmt(lam)} = {fmt(comb_val)}",
                                  "sign twist of D^λ", "verified" if ok else "refuted", (), seed,
                                  (time.perf_counter() - t0) * 1000, f"oracle {fmt(oracle)}"))
        bad = [lam for d in range(1, involution_d + 1) for lam in partitions(d)
               if is_p_regular(lam, p) and mullineux(mullineux(lam, p), p) != lam]
        out.append(Report(f"mullineux/involution/p{p}", f"m∘m = id for d ≤ {involution_d}", "involution",
                          "refuted" if bad else "verified", (), seed, 0.0, f"failures {bad}" if bad else ""))
        v1 = mullineux((2,) + (1,) * (p - 2), p)
        out.append(Report(f"mullineux/value1/p{p}", f"m{fmt((2,) + (1,) * (p - 2))} = ({p})", "special value",
                          "verified" if v1 == (p,) else "refuted", (), seed, 0.0, f"got {fmt(v1)}"))
        v2 = mullineux((p - 1, 1), p)
        want = (3,) + (1,) * (p - 3)
        out.append(Report(f"mullineux/value2/p{p}", f"m({p - 1},1) = {fmt(want)}", "special value",
                          "verified" if v2 == want else "refuted", (), seed, 0.0, f"got {fmt(v2)}"))
    return out


# --- simple tensors ------------------------------------------------------------------------------


def restricted(d, n, p):
    return [lam for lam in partitions(d, n) if is_p_restricted(lam, p)]


def ext_criterion(mu, n, p):
    """(holds, offending ν) for: every ν with Ext¹(L_μ, L_ν) ≠ 0 is p-restricted."""
    d = sum(mu)
    bad = [nu for nu in partitions(d, n) if pf.ext1(mu, nu, n, p) and not is_p_restricted(nu, p)]
    return not bad, bad


def identify(mod):
    """Label ν with mod ≅ L_ν, or None when mod is not simple."""
    if mod.dim == 0:
        return None
    res = modules.certify_simple(mod)
    if not res.simple:
        return None
    mult = pf.character_multiplicities(mod)
    if len(mult) != 1 or next(iter(mult.values())) != 1:
        raise AssertionError("certified simple module has a composite character")
    return next(iter(mult))


def _shortcut(ctx, lam, mu):
    """Shortcut route for L_λ ⊗ L_μ when one factor is Λ^d or Q^d; returns (expr, note) or None."""
    d, p = ctx.d, ctx.p
    ext = ctx.mod(pf.Ext((d,)))
    q = ctx.mod(pf.Q(d))
    for a, b in ((lam, mu), (mu, lam)):
        la = ctx.mod(pf.Simple(a))
        if modules.is_isomorphic(la, ext).iso:
            return GF(pf.Simple(mullineux_restricted(b, p))), f"Λ^d ⊗ L{fmt(b)} = G_⊗F(L{fmt(mullineux_restricted(b, p))})"
        if modules.is_isomorphic(la, q).iso:
            return GF(pf.Simple(b)), f"Q^d ⊗ L{fmt(b)} = G_⊗F(L{fmt(b)})"
    return None


def _kronecker_verdict(ctx, lam, mu):
    """Non-simplicity via F: F(L_λ ⊗ L_μ) ≅ F L_λ ⊗ F L_μ nonzero and not simple."""
    a = schur_F(ctx.real(pf.Simple(lam)))
    b = schur_F(ctx.real(pf.Simple(mu)))
    kr = symgrp.kronecker(a, b)
    if kr.dim == 0:
        return None
    res = modules.certify_simple(kr)
    return False if res.simple is False else None


def theorem_prediction(ctx, lam, mu):
    """Simplicity and label predicted by the Ext/Mullineux criterion."""
    d, n, p = ctx.d, ctx.n, ctx.p
    ext = ctx.mod(pf.Ext((d,)))
    q = ctx.mod(pf.Q(d))
    for a, b in ((lam, mu), (mu, lam)):
        la = ctx.mod(pf.Simple(a))
        if modules.is_isomorphic(la, ext).iso:
            mb = mullineux_restricted(b, p)
            if ext_criterion(mb, n, p)[0]:
                return True, mb
        if modules.is_isomorphic(la, q).iso:
            if ext_criterion(b, n, p)[0]:
                return True, b
    return False, None


def closed_form_prediction(p, lam, mu):
    """Closed form at n = d = p."""
    ones = (1,) * p
    hook = (p - 1, 1)
    excl = (3,) + (1,) * (p - 3)
    for a, b in ((lam, mu), (mu, lam)):
        if a == ones and b != excl:
            return True, mullineux_restricted(b, p)
        if a == hook and b != hook:
            return True, b
    return False, None


def classify_simple_tensor(ctx):
    """Reports for every ordered pair of p-restricted partitions at n = d."""
    d, n, p = ctx.d, ctx.n, ctx.p
    if p == 2:
        raise ValueError("the classification needs odd p")
    if n != d:
        raise ValueError("the classification runs at n = d")
    general_ok = n <= 3
    reports = []
    labels = restricted(d, n, p)
    for lam in labels:
        for mu in labels:
            reports += _cell(ctx, lam, mu, general_ok)
    return reports


def _cell(ctx, lam, mu, general_ok):
    d, n, p = ctx.d, ctx.n, ctx.p
    cid = f"simple-tensor/{fmt(lam)}x{fmt(mu)}"
    seed = claim_seed(ctx.seed, cid)
    out = []
    t0 = time.perf_counter()
    general = pf.realize(pf.ITensor(pf.Simple(lam), pf.Simple(mu)), n, p) if general_ok else None
    short = _shortcut(ctx, lam, mu)
    chain = []
    if short is not None:
        if not general_ok and "GtF" not in ctx.verified:
            raise RuntimeError("shortcut used before G_⊗F ≅ S^d ⊗ − was verified in this run")
        chain.append(short[1])
    if general is not None and short is not None:
        out.append(iso_claim(ctx, cid + "/routes", f"L{fmt(lam)} ⊗ L{fmt(mu)}: general ≅ shortcut", "route agreement",
                             lambda: general.module, lambda: ctx.mod(short[0])))
    if general is not None:
        mod = general.module
    elif short is not None:
        mod = ctx.mod(short[0])
    else:
        mod = None
    if mod is not None:
        label = identify(mod)
        simple = label is not None
        detail = f"≅ L{fmt(label)}" if simple else ("zero" if mod.dim == 0 else "not simple (Meataxe)")
        dims = (mod.dim,)
    else:
        verdict = _kronecker_verdict(ctx, lam, mu)
        if verdict is None:
            out.append(Report(cid + "/verdict", f"simplicity of L{fmt(lam)} ⊗ L{fmt(mu)}", "classification",
                              "inconclusive", (), seed, (time.perf_counter() - t0) * 1000, "no route available"))
            return out
        simple, label, detail, dims = False, None, "not simple: F(L_λ) ⊗ F(L_μ) is not simple", ()
        chain.append("F monoidal + Kronecker product")
    out.append(Report(cid + "/verdict", f"L{fmt(lam)} ⊗ L{fmt(mu)} {'simple' if simple else 'not simple'}",
                      "classification", "verified", dims, seed, (time.perf_counter() - t0) * 1000, detail,
                      chain=list(chain)))
    pred, plabel = theorem_prediction(ctx, lam, mu)
    agree = pred == simple and (not simple or plabel == label)
    out.append(Report(cid + "/ext-criterion", f"Ext/Mullineux criterion predicts {'simple' if pred else 'not simple'}",
                      "simple tensor criterion", "verified" if agree else "discrepancy", dims, seed, 0.0,
                      f"predicted {fmt(plabel) if plabel else '-'}, computed {fmt(label) if label else '-'}"))
    if n == d == p:
        cpred, clabel = closed_form_prediction(p, lam, mu)
        cagree = cpred == simple and (not simple or clabel == label)
        out.append(Report(cid + "/closed-form", f"closed form at n=d=p predicts {'simple' if cpred else 'not simple'}",
                          "closed form n=d=p", "verified" if cagree else "discrepancy", dims, seed, 0.0,
                          f"predicted {fmt(clabel) if clabel else '-'}, computed {fmt(label) if label else '-'}"))
    return out


def restricted_below(mu, p, d, order="dominance"):
    """All λ ⊢ d below m(μ') (in the given order) are p-restricted."""
    top = mullineux(conjugate(mu), p)
    for lam in partitions(d):
        below = dominates(top, lam) if order == "dominance" else lam <= top
        if below and not is_p_restricted(lam, p):
            return False
    return True


def check_simplicity_criteria(ctx, mu):
    """Ext criterion, p-core shortcut and the restricted-below condition against G_⊗F(L_μ) computed directly."""
    d, n, p = ctx.d, ctx.n, ctx.p
    mu = tuple(mu)
    if not is_p_restricted(mu, p):
        raise ValueError(f"{fmt(mu)} is not {p}-restricted")
    cid = f"criteria/{fmt(mu)}"
    seed = claim_seed(ctx.seed, cid)
    if n > 3 and "GtF" not in ctx.verified:
        raise RuntimeError("shortcut used before G_⊗F ≅ S^d ⊗ − was verified in this run")
    t0 = time.perf_counter()
    gf = ctx.mod(GF(pf.Simple(mu)))
    label = identify(gf)
    direct = label == mu
    ms = (time.perf_counter() - t0) * 1000
    a, bad = ext_criterion(mu, n, p)
    b = is_p_core(mu, p)
    c_dom = restricted_below(mu, p, d, "dominance")
    c_lex = restricted_below(mu, p, d, "lex")
    note = f"G_⊗F(L{fmt(mu)}) {'≅ L' + fmt(mu) if direct else 'not simple'}"
    out = [
        Report(cid + "/direct", f"G_⊗F(L{fmt(mu)}) ≅ L{fmt(mu)}", "direct computation", "verified", (gf.dim,), seed, ms,
               note, chain=["G_⊗F"]),
        Report(cid + "/ext", f"Ext criterion {'holds' if a else 'fails'} ⇔ direct", "Ext criterion",
               "verified" if a == direct else "refuted", (), seed, 0.0,
               f"non-restricted ν with Ext¹ ≠ 0: {[fmt(x) for x in bad]}; {note}"),
    ]
    for key, flag in (("core", b), ("below-dominance", c_dom), ("below-lex", c_lex)):
        ok = (not flag) or direct
        out.append(Report(f"{cid}/{key}", f"{key} condition {'holds' if flag else 'does not hold'} ⇒ simple",
                          "sufficient condition", "verified" if ok else "refuted", (), seed, 0.0, note))
    return out


def core_corollary(ctx, mu):
    """Q^d ⊗ L_μ ≅ L_μ for a p-core μ via the shortcut G_⊗F."""
    cid = f"core/{fmt(mu)}"
    if "GtF" not in ctx.verified and ctx.n > 3:
        raise RuntimeError("shortcut used before G_⊗F ≅ S^d ⊗ − was verified in this run")
    rep = iso_claim(ctx, cid, f"Q^d ⊗ L{fmt(mu)} ≅ L{fmt(mu)} (p-core)", "p-core corollary",
                    lambda: ctx.mod(GF(pf.Simple(mu))), lambda: ctx.mod(pf.Simple(mu)))
    rep.chain = ["Q^d ⊗ L_μ = G_⊗F(L_μ)"]
    return rep


def verify_simples(ctx):
    out = classify_simple_tensor(ctx)
    for mu in restricted(ctx.d, ctx.n, ctx.p):
        out += check_simplicity_criteria(ctx, mu)
    return out
