"""Command-line front end."""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import logging
import os
import struct
import sys
import time

import scipy.sparse as sp

from . import __version__, adjoints, ff, modules, schur
from . import polyfun as pf
from .combin import fmt, is_p_regular, mullineux, parse_parts

log = logging.getLogger("strictpoly")

BAD = ("refuted", "discrepancy")


# --- on-disk cache -----------------------------------------------------------------------


class Cache:
    """Files ``<dir>/<kind>/<sha>.bin``: u32 header length, JSON header, payload.

    The header carries the key, the code version and a SHA-256 of the payload;
    a version mismatch is a miss and a checksum mismatch is a miss with a warning.
    """

    def __init__(self, root, version=__version__):
        self.root = root
        self.version = version

    def _path(self, kind, key):
        digest = hashlib.sha256(f"{self.version}|{key}".encode()).hexdigest()[:32]
        return os.path.join(self.root, kind, digest + ".bin")

    def store(self, kind, key, payload, meta=None):
        path = self._path(kind, key)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        head = {"key": key, "version": self.version, "sha256": hashlib.sha256(payload).hexdigest(), "meta": meta or {}}
        raw = json.dumps(head, sort_keys=True).encode()
        tmp = path + ".tmp"
        with open(tmp, "wb") as fh:
            fh.write(struct.pack("<I", len(raw)) + raw + payload)
        os.replace(tmp, path)
        return path

    def load(self, kind, key):
        """``(payload, meta)`` or None."""
        path = self._path(kind, key)
        if not os.path.exists(path):
            return None
        try:
            with open(path, "rb") as fh:
                (size,) = struct.unpack("<I", fh.read(4))
                head = json.loads(fh.read(size))
                payload = fh.read()
        except (OSError, ValueError, struct.error):
            log.warning("unreadable cache file %s; recomputing", path)
            return None
        if head.get("version") != self.version or head.get("key") != key:
            return None
        if hashlib.sha256(payload).hexdigest() != head.get("sha256"):
            log.warning("checksum mismatch in %s; recomputing", path)
            return None
        return payload, head.get("meta", {})

    # realizations

    @staticmethod
    def realization_key(expr, m, p):
        return f"real|{pf.render(expr)}|{m}|{p}"

    def store_realization(self, r):
        payload = ff.dumps([pf._dense(r.L), pf._dense(r.C)], r.p)
        meta = {"m": r.m, "d": r.d, "extra": r.extra, "weights": [list(w) for w in r.weights]}
        return self.store("realization", self.realization_key(r.expr, r.m, r.p), payload, meta)

    def load_realization(self, expr, m, p):
        hit = self.load("realization", self.realization_key(expr, m, p))
        if hit is None:
            return None
        payload, meta = hit
        (L, C), _ = ff.loads(payload)
        weights = [tuple(w) for w in meta["weights"]]
        return pf.Realization(expr, m, meta["d"], p, sp.csr_matrix(L), sp.csr_matrix(C), meta["extra"], weights,
                              pf.render(expr))

    # Schur algebra structure constants

    def store_algebra(self, alg):
        buf = io.BytesIO()
        alg.dump_structure(buf)
        return self.store("schur", f"schur|{alg.n}|{alg.d}|{alg.p}", buf.getvalue())

    def load_algebra(self, alg):
        hit = self.load("schur", f"schur|{alg.n}|{alg.d}|{alg.p}")
        if hit is None:
            return 0
        return alg.load_structure(io.BytesIO(hit[0]))

    # reports

    def store_reports(self, key, reports):
        payload = "\n".join(r.line() for r in reports).encode()
        return self.store("reports", key, payload)


def cached_realize(cache, expr, m, p):
    key = (expr, m, p)
    if key in pf._MEMO:
        return pf._MEMO[key]
    if cache is not None:
        r = cache.load_realization(expr, m, p)
        if r is not None:
            r.check()
            pf._MEMO[key] = r
            return r
    r = pf.realize(expr, m, p)
    if cache is not None:
        cache.store_realization(r)
    return r


# --- output ---------------------------------------------------------------------------------


def emit(args, obj):
    if args.format == "json":
        print(json.dumps(obj, ensure_ascii=False, sort_keys=True))
    else:
        if isinstance(obj, dict):
            print("  ".join(f"{k}={_txt(v)}" for k, v in obj.items()))
        else:
            print(obj)


def _txt(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_txt(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{_txt(k)}: {_txt(x)}" for k, x in v.items()) + "}"
    return str(v)


def emit_reports(args, reports):
    for r in reports:
        if args.format == "json":
            obj = r.to_json()
            if args.no_timing:
                obj.pop("ms")
            print(json.dumps(obj, ensure_ascii=False, sort_keys=True))
        else:
            print(f"{r.status:<12} {r.id}  {r.claim}  [{r.detail}]")
    bad = [r for r in reports if r.status in BAD]
    if args.format == "text":
        counts = {s: sum(r.status == s for r in reports) for s in adjoints.STATUSES}
        print("summary: " + ", ".join(f"{k} {v}" for k, v in counts.items()))
    return 1 if bad else 0


# --- commands ------------------------------------------------------------------------------


def _cache(args):
    root = args.cache_dir or os.environ.get("SPF_CACHE_DIR")
    return Cache(root) if root else None


def _context(args, cache):
    alg = schur.schur_algebra(args.n, args.d, args.p)
    if cache is not None:
        cache.load_algebra(alg)
    ctx = adjoints.AdjointContext(args.p, args.n, args.d, seed=args.seed, jobs=args.jobs,
                                  cache_dir=cache.root if cache else None)
    if cache is not None:
        cache.store_algebra(alg)
    return ctx


def _parse(args, text):
    return pf.parse_expr(text, args.d)


def _module_of(args, cache, e, m):
    if isinstance(e, pf.SymExpr):
        return e.build(args.p)
    return cached_realize(cache, e, m, args.p).module


def cmd_info(args, cache):
    from .combin import is_p_restricted, partitions

    alg = schur.schur_algebra(args.n, args.d, args.p)
    parts = partitions(args.d, args.n)
    simples = {fmt(lam): pf.realize(pf.Simple(lam), args.n, args.p).dim for lam in parts}
    emit(args, {
        "version": __version__,
        "p": args.p, "n": args.n, "d": args.d,
        "schur_dim": alg.dim,
        "associative": bool(alg.check_associativity(200, args.seed)[0]),
        "partitions": [fmt(x) for x in parts],
        "p_restricted": [fmt(x) for x in parts if is_p_restricted(x, args.p)],
        "p_regular": [fmt(x) for x in parts if is_p_regular(x, args.p)],
        "simple_dims": simples,
    })
    return 0


def cmd_eval(args, cache):
    e = _parse(args, args.expr)
    m = args.m or args.n
    t0 = time.perf_counter()
    if isinstance(e, pf.SymExpr):
        mod = e.build(args.p)
        out = {"expr": pf.render_sym(e), "dim": mod.dim, "algebra": list(mod.algebra_id)}
        if mod.dim:
            out["factor_dims"] = sorted(f.dim for f in modules.composition_factors(mod, args.seed))
    else:
        mod = cached_realize(cache, e, m, args.p).module
        out = {"expr": pf.render(e), "m": m, "dim": mod.dim,
               "character": {fmt(w): c for w, c in sorted(mod.character().items(), reverse=True)}}
        if mod.dim:
            mult = pf.character_multiplicities(mod)
            out["composition"] = {fmt(k): v for k, v in mult.items()}
            out["simple"] = sum(mult.values()) == 1
    out["ms"] = round((time.perf_counter() - t0) * 1000, 1)
    if args.no_timing:
        out.pop("ms")
    emit(args, out)
    return 0


def cmd_iso(args, cache):
    a, b = _parse(args, args.lhs), _parse(args, args.rhs)
    if isinstance(a, pf.SymExpr) != isinstance(b, pf.SymExpr):
        raise UsageError("cannot compare a functor with a symmetric group module")
    ctx = _context(args, cache)
    m = args.n
    rep = adjoints.iso_claim(ctx, "iso", f"{args.lhs} ≅ {args.rhs}", "command line",
                             lambda: _module_of(args, cache, a, m), lambda: _module_of(args, cache, b, m))
    return emit_reports(args, [rep])


def cmd_verify(args, cache):
    suites = ["identities", "adjoints", "simples", "mullineux"] if args.suite == "all" else [args.suite]
    reports = []
    ctx = None
    for s in suites:
        if s == "mullineux":
            reports += adjoints.verify_mullineux(args.seed)
            continue
        ctx = ctx or _context(args, cache)
        if s == "identities":
            reports += adjoints.verify_identity_suite(ctx)
        elif s == "adjoints":
            reports += adjoints.verify_adjoint_theorems(ctx) + adjoints.verify_monoidality(ctx)
        elif s == "simples":
            if args.n > 3 and "GtF" not in adjoints.VERIFIED:
                small = adjoints.AdjointContext(args.p, 3, 3, seed=args.seed, jobs=args.jobs)
                pre = adjoints.verify_adjoint_theorems(small)
                reports += pre
            reports += adjoints.verify_simples(ctx)
    if cache is not None:
        cache.store_reports(f"reports|{args.suite}|{args.p}|{args.n}|{args.d}|{args.seed}", reports)
    return emit_reports(args, reports)


def cmd_table(args, cache):
    if args.kind != "simple-tensor":
        raise UsageError(f"unknown table kind {args.kind!r}")
    ctx = _context(args, cache)
    if args.n > 3 and "GtF" not in adjoints.VERIFIED:
        adjoints.verify_adjoint_theorems(adjoints.AdjointContext(args.p, 3, 3, seed=args.seed))
    reports = adjoints.classify_simple_tensor(ctx)
    if args.format == "json":
        return emit_reports(args, reports)
    cells = {}
    for r in reports:
        key, kind = r.id.rsplit("/", 1)
        cells.setdefault(key, {})[kind] = r
    for key, parts in cells.items():
        v = parts["verdict"]
        flags = [k for k, r in parts.items() if r.status in BAD]
        line = f"{key.split('/', 1)[1]:<20} {v.detail}"
        if flags:
            line += "   discrepancy: " + ", ".join(flags)
        print(line)
    return 1 if any(r.status in BAD for r in reports) else 0


def cmd_mullineux(args, cache):
    lam = parse_parts(args.lam)
    if not is_p_regular(lam, args.p):
        raise UsageError(f"{fmt(lam)} is not {args.p}-regular")
    res = mullineux(lam, args.p)
    if args.format == "json":
        emit(args, {"lambda": list(lam), "p": args.p, "mullineux": list(res)})
    else:
        print(fmt(res))
    return 0


def cmd_ext(args, cache):
    mu, nu = parse_parts(args.mu), parse_parts(args.nu)
    for x in (mu, nu):
        if sum(x) != args.d:
            raise UsageError(f"{fmt(x)} is not a partition of {args.d}")
    val = pf.ext1(mu, nu, args.n, args.p)
    if args.format == "json":
        emit(args, {"mu": list(mu), "nu": list(nu), "p": args.p, "n": args.n, "ext1": val})
    else:
        print(val)
    return 0


COMMANDS = {
    "info": cmd_info,
    "eval": cmd_eval,
    "iso": cmd_iso,
    "verify": cmd_verify,
    "table": cmd_table,
    "mullineux": cmd_mullineux,
    "ext": cmd_ext,
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--p", type=int, default=3, help="characteristic (prime)")
    common.add_argument("--n", type=int, default=None, help="evaluation dimension (default d)")
    common.add_argument("--d", type=int, default=3, help="degree")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache-dir", default=None, help="cache directory (fallback: $SPF_CACHE_DIR)")
    common.add_argument("--format", choices=("json", "text"), default="text")
    common.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker threads for suites")
    common.add_argument("--no-timing", action="store_true", help="omit timing fields from output")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = _Parser(prog="strictpoly", description="Strict polynomial functors over F_p.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("info", parents=[common], help="configuration summary")
    e = sub.add_parser("eval", parents=[common], help="evaluate an expression")
    e.add_argument("--expr", required=True)
    e.add_argument("--m", type=int, default=None)
    i = sub.add_parser("iso", parents=[common], help="decide isomorphism of two expressions")
    i.add_argument("--lhs", required=True)
    i.add_argument("--rhs", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("--suite", choices=("identities", "adjoints", "simples", "mullineux", "all"), required=True)
    t = sub.add_parser("table", parents=[common], help="tables")
    t.add_argument("--kind", default="simple-tensor")
    mu = sub.add_parser("mullineux", parents=[common], help="Mullineux image of a p-regular partition")
    mu.add_argument("--lambda", dest="lam", required=True)
    x = sub.add_parser("ext", parents=[common], help="dim Ext^1(L_mu, L_nu)")
    x.add_argument("--mu", required=True)
    x.add_argument("--nu", required=True)
    return parser


def run_command(argv):
    try:
        args = build_parser().parse_args(argv)
        if args.n is None:
            args.n = args.d
        ff.check_prime(args.p)
        if args.command in ("iso", "verify", "table") and args.n < args.d:
            raise UsageError("adjoint commands need n >= d")
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    cache = _cache(args)
    try:
        return COMMANDS[args.command](args, cache)
    except (UsageError, pf.ParseError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))
