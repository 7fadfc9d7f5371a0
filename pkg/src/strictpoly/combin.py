"""Compositions, partitions, orders on them, and the Mullineux map.

Compositions and partitions are plain tuples of ints.  A partition is kept in
canonical form: weakly decreasing with trailing zeros stripped.
"""

from __future__ import annotations

from functools import lru_cache
from math import comb, factorial
from typing import NamedTuple


def partition(parts):
    """Canonical partition tuple; raises on negative or increasing parts."""
    parts = tuple(int(x) for x in parts)
    if any(x < 0 for x in parts):
        raise ValueError(f"negative part in {parts}")
    if any(a < b for a, b in zip(parts, parts[1:])):
        raise ValueError(f"{parts} is not weakly decreasing")
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def parse_parts(text):
    """Parse ``"a,b,c"`` into a tuple of non-negative ints."""
    text = text.strip().strip("()")
    if not text:
        return ()
    try:
        parts = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise ValueError(f"cannot parse parts from {text!r}") from None
    if any(x < 0 for x in parts):
        raise ValueError(f"negative part in {text!r}")
    return parts


def fmt(parts):
    return "(" + ",".join(str(x) for x in parts) + ")"


def pad(parts, n):
    if len(parts) > n:
        raise ValueError(f"{parts} has more than {n} parts")
    return tuple(parts) + (0,) * (n - len(parts))


def compositions(n, d):
    """All compositions of d into n parts, lexicographically descending."""
    if n == 1:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in compositions(n - 1, d - first):
            out.append((first,) + rest)
    return out


@lru_cache(maxsize=None)
def _partitions(d, max_part, max_len):
    if d == 0:
        return ((),)
    if max_len == 0:
        return ()
    out = []
    for first in range(min(d, max_part), 0, -1):
        for rest in _partitions(d - first, first, max_len - 1):
            out.append((first,) + rest)
    return tuple(out)


def partitions(d, max_len=None):
    """Partitions of d (at most ``max_len`` parts), lexicographically descending."""
    return list(_partitions(d, d, d if max_len is None else max_len))


def is_p_restricted(lam, p):
    lam = tuple(lam) + (0,)
    return all(lam[i] - lam[i + 1] < p for i in range(len(lam) - 1))


def is_p_regular(lam, p):
    lam = partition(lam)
    return all(lam.count(x) < p for x in set(lam))


def enumerate_lambda(n, d, kind="all", p=None):
    """Weights of ``Λ(n,d)``, ``Λ⁺(n,d)`` or ``Λ⁺_p(n,d)``, lex descending.

    Dominant and restricted weights are returned as partitions (trailing zeros
    dropped).
    """
    if n < 1 or d < 0:
        raise ValueError("need n >= 1 and d >= 0")
    if kind == "all":
        return compositions(n, d)
    if kind == "dominant":
        return partitions(d, n)
    if kind == "p_restricted":
        if p is None:
            raise ValueError("p_restricted enumeration needs p")
        return [lam for lam in partitions(d, n) if is_p_restricted(lam, p)]
    if kind == "p_regular":
        return [lam for lam in partitions(d, n) if is_p_regular(lam, p)]
    raise ValueError(f"unknown kind {kind!r}")


def conjugate(lam):
    lam = partition(lam)
    if not lam:
        return ()
    return tuple(sum(1 for x in lam if x > j) for j in range(lam[0]))


def hook_lengths(lam):
    """Hook length of every box, row by row."""
    lam = partition(lam)
    conj = conjugate(lam)
    return [[lam[i] - j + conj[j] - i - 1 for j in range(lam[i])] for i in range(len(lam))]


def is_p_core(lam, p):
    return all(h % p for row in hook_lengths(lam) for h in row)


class Flags(NamedTuple):
    p_restricted: bool
    p_regular: bool
    p_core: bool


def classify(lam, p):
    return Flags(is_p_restricted(lam, p), is_p_regular(lam, p), is_p_core(lam, p))


def count_standard_tableaux(lam):
    lam = partition(lam)
    prod = 1
    for row in hook_lengths(lam):
        for h in row:
            prod *= h
    return factorial(sum(lam)) // prod


def _beta(lam, length):
    lam = pad(partition(lam), length)
    return [lam[i] + length - 1 - i for i in range(length)]


def _from_beta(beta):
    beta = sorted(beta, reverse=True)
    length = len(beta)
    return partition(beta[i] - (length - 1 - i) for i in range(length))


def remove_rim_hooks(lam, p, order=None):
    """Remove rim p-hooks one at a time; ``order`` picks which removable hook.

    Removing a rim p-hook is the move ``b -> b - p`` on a beta-set.  The
    default removes the hook whose beta-number is largest.
    """
    lam = partition(lam)
    beta = set(_beta(lam, len(lam) + p))
    steps = []
    while True:
        moves = sorted(b for b in beta if b >= p and b - p not in beta)
        if not moves:
            break
        b = moves[-1] if order is None else order(moves)
        beta.remove(b)
        beta.add(b - p)
        steps.append(_from_beta(beta))
    return _from_beta(beta), steps


def p_core_of(lam, p):
    return remove_rim_hooks(lam, p)[0]


def p_weight(lam, p):
    return (sum(partition(lam)) - sum(p_core_of(lam, p))) // p


def dominates(lam, mu):
    """True when ``lam ⊵ mu`` (partial sums of lam never below those of mu)."""
    a = b = 0
    for i in range(max(len(lam), len(mu))):
        a += lam[i] if i < len(lam) else 0
        b += mu[i] if i < len(mu) else 0
        if a < b:
            return False
    return True


def compare(lam, mu, order="dominance"):
    """Return ``'less' | 'greater' | 'equal' | 'incomparable'``."""
    lam, mu = tuple(lam), tuple(mu)
    if sum(lam) != sum(mu):
        raise ValueError(f"degrees differ: {lam} vs {mu}")
    if order == "lex":
        a, b = _strip(lam), _strip(mu)
        if a == b:
            return "equal"
        return "greater" if a > b else "less"
    if order != "dominance":
        raise ValueError(f"unknown order {order!r}")
    ge, le = dominates(lam, mu), dominates(mu, lam)
    if ge and le:
        return "equal"
    if ge:
        return "greater"
    return "less" if le else "incomparable"


def _strip(parts):
    parts = tuple(parts)
    while parts and parts[-1] == 0:
        parts = parts[:-1]
    return parts


def dominance_lex_key(lam):
    """Sort key refining dominance: larger key is never dominated by smaller."""
    return _strip(lam)


# --- Mullineux ---------------------------------------------------------------


def rim(lam):
    """Rim boxes ``(row, col)`` (0-based), from top right to bottom left."""
    lam = partition(lam)
    out = []
    for i, row in enumerate(lam):
        nxt = lam[i + 1] if i + 1 < len(lam) else 0
        for j in range(row - 1, max(nxt, 1) - 2, -1):
            out.append((i, j))
    return out


def p_rim(lam, p):
    """Boxes of the p-rim: rim read in p-segments, restarting one row down."""
    boxes = rim(lam)
    by_row = {}
    for idx, (i, _) in enumerate(boxes):
        by_row.setdefault(i, idx)
    out = []
    start = 0
    while start is not None and start < len(boxes):
        seg = boxes[start : start + p]
        out.extend(seg)
        last_row = seg[-1][0]
        start = by_row.get(last_row + 1)
    return out


def _strip_p_rim(lam, p):
    lam = list(partition(lam))
    for i, _ in p_rim(lam, p):
        lam[i] -= 1
    return partition(lam)


def mullineux_symbol(lam, p):
    """Columns ``(a_i, r_i)``: p-rim size and number of rows at each step."""
    lam = partition(lam)
    if not is_p_regular(lam, p):
        raise ValueError(f"{fmt(lam)} is not {p}-regular")
    cols = []
    while lam:
        cols.append((len(p_rim(lam, p)), len(lam)))
        lam = _strip_p_rim(lam, p)
    return tuple(cols)


@lru_cache(maxsize=None)
def _symbol_table(d, p):
    table = {}
    for lam in partitions(d):
        if is_p_regular(lam, p):
            sym = mullineux_symbol(lam, p)
            if sym in table:
                raise AssertionError(f"symbol collision for {lam} and {table[sym]}")
            table[sym] = lam
    return table


def from_mullineux_symbol(symbol, p):
    d = sum(a for a, _ in symbol)
    try:
        return _symbol_table(d, p)[tuple(symbol)]
    except KeyError:
        raise ValueError(f"no {p}-regular partition has symbol {symbol}") from None


def mullineux(lam, p):
    """The Mullineux involution on p-regular partitions.

    Conjugates the symbol: column ``(a, r)`` becomes ``(a, a - r + ε)`` with
    ``ε = 1`` unless ``p`` divides ``a``.
    """
    lam = partition(lam)
    if not lam:
        return ()
    sym = mullineux_symbol(lam, p)
    twisted = tuple((a, a - r + (0 if a % p == 0 else 1)) for a, r in sym)
    return from_mullineux_symbol(twisted, p)


def mullineux_restricted(lam, p):
    """The same involution transported to p-restricted labels by conjugation."""
    lam = partition(lam)
    if not is_p_restricted(lam, p):
        raise ValueError(f"{fmt(lam)} is not {p}-restricted")
    return conjugate(mullineux(conjugate(lam), p))


def weights_count(n, d):
    return comb(n + d - 1, n - 1)
