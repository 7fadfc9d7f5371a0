"""Exact dense linear algebra over the prime field F_p.

Matrices are plain ``numpy`` int64 arrays with entries in ``[0, p)``.  Every
function takes the modulus explicitly; nothing here keeps global state.
Elimination is deterministic (leftmost pivot column, topmost candidate row)
so that witnesses built on top of it are reproducible.
"""

from __future__ import annotations

import io
import struct

import numpy as np
import scipy.sparse as sp
from numba import njit

MAX_PRIME = 2**31


def check_prime(p):
    p = int(p)
    if p < 2 or p >= MAX_PRIME:
        raise ValueError(f"modulus {p} outside supported range [2, 2^31)")
    if any(p % q == 0 for q in range(2, int(p**0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    return p


def asmat(a, p):
    """Coerce to a reduced int64 2-d array."""
    a = np.asarray(a, dtype=np.int64)
    if a.ndim == 1:
        a = a.reshape(-1, 1)
    return np.mod(a, p)


def identity(n):
    return np.eye(n, dtype=np.int64)


def zeros(r, c):
    return np.zeros((r, c), dtype=np.int64)


@njit(cache=True)
def _inv_mod(a, p):
    t, newt = 0, 1
    r, newr = p, a % p
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    if t < 0:
        t += p
    return t


def inv_mod(a, p):
    a = int(a) % p
    if a == 0:
        raise ZeroDivisionError("0 has no inverse mod p")
    return pow(a, p - 2, p)


@njit(cache=True)
def _rref_inplace(a, p):
    rows, cols = a.shape
    piv = np.empty(min(rows, cols), dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        k = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                k = i
                break
        if k < 0:
            continue
        if k != r:
            for j in range(c, cols):
                t = a[k, j]
                a[k, j] = a[r, j]
                a[r, j] = t
        inv = _inv_mod(a[r, c], p)
        if inv != 1:
            for j in range(c, cols):
                a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i == r:
                continue
            f = a[i, c]
            if f == 0:
                continue
            g = p - f
            for j in range(c, cols):
                if a[r, j] != 0:
                    a[i, j] = (a[i, j] + g * a[r, j]) % p
        piv[r] = c
        r += 1
    return piv[:r]


def rref(m, p):
    """Reduced row echelon form.

    Returns ``(R, pivots)`` where ``pivots`` lists the pivot columns; the rank
    is ``len(pivots)``.
    """
    a = np.array(asmat(m, p), dtype=np.int64, order="C", copy=True)
    if a.size == 0:
        return a, []
    piv = _rref_inplace(a, int(p))
    return a, [int(c) for c in piv]


def rref_rank(m, p):
    r, piv = rref(m, p)
    return r, piv, len(piv)


def rank(m, p):
    m = asmat(m, p)
    if m.size == 0:
        return 0
    if m.shape[0] > m.shape[1]:
        m = m.T
    return len(rref(m, p)[1])


def _kernel_rref(m, p):
    rows, cols = m.shape
    r, piv = rref(m, p)
    free = [c for c in range(cols) if c not in set(piv)]
    k = np.zeros((cols, len(free)), dtype=np.int64)
    for t, f in enumerate(free):
        k[f, t] = 1
        for i, c in enumerate(piv):
            k[c, t] = (-r[i, f]) % p
    return k


def kernel(m, p, rng=None):
    """Basis of the right null space, as the columns of a matrix.

    Tall matrices are first compressed by a random row sketch.  The candidate
    kernel always contains the true one; it is re-checked against the full
    matrix and refined until exact, so the answer never depends on the sketch.
    """
    m = asmat(m, p)
    rows, cols = m.shape
    if cols == 0:
        return zeros(0, 0)
    m = m[np.any(m != 0, axis=1)]
    if m.shape[0] == 0:
        return identity(cols)
    if m.shape[0] <= 2 * cols + 16:
        return _kernel_rref(m, p)
    rng = np.random.default_rng(0x5EED) if rng is None else rng
    sketch = rng.integers(0, p, size=(cols + 8, m.shape[0]), dtype=np.int64)
    basis = _kernel_rref(matmul(sketch, m, p), p)
    if basis.shape[1] == 0:
        return basis
    rest = matmul(m, basis, p)
    if not rest.any():
        return basis
    return matmul(basis, kernel(rest, p, rng), p)


kernel_basis = kernel


def image(m, p):
    """Basis of the column space (columns of the result)."""
    m = asmat(m, p)
    if m.size == 0:
        return zeros(m.shape[0], 0)
    r, piv = rref(m.T, p)
    return np.ascontiguousarray(r[: len(piv)].T)


def row_basis(m, p):
    m = asmat(m, p)
    if m.size == 0:
        return zeros(0, m.shape[1])
    r, piv = rref(m, p)
    return r[: len(piv)]


def solve(a, b, p):
    """Particular solution ``x`` of ``a x = b`` or ``None`` when inconsistent."""
    a = asmat(a, p)
    b = asmat(b, p)
    if a.shape[0] != b.shape[0]:
        raise ValueError(f"row mismatch: {a.shape} vs {b.shape}")
    n = a.shape[1]
    aug = np.concatenate([a, b], axis=1)
    r, piv = rref(aug, p)
    if any(c >= n for c in piv):
        return None
    x = zeros(n, b.shape[1])
    for i, c in enumerate(piv):
        x[c] = r[i, n:]
    return x


def inverse(a, p):
    a = asmat(a, p)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("inverse of non-square matrix")
    r, piv = rref(np.concatenate([a, identity(n)], axis=1), p)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise ZeroDivisionError("singular matrix")
    return np.ascontiguousarray(r[:, n:])


def is_invertible(a, p):
    a = asmat(a, p)
    return a.shape[0] == a.shape[1] and rank(a, p) == a.shape[0]


def left_inverse(basis, p):
    """A matrix ``C`` with ``C @ basis = I`` for a full column rank ``basis``."""
    basis = asmat(basis, p)
    n, k = basis.shape
    if k == 0:
        return zeros(0, n)
    r, piv = rref(basis, p)
    if len(piv) < k:
        raise ValueError("basis columns are dependent")
    rows = _independent_rows(basis, p)
    sq = inverse(basis[rows], p)
    c = zeros(k, n)
    c[:, rows] = sq
    return c


def _independent_rows(m, p):
    r, piv = rref(m.T, p)
    return list(piv)


@njit(cache=True)
def _matmul_big(a, b, p):
    n, k = a.shape
    m = b.shape[1]
    out = np.zeros((n, m), dtype=np.int64)
    for i in range(n):
        for t in range(k):
            x = a[i, t]
            if x == 0:
                continue
            for j in range(m):
                out[i, j] = (out[i, j] + x * b[t, j]) % p
    return out


def matmul(a, b, p):
    """Product of dense and/or scipy-sparse matrices, reduced mod p."""
    if sp.issparse(a) or sp.issparse(b):
        return _spmm(a, b, p)
    a = np.asarray(a, dtype=np.int64) % p
    b = np.asarray(b, dtype=np.int64) % p
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if a.size == 0 or b.size == 0:
        return zeros(a.shape[0], b.shape[1])
    bound = (p - 1) ** 2
    chunk = (2**53) // max(bound, 1)
    if chunk >= 1:
        k = a.shape[1]
        af = a.astype(np.float64)
        bf = b.astype(np.float64)
        if chunk >= k:
            return np.fmod(af @ bf, p).astype(np.int64)
        out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
        for s in range(0, k, chunk):
            part = np.fmod(af[:, s : s + chunk] @ bf[s : s + chunk], p).astype(np.int64)
            out = (out + part) % p
        return out
    return _matmul_big(np.ascontiguousarray(a % p), np.ascontiguousarray(b % p), p)


def _spmm(a, b, p):
    if p < 2**26:
        out = a @ b
        if sp.issparse(out):
            out = out.tocsr()
            out.data %= p
            out.eliminate_zeros()
            return out
        return np.asarray(out, dtype=np.int64) % p
    # split the dense/right factor into 16-bit halves to stay inside int64
    if sp.issparse(b):
        a, b = b.T, a.T
        return _spmm(a, b, p).T
    b = np.asarray(b, dtype=np.int64)
    lo = b & 0xFFFF
    hi = b >> 16
    x = np.asarray(a @ lo, dtype=np.int64) % p
    y = np.asarray(a @ hi, dtype=np.int64) % p
    return (x + (y * 65536) % p) % p


def kron(a, b, p):
    """Kronecker product: ``(a⊗b)[(i,k),(j,l)] = a[i,j] * b[k,l]``."""
    if sp.issparse(a) or sp.issparse(b):
        out = sp.kron(a, b, format="csr")
        out.data %= p
        return out
    return np.kron(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)) % p


def span_sum(u, w, p):
    if u.shape[0] != w.shape[0]:
        raise ValueError("ambient dimension mismatch")
    return image(np.concatenate([u, w], axis=1), p)


def meet_join(u, w, p):
    """Bases (as columns) of ``U ∩ W`` and ``U + W``."""
    u = asmat(u, p)
    w = asmat(w, p)
    if u.shape[0] != w.shape[0]:
        raise ValueError("ambient dimension mismatch")
    u = image(u, p)
    w = image(w, p)
    join = image(np.concatenate([u, w], axis=1), p)
    k = kernel(np.concatenate([u, (-w) % p], axis=1), p)
    meet = image(matmul(u, k[: u.shape[1]], p), p) if k.size else zeros(u.shape[0], 0)
    return meet, join


subspace_meet_join = meet_join


def in_span(basis, vecs, p):
    """True when every column of ``vecs`` lies in the column span of ``basis``."""
    if vecs.shape[1] == 0:
        return True
    if basis.shape[1] == 0:
        return not np.any(vecs % p)
    return rank(np.concatenate([basis, vecs], axis=1), p) == rank(basis, p)


def charpoly(a, p):
    """Characteristic polynomial coefficients, highest degree first (Hessenberg)."""
    a = asmat(a, p).copy()
    n = a.shape[0]
    # reduce to upper Hessenberg form by similarity
    for j in range(n - 2):
        k = next((i for i in range(j + 1, n) if a[i, j]), None)
        if k is None:
            continue
        if k != j + 1:
            a[[k, j + 1]] = a[[j + 1, k]]
            a[:, [k, j + 1]] = a[:, [j + 1, k]]
        inv = inv_mod(a[j + 1, j], p)
        for i in range(j + 2, n):
            f = a[i, j] * inv % p
            if f:
                a[i] = (a[i] - f * a[j + 1]) % p
                a[:, j + 1] = (a[:, j + 1] + f * a[:, i]) % p
    # recurrence on leading principal submatrices
    polys = [np.array([1], dtype=np.int64)]
    for m in range(1, n + 1):
        pm = np.concatenate([polys[m - 1], [0]]) - np.concatenate([[0], a[m - 1, m - 1] * polys[m - 1]])
        pm %= p
        t = 1
        for i in range(1, m):
            t = t * a[m - i, m - i - 1] % p
            coef = t * a[m - i - 1, m - 1] % p
            q = polys[m - i - 1]
            pad = np.concatenate([np.zeros(len(pm) - len(q), dtype=np.int64), q])
            pm = (pm - coef * pad) % p
        polys.append(pm)
    return [int(c) for c in polys[n]]


def poly_eval_matrix(coeffs, a, p):
    """Evaluate a polynomial (highest degree first) at a square matrix."""
    n = a.shape[0]
    out = zeros(n, n)
    for c in coeffs:
        out = matmul(out, a, p)
        out[np.diag_indices(n)] = (out[np.diag_indices(n)] + c) % p
    return out


def matpow(a, e, p):
    n = a.shape[0]
    out = identity(n)
    base = asmat(a, p)
    while e:
        if e & 1:
            out = matmul(out, base, p)
        base = matmul(base, base, p)
        e >>= 1
    return out


# --- binary record -------------------------------------------------------

MAGIC = b"SPFM"
VERSION = 1
_HEADER = struct.Struct("<4sIIII")


def write_record(stream, m, p):
    """Append one matrix record: header then row-major little-endian u32."""
    m = asmat(m, p)
    rows, cols = m.shape
    stream.write(_HEADER.pack(MAGIC, VERSION, int(p), rows, cols))
    stream.write(np.ascontiguousarray(m, dtype="<u4").tobytes())


def read_record(stream):
    """Read one record; returns ``(matrix, p)``."""
    head = stream.read(_HEADER.size)
    if len(head) < _HEADER.size:
        raise EOFError("truncated matrix record header")
    magic, version, p, rows, cols = _HEADER.unpack(head)
    if magic != MAGIC:
        raise ValueError(f"bad magic {magic!r}")
    if version != VERSION:
        raise ValueError(f"unsupported record version {version}")
    raw = stream.read(4 * rows * cols)
    if len(raw) != 4 * rows * cols:
        raise EOFError("truncated matrix record body")
    m = np.frombuffer(raw, dtype="<u4").astype(np.int64).reshape(rows, cols)
    return m, p


def dumps(matrices, p):
    buf = io.BytesIO()
    for m in matrices:
        write_record(buf, m, p)
    return buf.getvalue()


def loads(data):
    buf = io.BytesIO(data)
    out = []
    p = None
    while buf.tell() < len(data):
        m, p = read_record(buf)
        out.append(m)
    return out, p


class Echelon:
    """A growing subspace of F_p^n kept as reduced row-echelon rows."""

    def __init__(self, n, p):
        self.n = n
        self.p = p
        self.rows = zeros(0, n)
        self.piv = []

    @property
    def dim(self):
        return len(self.piv)

    def reduce(self, vecs):
        """Reduce row vectors modulo the current span."""
        vecs = asmat(vecs, self.p).reshape(-1, self.n)
        if not self.piv or vecs.shape[0] == 0:
            return vecs
        return (vecs - matmul(vecs[:, self.piv], self.rows, self.p)) % self.p

    def add(self, vecs):
        """Add row vectors; returns the rows of the newly gained directions."""
        red = self.reduce(vecs)
        red = red[np.any(red != 0, axis=1)]
        if red.shape[0] == 0:
            return zeros(0, self.n)
        new, newpiv = rref(red, self.p)
        new = new[: len(newpiv)]
        if self.piv:
            self.rows = (self.rows - matmul(self.rows[:, newpiv], new, self.p)) % self.p
        self.rows = np.concatenate([self.rows, new], axis=0)
        self.piv = self.piv + list(newpiv)
        return new

    def contains(self, vecs):
        return not self.reduce(vecs).any()

    def basis(self):
        """Basis as columns."""
        return np.ascontiguousarray(self.rows.T)


solve_linear = solve
kron_product = kron
