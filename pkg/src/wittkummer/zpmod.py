"""Exact linear algebra over the residue rings Z/p^r.

Row-vector convention throughout: a matrix ``m`` acts on row vectors by
``x -> x @ m`` and the row module of ``m`` is the set of all ``x @ m``.
Canonical forms are Howell forms, so two row modules are equal iff their
Howell forms are identical arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "ResidueMatrix",
    "InvariantFactors",
    "QuotientStructure",
    "prime_power",
    "howell_form",
    "kernel_basis",
    "solve_linear",
    "reduce_vector",
    "quotient_invariants",
    "quotient_structure",
    "span_contains",
    "LinearSolver",
    "reduce_rows",
]


def _is_prime(n):
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_power(q):
    """Return ``(p, r)`` with ``q == p**r``; raise ValueError otherwise."""
    q = int(q)
    if q < 2:
        raise ValueError(f"modulus {q} is not a prime power")
    p = 2
    while q % p:
        p += 1
    r, rest = 0, q
    while rest % p == 0:
        rest //= p
        r += 1
    if rest != 1 or not _is_prime(p):
        raise ValueError(f"modulus {q} is not a prime power")
    return p, r


def _valuation(x, p, r):
    """p-adic valuation of a residue mod p^r (r for zero)."""
    x = int(x)
    if x == 0:
        return r
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def _as_array(entries, cols=None):
    a = np.array(entries, dtype=np.int64)
    if a.ndim == 1:
        if a.size == 0:
            a = a.reshape(0, cols or 0)
        else:
            a = a.reshape(1, -1)
    return a


@dataclass(frozen=True, eq=False)
class ResidueMatrix:
    """A dense matrix with entries in Z/q, q a prime power."""

    entries: np.ndarray
    modulus: int
    p: int = field(init=False)
    r: int = field(init=False)

    def __init__(self, entries, modulus, cols=None):
        p, r = prime_power(modulus)
        a = _as_array(entries, cols) % modulus
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)
        object.__setattr__(self, "modulus", int(modulus))
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "r", r)

    @property
    def rows(self):
        return self.entries.shape[0]

    @property
    def cols(self):
        return self.entries.shape[1]

    @property
    def shape(self):
        return self.entries.shape

    def __eq__(self, other):
        if not isinstance(other, ResidueMatrix):
            return NotImplemented
        return (self.modulus == other.modulus and self.shape == other.shape
                and bool(np.array_equal(self.entries, other.entries)))

    def __hash__(self):
        return hash((self.modulus, self.shape, self.entries.tobytes()))

    def __repr__(self):
        return f"ResidueMatrix({self.entries.tolist()}, modulus={self.modulus})"

    def tolist(self):
        return self.entries.tolist()


@dataclass(frozen=True)
class InvariantFactors:
    """Invariant factors p^e1 >= p^e2 >= ... of a finite Z/p^r-module."""

    factors: tuple

    @property
    def order(self):
        out = 1
        for f in self.factors:
            out *= f
        return out

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


@dataclass(frozen=True)
class QuotientStructure:
    """Cyclic decomposition of a quotient S/R of row modules.

    ``generators[i]`` is an ambient vector whose class generates the cyclic
    summand of order ``orders[i]``.  ``coordinates`` maps an ambient vector
    of S to its coordinates in that decomposition.
    """

    orders: tuple
    generators: np.ndarray
    modulus: int
    _solver: object
    _transform: np.ndarray

    @property
    def invariants(self):
        return InvariantFactors(tuple(self.orders))

    @property
    def order(self):
        return self.invariants.order

    def coordinates(self, vector):
        return tuple(self.coordinates_many(np.asarray(vector)[None, :])[0])

    def coordinates_many(self, vectors):
        """Coordinates of each row of ``vectors`` (rows must lie in the span)."""
        q = self.modulus
        vectors = np.asarray(vectors, dtype=np.int64)
        if self._solver is None:
            return np.zeros((vectors.shape[0], 0), dtype=np.int64)
        x, ok = self._solver.solve_many(vectors)
        if not ok.all():
            raise ValueError("vector does not lie in the ambient span")
        y = (x @ self._transform) % q
        return y % np.array(self.orders, dtype=np.int64)

    def element(self, coords):
        q = self.modulus
        v = np.zeros(self.generators.shape[1], dtype=np.int64)
        for c, g in zip(coords, self.generators):
            v = (v + int(c) * g) % q
        return v


def _valuations(col, p, r):
    """Vectorized p-adic valuation of residues mod p^r (r for zero)."""
    v = np.zeros(col.shape, dtype=np.int64)
    for t in range(1, r + 1):
        v += (col % p ** t == 0)
    return v


def _howell_array(a, p, r):
    """Howell form of the integer array ``a`` (entries mod p^r)."""
    q = p ** r
    a = np.array(a, dtype=np.int64) % q
    ncols = a.shape[1]
    pool = a[a.any(axis=1)]
    out = []
    pivot_cols = []
    for j in range(ncols):
        if pool.shape[0] == 0:
            break
        col = pool[:, j]
        if not col.any():
            continue
        vals = _valuations(col, p, r)
        best = int(np.argmin(vals))
        best_v = int(vals[best])
        prow = pool[best].copy()
        piv = p ** best_v
        unit = int(prow[j]) // piv
        prow[j:] = (prow[j:] * pow(unit, -1, q)) % q
        rest = np.delete(pool, best, axis=0)
        factors = rest[:, j] // piv
        rest[:, j:] = (rest[:, j:] - factors[:, None] * prow[None, j:]) % q
        if best_v:
            extra = (prow * (q // piv)) % q
            if extra.any():
                rest = np.concatenate([rest, extra[None, :]], axis=0)
        pool = rest[rest[:, j + 1:].any(axis=1)] if j + 1 < ncols else rest[:0]
        out.append(prow)
        pivot_cols.append((j, piv))
    for i, (j, piv) in enumerate(pivot_cols):
        prow = out[i]
        for k in range(i):
            c = int(out[k][j]) // piv
            if c:
                out[k] = (out[k] - c * prow) % q
    if not out:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(out, dtype=np.int64)


def howell_form(m):
    """Unique Howell normal form of the row module of ``m``.

    Zero rows are dropped, pivots are powers of p, entries above a pivot are
    reduced below it, and every row module element vanishing on the first
    ``j`` columns is spanned by the rows with pivot column >= ``j``.
    """
    return ResidueMatrix(_howell_array(m.entries, m.p, m.r), m.modulus, cols=m.cols)


def _reduce(h, v, q):
    """Reduce ``v`` against a Howell-form array; the result is canonical."""
    v = np.array(v, dtype=np.int64) % q
    for row in h:
        j = int(np.nonzero(row)[0][0])
        piv = int(row[j])
        c = int(v[j]) // piv
        if c:
            v = (v - c * row) % q
    return v


def reduce_rows(h, vectors, q):
    """Reduce every row of ``vectors`` against the Howell-form array ``h``."""
    v = np.array(vectors, dtype=np.int64) % q
    for row in h:
        j = int(np.nonzero(row)[0][0])
        c = v[:, j] // int(row[j])
        v = (v - c[:, None] * row[None, :]) % q
    return v


def reduce_vector(m, v):
    """Canonical representative of ``v`` modulo the row module of ``m``."""
    return _reduce(_howell_array(m.entries, m.p, m.r), v, m.modulus)


def span_contains(m, v):
    """True iff ``v`` lies in the row module of ``m``."""
    h = _howell_array(m.entries, m.p, m.r)
    return not _reduce(h, v, m.modulus).any()


class LinearSolver:
    """Solves ``x @ m == b`` for many ``b`` from one Howell form of [m | I]."""

    def __init__(self, m):
        self.modulus, self.p, self.r = m.modulus, m.p, m.r
        self.n, self.c = m.rows, m.cols
        aug = np.concatenate([m.entries, np.eye(self.n, dtype=np.int64)], axis=1)
        h = _howell_array(aug, m.p, m.r)
        lead = [int(np.nonzero(row)[0][0]) for row in h]
        split = sum(1 for j in lead if j < self.c)
        self._top, self._lead = h[:split], lead[:split]
        self._kernel = h[split:, self.c:]

    def kernel(self):
        return ResidueMatrix(self._kernel, self.modulus, cols=self.n)

    def solve_many(self, b):
        """Rows of solutions for the rows of ``b``; second value flags success."""
        q, c = self.modulus, self.c
        b = np.array(b, dtype=np.int64).reshape(-1, c) % q
        v = np.concatenate([b, np.zeros((b.shape[0], self.n), dtype=np.int64)], axis=1)
        for row, j in zip(self._top, self._lead):
            piv = int(row[j])
            k = v[:, j] // piv
            v = (v - k[:, None] * row[None, :]) % q
        ok = ~v[:, :c].any(axis=1)
        return (-v[:, c:]) % q, ok

    def solve(self, b):
        b = np.array(b, dtype=np.int64).reshape(-1)
        if b.shape[0] != self.c:
            raise ValueError(f"dimension mismatch: matrix has {self.c} columns, vector has {b.shape[0]}")
        x, ok = self.solve_many(b[None, :])
        return x[0] if ok[0] else None


def kernel_basis(m):
    """Rows generating the left kernel ``{x : x @ m == 0}``, in Howell form."""
    if m.rows == 0:
        return ResidueMatrix(np.zeros((0, 0), dtype=np.int64), m.modulus, cols=0)
    return howell_form(LinearSolver(m).kernel())


def solve_linear(m, b):
    """Some ``x`` with ``x @ m == b`` (mod q), or None when unsolvable."""
    q, n, c = m.modulus, m.rows, m.cols
    b = np.array(b, dtype=np.int64).reshape(-1) % q
    if b.shape[0] != c:
        raise ValueError(f"dimension mismatch: matrix has {c} columns, vector has {b.shape[0]}")
    if n == 0:
        return np.zeros(0, dtype=np.int64) if not b.any() else None
    return LinearSolver(m).solve(b)


def _local_smith(a, p, r):
    """Diagonalize ``a`` over Z/p^r: returns (diag valuations, V, Vinv).

    ``V`` is the accumulated column transform, so the row module of ``a @ V``
    equals that of the diagonal matrix.
    """
    q = p ** r
    a = np.array(a, dtype=np.int64) % q
    nrows, ncols = a.shape
    V = np.eye(ncols, dtype=np.int64)
    Vinv = np.eye(ncols, dtype=np.int64)
    vals = []
    t = 0
    while t < min(nrows, ncols):
        sub = a[t:, t:]
        if not sub.any():
            break
        best, best_v = None, r
        for i, j in zip(*np.nonzero(sub)):
            v = _valuation(sub[i, j], p, r)
            if v < best_v:
                best, best_v = (i + t, j + t), v
                if v == 0:
                    break
        i0, j0 = best
        a[[t, i0]] = a[[i0, t]]
        if j0 != t:
            a[:, [t, j0]] = a[:, [j0, t]]
            V[:, [t, j0]] = V[:, [j0, t]]
            Vinv[[t, j0]] = Vinv[[j0, t]]
        unit = int(a[t, t]) // p ** best_v
        a[t] = (a[t] * pow(unit, -1, q)) % q
        piv = p ** best_v
        for i in range(nrows):
            if i != t and a[i, t]:
                a[i] = (a[i] - (int(a[i, t]) // piv) * a[t]) % q
        for j in range(t + 1, ncols):
            if a[t, j]:
                c = int(a[t, j]) // piv
                a[:, j] = (a[:, j] - c * a[:, t]) % q
                V[:, j] = (V[:, j] - c * V[:, t]) % q
                Vinv[t] = (Vinv[t] + c * Vinv[j]) % q
        vals.append(best_v)
        t += 1
    vals += [r] * (ncols - len(vals))
    return vals, V, Vinv


def quotient_structure(generators, relations):
    """Cyclic decomposition of span(generators) / span(relations)."""
    q, p, r = generators.modulus, generators.p, generators.r
    k = generators.rows
    amb_cols = generators.cols
    if k == 0:
        return QuotientStructure((), np.zeros((0, amb_cols), dtype=np.int64), q,
                                 None, np.zeros((0, 0), dtype=np.int64))
    solver = LinearSolver(generators)
    x, ok = solver.solve_many(relations.entries)
    if not ok.all():
        raise ValueError("relation does not lie in the span of the generators")
    rel_coords = np.concatenate([solver.kernel().entries, x], axis=0)
    vals, V, Vinv = _local_smith(rel_coords, p, r)
    orders, gens, keep = [], [], []
    for i, v in enumerate(vals):
        if v == 0:
            continue
        orders.append(p ** v)
        gens.append((Vinv[i] @ generators.entries) % q)
        keep.append(i)
    order_idx = sorted(range(len(orders)), key=lambda i: -orders[i])
    orders = tuple(orders[i] for i in order_idx)
    keep = [keep[i] for i in order_idx]
    gen_arr = (np.array([gens[i] for i in order_idx], dtype=np.int64)
               if gens else np.zeros((0, amb_cols), dtype=np.int64))
    return QuotientStructure(orders, gen_arr, q, solver, V[:, keep])


def quotient_invariants(generators, relations):
    """Invariant factors of span(generators) / span(relations)."""
    return quotient_structure(generators, relations).invariants
