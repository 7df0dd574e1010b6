"""Finite commutative F_p-algebras, group actions on them, and the
decompositions used by the Frobenius factorization.

An algebra of dimension d is stored by structure constants
``c[i, j, k]`` with ``b_i * b_j = sum_k c[i, j, k] b_k``.  Elements are
encoded as integers in ``range(p**d)`` (base-p digits, least significant
digit = coordinate of ``b_0``), which lets Witt-vector arithmetic use
plain numpy integer arrays.  Linear maps are matrices acting on
coordinate rows: ``x -> x @ M``.
"""

from __future__ import annotations

import itertools

import numpy as np

from .zpmod import ResidueMatrix, howell_form, kernel_basis, solve_linear, _is_prime

__all__ = [
    "FiniteAlgebra", "AlgebraAction", "PermutationGSet", "ResidueDecomposition",
    "prime_field", "make_finite_field", "make_product", "make_truncated_poly",
    "frobenius_endomorphism", "nilradical", "nilpotency_data", "idempotents",
    "primitive_idempotents", "residue_decomposition", "fixed_subring",
    "norm_element", "induced_algebra", "subalgebra", "trivial_action",
    "action_from_generators", "galois_action", "is_irreducible",
]

TABLE_LIMIT = 1024


# -- small linear algebra over F_p ------------------------------------------

def _rowspace(rows, p, ncols):
    rows = np.array(rows, dtype=np.int64).reshape(-1, ncols)
    return howell_form(ResidueMatrix(rows, p, cols=ncols)).entries


def _kernel(m, p):
    m = np.asarray(m, dtype=np.int64)
    return kernel_basis(ResidueMatrix(m, p, cols=m.shape[1])).entries


def _solve(m, b, p):
    m = np.asarray(m, dtype=np.int64)
    return solve_linear(ResidueMatrix(m, p, cols=m.shape[1]), b)


def _matpow(m, k, p):
    out = np.eye(m.shape[0], dtype=np.int64)
    for _ in range(k):
        out = (out @ m) % p
    return out


def _rank(m, p):
    m = np.asarray(m, dtype=np.int64)
    if m.size == 0:
        return 0
    return _rowspace(m, p, m.shape[1]).shape[0]


class FiniteAlgebra:
    """A finite commutative unital F_p-algebra with integer-encoded elements."""

    def __init__(self, p, constants, unit, name=None, check=True):
        if not _is_prime(p):
            raise ValueError(f"{p} is not prime")
        c = np.array(constants, dtype=np.int64) % p
        d = c.shape[0]
        if c.shape != (d, d, d):
            raise ValueError("structure constants must have shape (d, d, d)")
        u = np.array(unit, dtype=np.int64).reshape(d) % p
        self.p, self.dim = int(p), d
        self.constants = c
        self.unit = u
        self.name = name or f"A(p={p},d={d})"
        self._pw = np.array([p ** i for i in range(d)], dtype=np.int64)
        self.size = p ** d
        self.zero = 0
        self.one = int(u @ self._pw)
        self._mul_table = None
        self._add_table = None
        if check:
            self._check()

    def _check(self):
        c, p, d = self.constants, self.p, self.dim
        if not np.array_equal(c, c.transpose(1, 0, 2)):
            raise ValueError("multiplication is not commutative")
        lhs = np.einsum("ijk,klm->ijlm", c, c) % p
        rhs = np.einsum("jlk,ikm->ijlm", c, c) % p
        if not np.array_equal(lhs, rhs):
            raise ValueError("multiplication is not associative")
        if not np.array_equal(np.einsum("i,ijk->jk", self.unit, c) % p, np.eye(d, dtype=np.int64)):
            raise ValueError("declared unit is not a unit")

    def __repr__(self):
        return f"FiniteAlgebra({self.name})"

    def __eq__(self, other):
        return (isinstance(other, FiniteAlgebra) and self.p == other.p
                and np.array_equal(self.constants, other.constants)
                and np.array_equal(self.unit, other.unit))

    def __hash__(self):
        return hash((self.p, self.constants.tobytes(), self.unit.tobytes()))

    # -- encoding
    def decode(self, x):
        x = np.asarray(x, dtype=np.int64)
        return (x[..., None] // self._pw) % self.p

    def encode(self, coords):
        out = (np.asarray(coords, dtype=np.int64) % self.p) @ self._pw
        return int(out) if np.ndim(out) == 0 else out

    def elements(self):
        return np.arange(self.size, dtype=np.int64)

    def basis_element(self, i):
        return int(self._pw[i])

    @staticmethod
    def _ret(x):
        return int(x) if np.ndim(x) == 0 else x

    # -- arithmetic (vectorized over numpy arrays of encoded elements)
    def _tables(self):
        if self._mul_table is None:
            allc = self.decode(self.elements())
            prod = np.einsum("ai,bj,ijk->abk", allc, allc, self.constants) % self.p
            self._mul_table = (prod @ self._pw).astype(np.int64)
            s = (allc[:, None, :] + allc[None, :, :]) % self.p
            self._add_table = (s @ self._pw).astype(np.int64)
        return self._mul_table, self._add_table

    def add(self, x, y):
        if self.size <= TABLE_LIMIT:
            return self._ret(self._tables()[1][x, y])
        return self._ret(self.encode(self.decode(x) + self.decode(y)))

    def neg(self, x):
        return self._ret(self.encode(-self.decode(x)))

    def sub(self, x, y):
        return self._ret(self.encode(self.decode(x) - self.decode(y)))

    def scale(self, c, x):
        return self._ret(self.encode(int(c) * self.decode(x)))

    def mul(self, x, y):
        if self.size <= TABLE_LIMIT:
            return self._ret(self._tables()[0][x, y])
        cx, cy = np.broadcast_arrays(self.decode(x), self.decode(y))
        prod = np.einsum("...i,...j,ijk->...k", cx, cy, self.constants) % self.p
        return self._ret(self.encode(prod))

    def pow(self, x, k):
        k = int(k)
        if k < 0:
            raise ValueError("negative exponent")
        result = np.full(np.shape(x), self.one, dtype=np.int64)
        base = np.asarray(x, dtype=np.int64)
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return self._ret(result)

    def apply(self, matrix, x):
        """Image of encoded ``x`` under the linear map ``matrix``."""
        return self._ret(self.encode(self.decode(x) @ np.asarray(matrix, dtype=np.int64)))

    def mult_matrix(self, a):
        """Matrix of ``x -> x * a``."""
        return np.einsum("j,ijk->ik", self.decode(a), self.constants) % self.p

    def is_unit(self, a):
        return _rank(self.mult_matrix(a), self.p) == self.dim

    def inverse(self, a):
        x = _solve(self.mult_matrix(a), self.unit, self.p)
        if x is None:
            raise ZeroDivisionError("element is not invertible")
        return self.encode(x)

    def is_field(self):
        return nilradical(self).shape[0] == 0 and len(primitive_idempotents(self)) == 1

    def frobenius_matrix(self):
        return frobenius_endomorphism(self)

    def is_perfect(self):
        return _rank(frobenius_endomorphism(self), self.p) == self.dim

    def format(self, x):
        return "(" + ",".join(str(int(v)) for v in self.decode(x)) + ")"


def prime_field(p):
    return FiniteAlgebra(p, [[[1]]], [1], name=f"F{p}")


def _poly_mod(coeffs, mod, p):
    """Remainder of ``coeffs`` (low to high) modulo the monic ``mod``."""
    a = [int(c) % p for c in coeffs]
    n = len(mod) - 1
    while len(a) > n:
        lead = a.pop()
        if lead:
            for i in range(n):
                a[len(a) - n + i] = (a[len(a) - n + i] - lead * mod[i]) % p
    return a + [0] * (n - len(a))


def _monic(poly, p):
    poly = [int(c) % p for c in poly]
    while len(poly) > 1 and poly[-1] == 0:
        poly.pop()
    inv = pow(poly[-1], -1, p)
    return [(c * inv) % p for c in poly]


def is_irreducible(p, poly):
    """Exhaustive check that no monic polynomial of degree <= deg/2 divides."""
    f = _monic(poly, p)
    n = len(f) - 1
    if n < 1:
        return False
    for k in range(1, n // 2 + 1):
        for tail in itertools.product(range(p), repeat=k):
            g = list(tail) + [1]
            if not any(_poly_mod(f, g, p)):
                return False
    return True


def make_finite_field(p, poly, name=None):
    """F_p[x]/(poly) for irreducible ``poly`` (coefficients low to high)."""
    f = _monic(poly, p)
    n = len(f) - 1
    if not is_irreducible(p, f):
        raise ValueError(f"polynomial {poly} is reducible over F_{p}")
    if n == 1:
        return prime_field(p)
    c = np.zeros((n, n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            mono = [0] * (i + j) + [1]
            c[i, j] = _poly_mod(mono, f, p)
    unit = [1] + [0] * (n - 1)
    return FiniteAlgebra(p, c, unit, name=name or f"F{p ** n}")


def make_truncated_poly(p, k, name=None):
    """F_p[x]/(x^k) in the monomial basis."""
    c = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            if i + j < k:
                c[i, j, i + j] = 1
    unit = [1] + [0] * (k - 1)
    return FiniteAlgebra(p, c, unit, name=name or f"F{p}[x]/x^{k}")


def make_product(algebras, name=None):
    """Componentwise product; coordinates are concatenated in order."""
    algebras = list(algebras)
    if not algebras:
        raise ValueError("empty product")
    p = algebras[0].p
    if any(a.p != p for a in algebras):
        raise ValueError("factors have different characteristic")
    d = sum(a.dim for a in algebras)
    c = np.zeros((d, d, d), dtype=np.int64)
    unit = np.zeros(d, dtype=np.int64)
    off = 0
    for a in algebras:
        s = slice(off, off + a.dim)
        c[s, s, s] = a.constants
        unit[s] = a.unit
        off += a.dim
    return FiniteAlgebra(p, c, unit, name=name or " x ".join(a.name for a in algebras))


def frobenius_endomorphism(algebra):
    """Matrix of a -> a^p; row i holds the coordinates of b_i^p."""
    A = algebra
    rows = [A.decode(A.pow(A.basis_element(i), A.p)) for i in range(A.dim)]
    return np.array(rows, dtype=np.int64).reshape(A.dim, A.dim)


def _products_span(A, left, right):
    """Row space of all products of rows of ``left`` with rows of ``right``."""
    if len(left) == 0 or len(right) == 0:
        return np.zeros((0, A.dim), dtype=np.int64)
    prods = np.einsum("ai,bj,ijk->abk", left, right, A.constants).reshape(-1, A.dim) % A.p
    return _rowspace(prods, A.p, A.dim)


def nilradical(A):
    """Basis rows (coordinates) of the nilradical, = ker Frob^t for p^t >= dim."""
    t = 0
    while A.p ** t < A.dim:
        t += 1
    ft = _matpow(frobenius_endomorphism(A), t, A.p)
    return _rowspace(_kernel(ft, A.p), A.p, A.dim)


def nilpotency_data(A):
    """(k, m): k minimal with N^k = 0, m minimal with p^m >= k."""
    n = nilradical(A)
    k, power = 1, n
    while power.shape[0]:
        power = _products_span(A, power, n)
        k += 1
    m = 0
    while A.p ** m < k:
        m += 1
    return k, m


def idempotents(A):
    """All idempotents, sorted by encoding.

    Every idempotent satisfies e^p = e, so the search runs over the
    Frobenius-fixed subspace (a copy of F_p^s, s = number of local factors)
    rather than over all of A.
    """
    fixed = _kernel((frobenius_endomorphism(A) - np.eye(A.dim, dtype=np.int64)) % A.p, A.p)
    fixed = _rowspace(fixed, A.p, A.dim)
    out = []
    for coeffs in itertools.product(range(A.p), repeat=fixed.shape[0]):
        e = A.encode(np.array(coeffs, dtype=np.int64) @ fixed if len(coeffs) else np.zeros(A.dim))
        if A.mul(e, e) == e:
            out.append(e)
    return sorted(out)


def primitive_idempotents(A):
    ids = [e for e in idempotents(A) if e != 0]
    prim = []
    for e in ids:
        if not any(f != e and A.mul(e, f) == f for f in ids):
            prim.append(e)
    return prim


def _algebra_on_rows(A, rows, unit_coords, name):
    """Algebra structure on the span of ``rows`` (assumed closed)."""
    k = rows.shape[0]
    c = np.zeros((k, k, k), dtype=np.int64)
    for i in range(k):
        for j in range(k):
            prod = A.decode(A.mul(A.encode(rows[i]), A.encode(rows[j])))
            x = _solve(rows, prod, A.p)
            if x is None:
                raise ValueError("span is not closed under multiplication")
            c[i, j] = x
    u = _solve(rows, unit_coords, A.p)
    if u is None:
        raise ValueError("unit not in span")
    return FiniteAlgebra(A.p, c, u, name=name)


def subalgebra(A, generators, name=None):
    """Subalgebra generated by encoded elements: (B, inclusion rows)."""
    rows = [A.unit] + [A.decode(g) for g in generators]
    span = _rowspace(rows, A.p, A.dim)
    while True:
        new = _rowspace(np.concatenate([span, _products_span(A, span, span)]), A.p, A.dim)
        if new.shape == span.shape and np.array_equal(new, span):
            break
        span = new
    B = _algebra_on_rows(A, span, A.unit, name or f"sub({A.name})")
    return B, span


def ideal_algebra(A, e):
    """e*A as an algebra with unit e; returns (algebra, inclusion rows)."""
    rows = _rowspace((A.mult_matrix(e)), A.p, A.dim)
    return _algebra_on_rows(A, rows, A.decode(e), f"{A.name}*e{e}"), rows


def quotient_algebra(A, ideal_rows, name=None):
    """A / I for an ideal I given by basis rows.

    Returns (Q, projection matrix d x dq, section matrix dq x d) where the
    section picks standard basis vectors complementary to the Howell form.
    """
    p, d = A.p, A.dim
    h = _rowspace(ideal_rows, p, d) if len(ideal_rows) else np.zeros((0, d), dtype=np.int64)
    pivots = [int(np.nonzero(row)[0][0]) for row in h]
    free = [j for j in range(d) if j not in pivots]
    proj = np.zeros((d, len(free)), dtype=np.int64)
    for i in range(d):
        v = np.zeros(d, dtype=np.int64)
        v[i] = 1
        for row, j in zip(h, pivots):
            v = (v - v[j] * row) % p
        proj[i] = v[free]
    section = np.zeros((len(free), d), dtype=np.int64)
    for a, j in enumerate(free):
        section[a, j] = 1
    q = len(free)
    c = np.zeros((q, q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            prod = A.mul(A.encode(section[a]), A.encode(section[b]))
            c[a, b] = (A.decode(prod) @ proj) % p
    unit = (A.unit @ proj) % p
    return FiniteAlgebra(p, c, unit, name=name or f"{A.name}/I"), proj, section


class AlgebraAction:
    """A group acting on an algebra by automorphisms, x -> x @ matrices[g]."""

    def __init__(self, group, algebra, matrices, check=True):
        self.group = group
        self.algebra = algebra
        self.matrices = [np.array(m, dtype=np.int64) % algebra.p for m in matrices]
        if len(self.matrices) != group.order:
            raise ValueError("need one matrix per group element")
        if check:
            self._check()

    def _check(self):
        A, G, p = self.algebra, self.group, self.algebra.p
        eye = np.eye(A.dim, dtype=np.int64)
        if not np.array_equal(self.matrices[G.identity], eye):
            raise ValueError("identity does not act trivially")
        for g in G.elements():
            m = self.matrices[g]
            if not np.array_equal((A.unit @ m) % p, A.unit):
                raise ValueError(f"element {g} does not fix the unit")
            if _rank(m, p) != A.dim:
                raise ValueError(f"element {g} does not act invertibly")
            for i in range(A.dim):
                for j in range(i, A.dim):
                    bi, bj = A.basis_element(i), A.basis_element(j)
                    lhs = A.apply(m, A.mul(bi, bj))
                    rhs = A.mul(A.apply(m, bi), A.apply(m, bj))
                    if lhs != rhs:
                        raise ValueError(f"element {g} is not multiplicative")
        for g in G.elements():
            for h in G.elements():
                if not np.array_equal((self.matrices[h] @ self.matrices[g]) % p,
                                      self.matrices[G.mul(g, h)]):
                    raise ValueError("action is not a group homomorphism")

    def act(self, g, x):
        return self.algebra.apply(self.matrices[g], x)

    def restrict(self, subgroup_elems):
        sub, elems = self.group.subgroup(subgroup_elems)
        return AlgebraAction(sub, self.algebra, [self.matrices[g] for g in elems], check=False)

    def orbit(self, x):
        return sorted({self.act(g, x) for g in self.group.elements()})


def trivial_action(group, algebra):
    eye = np.eye(algebra.dim, dtype=np.int64)
    return AlgebraAction(group, algebra, [eye] * group.order, check=False)


def action_from_generators(group, algebra, images):
    """Extend ``{generator: matrix}`` to the whole group (validated)."""
    p = algebra.p
    mats = {group.identity: np.eye(algebra.dim, dtype=np.int64)}
    frontier = [group.identity]
    while frontier:
        x = frontier.pop(0)
        for s, ms in images.items():
            y = group.mul(x, s)
            m = (np.array(ms, dtype=np.int64) @ mats[x]) % p
            if y in mats:
                if not np.array_equal(mats[y], m):
                    raise ValueError("generator images do not define an action")
                continue
            mats[y] = m
            frontier.append(y)
    if len(mats) != group.order:
        raise ValueError("generators do not generate the group")
    return AlgebraAction(group, algebra, [mats[g] for g in group.elements()])


def galois_action(group, algebra, power=1):
    """Cyclic group acting through Frob^power by its smallest generator."""
    s = group.generator()
    if s is None:
        raise ValueError("galois_action needs a cyclic group")
    f = _matpow(frobenius_endomorphism(algebra), power, algebra.p)
    return action_from_generators(group, algebra, {s: f})


class PermutationGSet:
    """A finite G-set: ``perms[g][i]`` is the image of point i under g."""

    def __init__(self, group, perms, check=True):
        self.group = group
        self.perms = [list(map(int, pi)) for pi in perms]
        self.size = len(self.perms[group.identity]) if self.perms else 0
        if check:
            G = group
            if self.perms[G.identity] != list(range(self.size)):
                raise ValueError("identity must act trivially")
            for g in G.elements():
                if sorted(self.perms[g]) != list(range(self.size)):
                    raise ValueError("not a permutation")
                for h in G.elements():
                    gh = self.perms[G.mul(g, h)]
                    if [self.perms[g][self.perms[h][i]] for i in range(self.size)] != gh:
                        raise ValueError("not a group homomorphism")

    def act(self, g, i):
        return self.perms[g][i]

    def orbits(self):
        seen, out = set(), []
        for i in range(self.size):
            if i in seen:
                continue
            orb = sorted({self.perms[g][i] for g in self.group.elements()})
            seen.update(orb)
            out.append(orb)
        return out

    def stabilizer(self, i):
        return tuple(g for g in self.group.elements() if self.perms[g][i] == i)

    def matrix(self, g, p):
        """Permutation matrix on F_p^(X): e_i -> e_{g i}."""
        m = np.zeros((self.size, self.size), dtype=np.int64)
        for i in range(self.size):
            m[i, self.perms[g][i]] = 1
        return m


class ResidueDecomposition:
    """A -> P(A) = prod of residue fields, with the induced G-permutation."""

    def __init__(self, algebra, idempotents, fields, maps, lifts, action=None):
        self.algebra = algebra
        self.idempotents = idempotents
        self.fields = fields
        self.maps = maps          # d x dim(k_i), a -> image in k_i
        self.lifts = lifts        # dim(k_i) x d, a section landing in e_i A
        self.offsets = np.cumsum([0] + [f.dim for f in fields]).tolist()
        self.total_map = np.concatenate(maps, axis=1) if maps else np.zeros((algebra.dim, 0), dtype=np.int64)
        self.product = make_product(fields, name=f"P({algebra.name})")
        self.action = action
        self.factor_perm = None
        self.product_action = None
        if action is not None:
            self._induce(action)

    def _induce(self, action):
        G, p = action.group, self.algebra.p
        pos = {e: i for i, e in enumerate(self.idempotents)}
        perm = []
        for g in G.elements():
            perm.append([pos[action.act(g, e)] for e in self.idempotents])
        self.factor_perm = perm
        D = self.product.dim
        mats = []
        for g in G.elements():
            m = np.zeros((D, D), dtype=np.int64)
            for i, f in enumerate(self.fields):
                j = perm[g][i]
                block = (self.lifts[i] @ action.matrices[g] @ self.maps[j]) % p
                m[self.offsets[i]:self.offsets[i + 1], self.offsets[j]:self.offsets[j + 1]] = block
            mats.append(m)
        self.product_action = AlgebraAction(G, self.product, mats)


def residue_decomposition(A, action=None):
    """Primitive idempotents, residue fields e_i A / e_i N, and A -> P(A)."""
    prims = primitive_idempotents(A)
    fields, maps, lifts = [], [], []
    for e in prims:
        eA, incl = ideal_algebra(A, e)
        k, proj, section = quotient_algebra(eA, nilradical(eA), name=f"k{len(fields)}")
        # a -> e*a -> coordinates in eA -> residue field
        to_eA = np.zeros((A.dim, eA.dim), dtype=np.int64)
        for i in range(A.dim):
            ea = A.decode(A.mul(e, A.basis_element(i)))
            to_eA[i] = _solve(incl, ea, A.p)
        maps.append((to_eA @ proj) % A.p)
        lifts.append((section @ incl) % A.p)
        fields.append(k)
    return ResidueDecomposition(A, prims, fields, maps, lifts, action)


def fixed_subring(A, action):
    """(B, inclusion rows) for B = A^G."""
    eye = np.eye(A.dim, dtype=np.int64)
    stacked = np.concatenate([(m - eye) % A.p for m in action.matrices], axis=1)
    rows = _rowspace(_kernel(stacked, A.p), A.p, A.dim)
    B = _algebra_on_rows(A, rows, A.unit, f"{A.name}^G")
    return B, rows


def norm_element(A, action, a, subgroup=None):
    """Product of g(a) over left cosets gH (a must be H-fixed)."""
    G = action.group
    H = list(subgroup) if subgroup is not None else [G.identity]
    if any(action.act(h, a) != a for h in H):
        raise ValueError("element is not fixed by the subgroup")
    seen, out = set(), A.one
    for g in G.elements():
        if g in seen:
            continue
        seen.update(G.mul(g, h) for h in H)
        out = A.mul(out, action.act(g, a))
    return out


def induced_algebra(group, subgroup, algebra, sub_action):
    """Maps_H(G, A) with (g f)(x) = f(x g); returns (algebra, action, reps).

    Coordinates are blocks indexed by right coset representatives s_j
    (with s_0 = identity for H itself), block j holding f(s_j).
    """
    G = group
    H = sorted(subgroup)
    if not G.is_subgroup(H):
        raise ValueError("not a subgroup")
    _, elems = G.subgroup(H)
    hpos = {g: i for i, g in enumerate(elems)}
    reps, index = G.coset_reps(H)
    # put the identity coset first
    j0 = index[G.identity]
    order = [j0] + [j for j in range(len(reps)) if j != j0]
    reps = [reps[j] for j in order]
    where = {old: new for new, old in enumerate(order)}
    index = [where[i] for i in index]
    n, d = len(reps), algebra.dim
    Ind = make_product([algebra] * n, name=f"Ind({algebra.name})")
    mats = []
    for g in G.elements():
        m = np.zeros((n * d, n * d), dtype=np.int64)
        for j, s in enumerate(reps):
            y = G.mul(s, g)
            l = index[y]
            hprime = G.mul(y, G.inv(reps[l]))
            m[l * d:(l + 1) * d, j * d:(j + 1) * d] = sub_action.matrices[hpos[hprime]]
        mats.append(m)
    return Ind, AlgebraAction(G, Ind, mats), reps
