"""Group cohomology of finite groups via inhomogeneous cochains.

An n-cochain with values in a module M with k generators is an integer
array of shape (|G|^n, k); row t holds the value on the t-th tuple of
``itertools.product(range(|G|), repeat=n)``.  Flattened cochains are rows
of length |G|^n * k, so the differential is a matrix D with
``vec(dc) = vec(c) @ D``.

Classes are stored by a canonical representative: the cocycle reduced
against the Howell form of coboundaries plus relation blocks.  Two classes
are equal iff their representatives are identical arrays.
"""

from __future__ import annotations

import itertools

import numpy as np

from .gmodule import ModuleMap, coinduced_module
from .groups import BoundExceeded
from .zpmod import (LinearSolver, ResidueMatrix, howell_form, quotient_structure,
                    reduce_rows)

__all__ = [
    "CohomologyGroup", "CohomologyClass", "Pairing", "cochain_tuples",
    "differential_matrix", "differential", "is_cocycle", "cohomology_group",
    "class_of", "induced_map", "lift_class", "cup_product", "connecting_map",
    "restriction", "corestriction", "inflation", "shapiro_forward",
    "shapiro_inverse", "frobenius_pullback", "DEGREE_CAP", "CHAIN_BOUND",
]

DEGREE_CAP = 2
CHAIN_BOUND = 4_000_000   # entries of a dense differential matrix


def cochain_tuples(group, n):
    return list(itertools.product(range(group.order), repeat=n))


def _check_size(M, n, allow_degree3=False):
    if n < 0:
        raise ValueError("negative degree")
    cap = 3 if allow_degree3 else DEGREE_CAP
    if n > cap:
        raise BoundExceeded("cohomological degree", n, cap)
    N, k = M.group.order, M.k
    entries = (N ** n * k) * (N ** (n + 1) * k)
    if entries > CHAIN_BOUND:
        raise BoundExceeded("differential matrix entries", entries, CHAIN_BOUND)


def differential_matrix(M, n):
    """Matrix of d: C^n(G, M) -> C^{n+1}(G, M) on flattened cochains."""
    G, k, q = M.group, M.k, M.modulus
    N = G.order
    D = np.zeros((N ** n, k, N ** (n + 1), k), dtype=np.int64)
    eye = np.eye(k, dtype=np.int64)
    T = np.array(cochain_tuples(G, n + 1), dtype=np.int64).reshape(-1, n + 1)
    tgt = np.arange(N ** (n + 1))
    weights = np.array([N ** (n - 1 - i) for i in range(n)], dtype=np.int64)

    def index(cols):
        return (cols * weights).sum(axis=1) if n else np.zeros(len(cols), dtype=np.int64)

    # g1 . c(g2, ..., g_{n+1})
    src = index(T[:, 1:])
    for g in G.elements():
        mask = T[:, 0] == g
        np.add.at(D, (src[mask], slice(None), tgt[mask], slice(None)), M.action[g])
    # (-1)^i c(g1, ..., g_i g_{i+1}, ..., g_{n+1})
    for i in range(1, n + 1):
        merged = G.table[T[:, i - 1], T[:, i]]
        cols = np.concatenate([T[:, :i - 1], merged[:, None], T[:, i + 1:]], axis=1)
        src = index(cols)
        np.add.at(D, (src, slice(None), tgt, slice(None)), (-1) ** i * eye)
    # (-1)^{n+1} c(g1, ..., g_n)
    src = index(T[:, :n])
    np.add.at(D, (src, slice(None), tgt, slice(None)), (-1) ** (n + 1) * eye)
    return (D.reshape(N ** n * k, N ** (n + 1) * k)) % q


def _diff(M, n):
    key = ("d", n)
    if key not in M._cache:
        _check_size(M, n, allow_degree3=True)
        M._cache[key] = differential_matrix(M, n)
    return M._cache[key]


def differential(M, cochain, n=None):
    c = np.asarray(cochain, dtype=np.int64)
    if n is None:
        n = round(np.log(c.shape[0]) / np.log(M.group.order)) if M.group.order > 1 else 0
    out = (c.reshape(-1) @ _diff(M, n)) % M.modulus
    return out.reshape(-1, M.k)


def _relation_blocks(M, n):
    N = M.group.order
    if M.relations.shape[0] == 0:
        return np.zeros((0, N ** n * M.k), dtype=np.int64)
    return np.kron(np.eye(N ** n, dtype=np.int64), M.relations)


def is_cocycle(M, cochain, n=None):
    dc = differential(M, cochain, n)
    return bool(M.in_relations(dc).all())


class CohomologyGroup:
    """H^n(G, M) with canonical class representatives."""

    def __init__(self, M, n, allow_degree3=False):
        _check_size(M, n, allow_degree3)
        self.module, self.degree = M, n
        self.group = M.group
        N, k, q = M.group.order, M.k, M.modulus
        self.dim = N ** n * k
        Dn = _diff(M, n)
        R_next = _relation_blocks(M, n + 1)
        stacked = np.concatenate([Dn, R_next]) if R_next.shape[0] else Dn
        ker = LinearSolver(ResidueMatrix(stacked, q, cols=stacked.shape[1])).kernel().entries
        self.cocycles = howell_form(ResidueMatrix(ker[:, :self.dim], q, cols=self.dim)).entries
        rows = [_relation_blocks(M, n)]
        if n > 0:
            rows.append(_diff(M, n - 1))
        bnd = np.concatenate(rows)
        self.boundaries = howell_form(ResidueMatrix(bnd, q, cols=self.dim)).entries
        self.structure = quotient_structure(ResidueMatrix(self.cocycles, q, cols=self.dim),
                                            ResidueMatrix(self.boundaries, q, cols=self.dim))

    def __repr__(self):
        return f"H^{self.degree}({self.group.name}, {self.module.name}) ~ {self.invariants.factors}"

    @property
    def invariants(self):
        return self.structure.invariants

    @property
    def order(self):
        return self.structure.order

    def canonical(self, vector):
        v = np.asarray(vector, dtype=np.int64).reshape(1, -1)
        return reduce_rows(self.boundaries, v, self.module.modulus)[0]

    def is_cocycle(self, vector):
        v = np.asarray(vector, dtype=np.int64).reshape(-1)
        return not reduce_rows(self.cocycles, v[None, :], self.module.modulus).any()

    def class_of(self, cochain, check=True):
        v = np.asarray(cochain, dtype=np.int64).reshape(-1) % self.module.modulus
        if v.shape[0] != self.dim:
            raise ValueError(f"cochain has {v.shape[0]} entries, expected {self.dim}")
        if check and not self.is_cocycle(v):
            raise ValueError("cochain is not a cocycle")
        return CohomologyClass(self, self.canonical(v))

    def zero(self):
        return CohomologyClass(self, np.zeros(self.dim, dtype=np.int64))

    def basis(self):
        """Canonical cocycles generating the cyclic summands, with orders."""
        return [(self.class_of(g, check=False), o)
                for g, o in zip(self.structure.generators, self.structure.orders)]

    def from_coordinates(self, coords):
        v = self.structure.element(coords)
        return CohomologyClass(self, self.canonical(v))

    def classes(self):
        """Every class, in a fixed order."""
        orders = self.structure.orders
        for coords in itertools.product(*[range(o) for o in orders]):
            yield self.from_coordinates(coords)


class CohomologyClass:
    """A class in H^n(G, M), stored by its canonical representative."""

    __slots__ = ("parent", "vector")

    def __init__(self, parent, vector):
        v = np.asarray(vector, dtype=np.int64).copy()
        v.setflags(write=False)
        self.parent, self.vector = parent, v

    @property
    def degree(self):
        return self.parent.degree

    @property
    def module(self):
        return self.parent.module

    @property
    def cocycle(self):
        return self.vector.reshape(-1, self.parent.module.k)

    def _same(self, other):
        if not isinstance(other, CohomologyClass) or other.parent is not self.parent:
            raise ValueError("classes live in different cohomology groups")

    def __add__(self, other):
        self._same(other)
        return self.parent.class_of(self.vector + other.vector, check=False)

    def __sub__(self, other):
        self._same(other)
        return self.parent.class_of(self.vector - other.vector, check=False)

    def __neg__(self):
        return self.parent.class_of(-self.vector, check=False)

    def __rmul__(self, n):
        return self.parent.class_of(int(n) * self.vector, check=False)

    def __eq__(self, other):
        return (isinstance(other, CohomologyClass) and other.parent is self.parent
                and bool(np.array_equal(self.vector, other.vector)))

    def __hash__(self):
        return hash((id(self.parent), self.vector.tobytes()))

    def __repr__(self):
        return f"Class(deg {self.degree}, {self.cocycle.tolist()})"

    def is_zero(self):
        return not self.vector.any()

    def coordinates(self):
        return self.parent.structure.coordinates(self.vector)


def cohomology_group(M, n, allow_degree3=False):
    key = ("H", n)
    if key not in M._cache:
        M._cache[key] = CohomologyGroup(M, n, allow_degree3)
    return M._cache[key]


def class_of(M, n, cochain):
    return cohomology_group(M, n).class_of(cochain)


def _apply_values(matrix, cochain, q):
    c = np.asarray(cochain, dtype=np.int64)
    return (c @ np.asarray(matrix, dtype=np.int64)) % q


def induced_map(f, cls):
    """Post-compose cocycle values with the equivariant map f."""
    if cls.module is not f.source:
        raise ValueError("class does not live in the source of the map")
    vals = _apply_values(f.matrix, cls.cocycle, f.target.modulus)
    return cohomology_group(f.target, cls.degree).class_of(vals)


def frobenius_pullback(cls, m):
    """(Frob^m)^* on classes with Witt-module coefficients."""
    M = cls.module
    if not hasattr(M, "frobenius_map"):
        raise TypeError("coefficients are not a Witt module")
    if m == 0:
        return cls
    return induced_map(M.frobenius_map(m), cls)


def lift_class(f, cls):
    """Some class mapping to ``cls`` under the surjection f, or None."""
    if cls.module is not f.target:
        raise ValueError("class does not live in the target of the map")
    S, T, n = f.source, f.target, cls.degree
    Q = max(S.modulus, T.modulus)
    Sq, Tq = S.raised(Q), T.raised(Q)
    N = S.group.order
    HS = cohomology_group(Sq, n)
    Z = HS.cocycles
    Pi = np.kron(np.eye(N ** n, dtype=np.int64), f.matrix)
    rows = [(Z @ Pi) % Q, _relation_blocks(Tq, n)]
    if n > 0:
        rows.append(_diff(Tq, n - 1))
    stacked = np.concatenate(rows)
    x = LinearSolver(ResidueMatrix(stacked, Q, cols=stacked.shape[1])).solve(cls.vector)
    if x is None:
        return None
    z = (x[:Z.shape[0]] @ Z) % Q
    return cohomology_group(S, n).class_of(z % S.modulus)


class Pairing:
    """A G-equivariant bilinear map M x N -> P given by a (kM, kN, kP) tensor."""

    def __init__(self, M, N, P, tensor, check=True):
        self.M, self.N, self.P = M, N, P
        t = np.asarray(tensor, dtype=np.int64).reshape(M.k, N.k, P.k) % P.modulus
        self.tensor = t
        if check:
            self.check()

    def __call__(self, x, y):
        return np.einsum("...i,...j,ijk->...k", np.asarray(x, dtype=np.int64),
                         np.asarray(y, dtype=np.int64), self.tensor) % self.P.modulus

    def check(self):
        M, N, P = self.M, self.N, self.P
        eM, eN = np.eye(M.k, dtype=np.int64), np.eye(N.k, dtype=np.int64)
        for rho in M.relations:
            if not P.in_relations(self(np.broadcast_to(rho, (N.k, M.k)), eN)).all():
                raise ValueError("pairing does not respect relations of the left factor")
        for rho in N.relations:
            if not P.in_relations(self(eM, np.broadcast_to(rho, (M.k, N.k)))).all():
                raise ValueError("pairing does not respect relations of the right factor")
        for qx, k in ((M.modulus, None), (N.modulus, None)):
            if qx < P.modulus and not P.in_relations(qx * self.tensor.reshape(-1, P.k)).all():
                raise ValueError("pairing is not well defined on the factor moduli")
        for g in M.group.elements():
            for i in range(M.k):
                for j in range(N.k):
                    lhs = self(M.act(g, eM[i]), N.act(g, eN[j]))
                    rhs = P.act(g, self.tensor[i, j])
                    if not P.equal(lhs, rhs):
                        raise ValueError(f"pairing is not G-equivariant at element {g}")


def cup_product(a, b, pairing):
    """(a u b)(g1..g_{m+n}) = pairing(a(g1..gm), (g1...gm) . b(g_{m+1}..))."""
    if a.module is not pairing.M or b.module is not pairing.N:
        raise ValueError("pairing does not match the coefficient modules")
    G = a.module.group
    m, n = a.degree, b.degree
    N = G.order
    P = pairing.P
    ca, cb = a.cocycle, b.cocycle
    out = np.zeros((N ** (m + n), P.k), dtype=np.int64)
    for t, tup in enumerate(cochain_tuples(G, m + n)):
        left, right = tup[:m], tup[m:]
        ia = sum(g * N ** (m - 1 - i) for i, g in enumerate(left))
        ib = sum(g * N ** (n - 1 - i) for i, g in enumerate(right))
        prod = G.prod(left)
        out[t] = pairing(ca[ia], b.module.act(prod, cb[ib]))
    return cohomology_group(P, m + n).class_of(out)


def connecting_map(inc, proj, cls):
    """Boundary map H^n(G, M'') -> H^{n+1}(G, M') of 0 -> M' -> M -> M'' -> 0."""
    Mp, M, Mpp = inc.source, inc.target, proj.target
    if proj.source is not M:
        raise ValueError("maps are not composable")
    if cls.module is not Mpp:
        raise ValueError("class does not live in the quotient module")
    if not inc.compose(proj).is_zero():
        raise ValueError("sequence is not exact: the composite is nonzero")
    if not inc.is_injective() or not proj.is_surjective() or M.order() != Mp.order() * Mpp.order():
        raise ValueError("sequence is not exact")
    n = cls.degree
    Q = max(Mp.modulus, M.modulus, Mpp.modulus)
    Mq, Mppq = M.raised(Q), Mpp.raised(Q)
    lift_solver = LinearSolver(ResidueMatrix(np.concatenate([proj.matrix % Q, Mppq.relations]),
                                             Q, cols=Mpp.k))
    x, ok = lift_solver.solve_many(cls.cocycle)
    if not ok.all():
        raise AssertionError("surjection failed to lift a value")
    lifted = x[:, :M.k]
    dl = differential(Mq, lifted, n)
    back_solver = LinearSolver(ResidueMatrix(np.concatenate([inc.matrix % Q, Mq.relations]),
                                             Q, cols=M.k))
    y, ok = back_solver.solve_many(dl)
    if not ok.all():
        raise AssertionError("coboundary of the lift does not lie in the submodule")
    vals = y[:, :Mp.k] % Mp.modulus
    return cohomology_group(Mp, n + 1).class_of(vals)


def _restricted_module(M, elems):
    key = ("res", tuple(elems))
    if key not in M._cache:
        M._cache[key] = M.restrict(elems)
    return M._cache[key]


def restriction(cls, subgroup_elems):
    """Restriction to a subgroup H (classes over the restricted module)."""
    M, G, n = cls.module, cls.module.group, cls.degree
    H = sorted(set(int(h) for h in subgroup_elems))
    if not G.is_subgroup(H):
        raise ValueError("not a subgroup")
    MH = _restricted_module(M, H)
    N = G.order
    rows = []
    for tup in itertools.product(H, repeat=n):
        rows.append(sum(g * N ** (n - 1 - i) for i, g in enumerate(tup)))
    vals = cls.cocycle[np.array(rows, dtype=np.int64)] if rows else cls.cocycle[:1]
    return cohomology_group(MH, n).class_of(vals)


def restricted_module(M, subgroup_elems):
    return _restricted_module(M, sorted(set(int(h) for h in subgroup_elems)))


def inflation(cls, group, projection):
    """Inflate a class over G/N to G along ``projection`` (list g -> gN)."""
    MQ, n = cls.module, cls.degree
    key = ("inf", id(group), tuple(projection))
    if key not in MQ._cache:
        MQ._cache[key] = MQ.inflate(group, projection)
    MG = MQ._cache[key]
    NQ = MQ.group.order
    vals = []
    for tup in cochain_tuples(group, n):
        vals.append(cls.cocycle[sum(projection[g] * NQ ** (n - 1 - i) for i, g in enumerate(tup))])
    vals = np.array(vals, dtype=np.int64).reshape(-1, MQ.k)
    return cohomology_group(MG, n).class_of(vals)


def coinduction(G, H, MH):
    key = ("coind", id(G), tuple(H))
    if key not in MH._cache:
        MH._cache[key] = coinduced_module(G, H, MH)
    return MH._cache[key]


def shapiro_forward(cls):
    """H^n(G, CoInd_H^G M) -> H^n(H, M): restrict, then evaluate at 1."""
    C = cls.module
    data = getattr(C, "coinduction", None)
    if data is None:
        raise TypeError("coefficients are not a coinduced module")
    res = restriction(cls, data["subgroup"])
    base = data["base"]
    vals = res.cocycle[:, :base.k]
    return cohomology_group(base, cls.degree).class_of(vals)


def shapiro_inverse(cls, group):
    """H^n(H, M) -> H^n(G, CoInd_H^G M), explicit on cocycles.

    With y = h(y) s(y) (s(y) the chosen coset representative),
    Phi(g1..gn)(s_j) = phi(k1, k1^-1 k2, ..., k_{n-1}^-1 k_n) where
    k_i = h(s_j g1 ... g_i).
    """
    MH, n = cls.module, cls.degree
    Hgrp = MH.group
    G = group
    H = sorted(_subgroup_elems(G, MH))
    C = coinduction(G, H, MH)
    data = C.coinduction
    reps, index, hpos = data["reps"], data["index"], data["positions"]
    NH = Hgrp.order
    k = MH.k
    vals = np.zeros((G.order ** n, len(reps) * k), dtype=np.int64)
    for t, tup in enumerate(cochain_tuples(G, n)):
        for j, s in enumerate(reps):
            ks = []
            y = s
            for g in tup:
                y = G.mul(y, g)
                ks.append(G.mul(y, G.inv(reps[index[y]])))
            args = [ks[0]] + [G.mul(G.inv(ks[i - 1]), ks[i]) for i in range(1, n)] if n else []
            idx = sum(hpos[h] * NH ** (n - 1 - i) for i, h in enumerate(args))
            vals[t, j * k:(j + 1) * k] = cls.cocycle[idx]
    return cohomology_group(C, n).class_of(vals)


def _subgroup_elems(G, MH):
    """Elements of G forming the subgroup over which MH was restricted."""
    elems = getattr(MH, "subgroup_elems", None)
    if elems is not None:
        return elems
    if MH.group == G:
        return list(G.elements())
    raise ValueError("module does not record its subgroup; build it with restricted_module")


def corestriction(cls, M):
    """cores: H^n(H, M|_H) -> H^n(G, M) via Shapiro and the norm map."""
    C_cls = shapiro_inverse(cls, M.group)
    C = C_cls.module
    data = C.coinduction
    G = M.group
    k = M.k
    norm = np.zeros((C.k, k), dtype=np.int64)
    for j, s in enumerate(data["reps"]):
        norm[j * k:(j + 1) * k] = M.action[G.inv(s)]
    f = ModuleMap(C, M, norm)
    return induced_map(f, C_cls)
