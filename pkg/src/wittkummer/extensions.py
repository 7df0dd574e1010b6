"""Short exact sequences of G-modules, torsors, and lifting obstructions.

Extensions 0 -> B -> E -> A -> 0 carry their maps explicitly.  Classes
live in H^1(G, Hom(A, B)) and are computed from a Z/q-linear section of
the surjection, which must exist (the module-level "split as modules"
hypothesis).  Torsors and affine spaces are finite sets with tables.
"""

from __future__ import annotations

import itertools

import numpy as np

from .cohomology import (cohomology_group, connecting_map)
from .gmodule import (GModule, ModuleMap, direct_sum, hom_module, hom_element_matrix,
                      submodule, trivial_module, _block_diag)
from .groups import BoundExceeded
from .zpmod import LinearSolver, ResidueMatrix

__all__ = [
    "GModExtension", "GeometricallyNontrivial", "GAffineSpace", "BorelCocycle",
    "split_extension", "extension_from_cocycle", "module_section", "extension_class",
    "baer_sum", "pushforward", "pullback", "is_extension_morphism",
    "torsor_of_extension", "extension_of_torsor", "modulify", "find_torsor_isomorphism",
    "extension_automorphisms", "brute_force_automorphisms", "obstruction_class",
    "module_from_finite", "FiniteRing", "b2_h1_classes", "b2_reduction_surjective",
]


class GeometricallyNontrivial(ValueError):
    """The surjection of an extension has no Z/q-linear section."""


def _arr(x):
    return np.array(x, dtype=np.int64)


def _coords_in(rows, relations, vectors, q):
    """Coordinates of ``vectors`` in the span of ``rows`` modulo ``relations``."""
    rows = _arr(rows).reshape(-1, _arr(vectors).shape[-1]) if np.size(rows) else \
        np.zeros((0, _arr(vectors).shape[-1]), dtype=np.int64)
    stacked = np.concatenate([rows, relations]) if relations.shape[0] else rows
    solver = LinearSolver(ResidueMatrix(stacked % q, q, cols=stacked.shape[1]))
    x, ok = solver.solve_many(_arr(vectors).reshape(-1, stacked.shape[1]))
    if not ok.all():
        raise ValueError("vector outside the expected span")
    return x[:, :rows.shape[0]]


class GModExtension:
    """0 -> B --i--> E --pi--> A -> 0, checked exact."""

    def __init__(self, inc, proj, check=True):
        self.inc, self.proj = inc, proj
        self.B, self.E, self.A = inc.source, inc.target, proj.target
        self.group = self.E.group
        if proj.source is not self.E:
            raise ValueError("maps are not composable")
        if check:
            if not inc.compose(proj).is_zero():
                raise ValueError("composite B -> E -> A is nonzero")
            if not inc.is_injective():
                raise ValueError("B -> E is not injective")
            if not proj.is_surjective():
                raise ValueError("E -> A is not surjective")
            if self.E.order() != self.B.order() * self.A.order():
                raise ValueError("sequence is not exact in the middle")

    def __repr__(self):
        return f"GModExtension(0 -> {self.B.name} -> {self.E.name} -> {self.A.name} -> 0)"


def split_extension(A, B):
    S, (iB, iA), (pB, pA) = direct_sum([B, A], name=f"{B.name}+{A.name}")
    return GModExtension(iB, pA)


def _hom_coordinates(H, matrices):
    """Coordinates in the Hom-module H of flattened kA x kB matrices."""
    kA, kB = H.hom_shape
    q = H.modulus
    M, N = H.hom_ends
    Nq = N.raised(q)
    amb_rel = np.zeros((0, kA * kB), dtype=np.int64)
    if Nq.relations.shape[0]:
        amb_rel = np.concatenate([np.kron(np.eye(kA, dtype=np.int64)[i:i + 1], Nq.relations)
                                  for i in range(kA)])
    return _coords_in(H.hom_rows, amb_rel, _arr(matrices).reshape(-1, kA * kB), q)


def extension_from_cocycle(A, B, cls_or_cocycle, hom=None):
    """E = B + A with g(b, a) = (g b + z_g(g a), g a)."""
    H = hom if hom is not None else hom_module(A, B)
    z = getattr(cls_or_cocycle, "cocycle", cls_or_cocycle)
    z = _arr(z).reshape(A.group.order, H.k)
    q = max(A.modulus, B.modulus)
    Aq, Bq = A.raised(q), B.raised(q)
    G = A.group
    mats = []
    for g in G.elements():
        F = hom_element_matrix(H, z[g])
        top = np.concatenate([Bq.action[g], np.zeros((B.k, A.k), dtype=np.int64)], axis=1)
        bot = np.concatenate([(Aq.action[g] @ F) % q, Aq.action[g]], axis=1)
        mats.append(np.concatenate([top, bot]) % q)
    rel = _block_diag([Bq.relations, Aq.relations])
    E = GModule(G, q, mats, rel, name=f"E({B.name},{A.name})")
    inc = ModuleMap(B, E, np.concatenate([np.eye(B.k, dtype=np.int64),
                                          np.zeros((B.k, A.k), dtype=np.int64)], axis=1))
    proj = ModuleMap(E, A, np.concatenate([np.zeros((B.k, A.k), dtype=np.int64),
                                           np.eye(A.k, dtype=np.int64)]))
    return GModExtension(inc, proj)


def module_section(ext):
    """A Z/q-linear (not necessarily equivariant) section s: A -> E.

    Solves for s together with slack variables expressing that s respects
    the relations of A and that pi(s(a)) = a modulo the relations of A.
    """
    A, E, pi = ext.A, ext.E, ext.proj
    q = max(A.modulus, E.modulus)
    Aq, Eq = A.raised(q), E.raised(q)
    kA, kE = A.k, E.k
    relA = Aq.relations
    nrho = relA.shape[0]
    ncols = nrho * kE + kA * kA
    unknowns = []
    # vec(s) entries
    for a in range(kA):
        for e in range(kE):
            row = np.zeros(ncols, dtype=np.int64)
            for t in range(nrho):
                row[t * kE + e] = relA[t, a]
            row[nrho * kE + a * kA: nrho * kE + (a + 1) * kA] = pi.matrix[e]
            unknowns.append(row)
    # slack: relations of E inside each rho block
    for t in range(nrho):
        for rel in Eq.relations:
            row = np.zeros(ncols, dtype=np.int64)
            row[t * kE:(t + 1) * kE] = rel
            unknowns.append(row)
    # slack: relations of A inside each section block
    for a in range(kA):
        for rel in relA:
            row = np.zeros(ncols, dtype=np.int64)
            row[nrho * kE + a * kA: nrho * kE + (a + 1) * kA] = rel
            unknowns.append(row)
    rhs = np.zeros(ncols, dtype=np.int64)
    rhs[nrho * kE:] = np.eye(kA, dtype=np.int64).reshape(-1)
    m = np.array(unknowns, dtype=np.int64).reshape(-1, ncols) % q
    x = LinearSolver(ResidueMatrix(m, q, cols=ncols)).solve(rhs)
    if x is None:
        raise GeometricallyNontrivial("the surjection admits no Z/q-linear section")
    return x[:kA * kE].reshape(kA, kE) % E.modulus


def _hom(ext):
    if not hasattr(ext, "_hom"):
        ext._hom = hom_module(ext.A, ext.B)
    return ext._hom


def section_cocycle(ext, s):
    """The 1-cocycle g -> g s g^-1 - s with values in Hom(A, B)."""
    A, B, E, G = ext.A, ext.B, ext.E, ext.group
    q = max(A.modulus, E.modulus, B.modulus)
    Eq = E.raised(q)
    H = _hom(ext)
    rows = []
    for g in G.elements():
        diff = (A.action[G.inv(g)] @ s @ E.action[g] - s) % q
        F = _coords_in(ext.inc.matrix, Eq.relations, diff, q)
        rows.append(F.reshape(-1))
    return _hom_coordinates(H, np.array(rows)) % H.modulus


def extension_class(ext, section=None):
    """Class in H^1(G, Hom(A, B)) of a module-split extension."""
    s = module_section(ext) if section is None else _arr(section)
    H = _hom(ext)
    return cohomology_group(H, 1).class_of(section_cocycle(ext, s))


def _relabel(ext, B, A):
    """The same extension with ends replaced by the given (equal) modules."""
    inc = ModuleMap(B, ext.E, ext.inc.matrix, check=False)
    proj = ModuleMap(ext.E, A, ext.proj.matrix, check=False)
    return GModExtension(inc, proj, check=False)


def pullback(f, ext):
    """f^* E for f: A' -> A: the fibre product E x_A A'."""
    A2, E, A = f.source, ext.E, ext.A
    if f.target is not A:
        raise ValueError("map does not land in the quotient of the extension")
    S, (iE, iA2), (pE, pA2) = direct_sum([E, A2])
    q = S.modulus
    diff = ModuleMap(S, A.raised(q) if A.modulus != q else A,
                     np.concatenate([ext.proj.matrix, -f.matrix]) % q, check=False)
    F, incF = submodule(S, diff.kernel_rows())
    rows = incF.matrix
    b_img = np.concatenate([ext.inc.matrix, np.zeros((ext.B.k, A2.k), dtype=np.int64)], axis=1)
    inc = ModuleMap(ext.B, F, _coords_in(rows, S.relations, b_img, q))
    proj = ModuleMap(F, A2, rows[:, E.k:])
    return GModExtension(inc, proj)


def pushforward(f, ext):
    """f_* E for f: B -> B': the pushout (B' + E) / {(f b, -i b)}."""
    B, B2, E = ext.B, f.target, ext.E
    if f.source is not B:
        raise ValueError("map does not start at the kernel of the extension")
    S, (iB2, iE), _ = direct_sum([B2, E])
    q = S.modulus
    rel = np.concatenate([f.matrix, -ext.inc.matrix], axis=1) % q
    P = GModule(S.group, q, S.action, np.concatenate([S.relations, rel]), name=f"push({E.name})")
    inc = ModuleMap(B2, P, iB2.matrix)
    proj = ModuleMap(P, ext.A, np.concatenate([np.zeros((B2.k, ext.A.k), dtype=np.int64),
                                               ext.proj.matrix]))
    return GModExtension(inc, proj)


def baer_sum(e1, e2):
    """alpha_* delta^* (E1 + E2)."""
    if e1.A is not e2.A or e1.B is not e2.B:
        raise ValueError("extensions must share both end modules")
    A, B = e1.A, e1.B
    S, incs, projs = direct_sum([e1.E, e2.E])
    AA, _, _ = direct_sum([A, A])
    BB, _, _ = direct_sum([B, B])
    big = GModExtension(
        ModuleMap(BB, S, _block_diag([e1.inc.matrix, e2.inc.matrix])),
        ModuleMap(S, AA, _block_diag([e1.proj.matrix, e2.proj.matrix])))
    delta = ModuleMap(A, AA, np.concatenate([np.eye(A.k, dtype=np.int64)] * 2, axis=1))
    alpha = ModuleMap(BB, B, np.concatenate([np.eye(B.k, dtype=np.int64)] * 2))
    return pushforward(alpha, pullback(delta, big))


def is_extension_morphism(e1, e2, phi):
    """phi: E1 -> E2 commuting with identities on both ends."""
    phi = _arr(phi)
    try:
        f = ModuleMap(e1.E, e2.E, phi)
    except ValueError:
        return False
    ok_b = e2.E.in_relations(e1.inc.matrix @ phi - e2.inc.matrix).all()
    ok_a = e2.A.in_relations(phi @ e2.proj.matrix - e1.proj.matrix).all()
    return bool(ok_b and ok_a and f is not None)


# -- torsors and affine spaces ---------------------------------------------

class GAffineSpace:
    """A finite set X with G-action and a simply transitive action of a module T.

    ``plus[x][j]`` is x + t_j where t_j is row j of ``T.elements()``;
    ``perms[g][x]`` is g.x.
    """

    def __init__(self, translations, plus, perms, labels=None, check=True):
        self.T = translations
        self.group = translations.group
        self.t_elems = translations.elements()
        self.t_index = {tuple(r): j for j, r in enumerate(self.t_elems)}
        self.plus = [list(map(int, row)) for row in plus]
        self.perms = [list(map(int, row)) for row in perms]
        self.size = len(self.plus)
        self.labels = labels
        if self.size == 0:
            raise ValueError("affine spaces must be nonempty")
        if check:
            self.check()

    def check(self):
        n, T, G = self.size, self.T, self.group
        for x in range(n):
            if sorted(self.plus[x]) != list(range(n)):
                raise ValueError("translation action is not simply transitive")
        zero = self.t_index[tuple(T.reduce(T.zero()))]
        for x in range(n):
            if self.plus[x][zero] != x:
                raise ValueError("zero does not act trivially")
            for i, ti in enumerate(self.t_elems):
                for j, tj in enumerate(self.t_elems):
                    s = self.t_index[tuple(T.reduce(ti + tj))]
                    if self.plus[self.plus[x][i]][j] != self.plus[x][s]:
                        raise ValueError("translation action is not an action")
        for g in G.elements():
            for x in range(n):
                for j, t in enumerate(self.t_elems):
                    gt = self.t_index[tuple(T.reduce(T.act(g, t)))]
                    if self.perms[g][self.plus[x][j]] != self.plus[self.perms[g][x]][gt]:
                        raise ValueError("g(x + m) != g(x) + g(m)")

    def translate(self, x, vector):
        j = self.t_index[tuple(self.T.reduce(vector))]
        return self.plus[x][j]

    def difference(self, x, y):
        """The translation t with x + t = y."""
        return self.t_elems[self.plus[x].index(y)]

    def act(self, g, x):
        return self.perms[g][x]


def torsor_of_extension(ext):
    """X(E) = pi^{-1}(1) for A the trivial rank-one module Z/q."""
    A, E, B = ext.A, ext.E, ext.B
    if A.k != 1 or A.relations.shape[0] or any(int(m[0, 0]) != 1 for m in A.action):
        raise ValueError("torsor_of_extension needs A = Z/q with trivial action")
    els = E.elements()
    img = ext.proj.apply(els) % A.modulus
    fibre = els[img[:, 0] == 1]
    idx = {tuple(r): i for i, r in enumerate(fibre)}
    t_elems = B.elements()
    plus = [[idx[tuple(E.reduce(x + ext.inc.apply(t)))] for t in t_elems] for x in fibre]
    perms = [[idx[tuple(E.reduce(E.act(g, x)))] for x in fibre] for g in E.group.elements()]
    return GAffineSpace(B, plus, perms, labels=[tuple(r) for r in fibre])


def _torsor_cocycle(X, x0=0):
    """g -> g(x0) - x0 as a cocycle with values in the translation module."""
    return np.array([X.difference(x0, X.act(g, x0)) for g in X.group.elements()])


def extension_of_torsor(X, x0=0):
    """E(X) with pi^{-1}(1) = X, built from the base-point cocycle."""
    T, G = X.T, X.group
    q = T.modulus
    A = trivial_module(G, q, name=f"Z/{q}")
    H = hom_module(A, T)
    z = _torsor_cocycle(X, x0)
    zc = _hom_coordinates(H, z.reshape(G.order, -1))
    return extension_from_cocycle(A, T, zc, hom=H)


def find_torsor_isomorphism(X, Y):
    """A G-equivariant translation-compatible bijection X -> Y, or None.

    Both spaces must be torsors under the same module object.
    """
    if X.T is not Y.T:
        raise ValueError("torsors under different modules")
    if X.size != Y.size:
        return None
    for y0 in range(Y.size):
        phi = [Y.translate(y0, X.difference(0, x)) for x in range(X.size)]
        if all(phi[X.act(g, x)] == Y.act(g, phi[x]) for g in X.group.elements()
               for x in range(X.size)):
            return phi
    return None


def module_from_finite(group, elements, zero, add, act, modulus, name=None):
    """Present a finite abelian group with G-action as a GModule.

    Generators are chosen greedily in the given element order; every
    collision met while enumerating spans becomes a relation.  Returns
    (module, element -> coordinate row dict, canonical row -> element dict).
    """
    coords = {zero: ()}
    gens = []
    relations = []
    for x in elements:
        if x in coords:
            continue
        k = len(gens)
        gens.append(x)
        new = {}
        for y, cy in coords.items():
            cur = y
            for c in range(1, modulus):
                cur = add(cur, x)
                vec = tuple(cy) + (0,) * (k - len(cy)) + (c,)
                if cur in coords or cur in new:
                    prev = coords.get(cur, new.get(cur))
                    prev = tuple(prev) + (0,) * (k + 1 - len(prev))
                    relations.append(tuple(a - b for a, b in zip(vec, prev)))
                else:
                    new[cur] = vec
            # modulus * x = 0 is automatic over Z/modulus
        coords.update(new)
    k = len(gens)
    full = {x: np.array(tuple(c) + (0,) * (k - len(c)), dtype=np.int64) for x, c in coords.items()}
    rel = np.array(relations, dtype=np.int64).reshape(-1, k) % modulus
    mats = []
    for g in group.elements():
        m = np.zeros((k, k), dtype=np.int64)
        for i, x in enumerate(gens):
            m[i] = full[act(g, x)]
        mats.append(m)
    M = GModule(group, modulus, mats, rel, name=name or "M(finite)")
    back = {}
    for x, c in full.items():
        back[tuple(M.reduce(c))] = x
    if len(back) != len(full) or M.order() != len(full):
        raise ValueError("presentation does not match the finite group")
    return M, full, back


def modulify(X, x0=0):
    """E(X) = (X x R x T) / ~ with R = Z/q, built literally.

    (x, a, v) ~ (x', a, v - a (x' - x)); classes are normalized to the base
    point x0.  Addition follows
    (x, a, v) + (x', a', v') = (x, a + a', a'(x' - x) + v + v').
    """
    T, G = X.T, X.group
    q = T.modulus
    t_idx = X.t_index

    def key(x, a, v):
        # move to the base point: (x0, a, v - a (x0 - x))
        shift = X.difference(x, x0)
        return (a % q, t_idx[tuple(T.reduce(v - a * shift))])

    def add(u, w):
        (a, i), (b, j) = u, w
        # both normalized at x0, so x' - x = 0
        return key(x0, a + b, X.t_elems[i] + X.t_elems[j])

    def act(g, u):
        a, i = u
        return key(X.act(g, x0), a, T.act(g, X.t_elems[i]))

    # every triple lands on a class; check the count is |R| |T|
    classes = sorted({key(x, a, t) for x in range(X.size) for a in range(q) for t in X.t_elems})
    if len(classes) != q * len(X.t_elems):
        raise AssertionError("modulification has the wrong number of classes")
    zero = key(x0, 0, T.zero())
    E, coords, _ = module_from_finite(G, classes, zero, add, act, q, name="E(X)")
    A = trivial_module(G, q, name=f"Z/{q}")
    inc = ModuleMap(T, E, np.array([coords[key(x0, 0, T.basis_vector(i))] for i in range(T.k)]))
    proj = ModuleMap(E, A, np.array([[k_[0]] for k_ in _generator_keys(E, coords)]))
    ext = GModExtension(inc, proj)
    ext.modulified_from = X
    return ext


def _generator_keys(E, coords):
    """The (a, t) key of each generator of a module built by module_from_finite."""
    out = [None] * E.k
    for key_, c in coords.items():
        nz = np.nonzero(c)[0]
        if len(nz) == 1 and c[nz[0]] == 1:
            out[nz[0]] = key_
    return out


# -- automorphisms of an extension -----------------------------------------

def extension_automorphisms(ext):
    """x -> x + i(f(pi(x))) for every f in Hom_G(A, B), as matrices."""
    H = _hom(ext)
    fixed = cohomology_group(H, 0)
    q = ext.E.modulus
    out = []
    for cls in fixed.classes():
        F = hom_element_matrix(H, cls.vector)
        out.append((np.eye(ext.E.k, dtype=np.int64) + ext.proj.matrix @ F @ ext.inc.matrix) % q)
    return out


def brute_force_automorphisms(ext):
    """All automorphisms of E fixing B and A, by enumerating generator images."""
    E = ext.E
    els = E.elements()
    out = []
    for images in itertools.product(range(len(els)), repeat=E.k):
        phi = els[list(images)]
        try:
            f = ModuleMap(E, E, phi)
        except ValueError:
            continue
        if not E.in_relations(ext.inc.matrix @ phi - ext.inc.matrix).all():
            continue
        if not ext.A.in_relations(phi @ ext.proj.matrix - ext.proj.matrix).all():
            continue
        if f.is_injective():
            out.append(phi % E.modulus)
    return out


# -- lifting obstructions ----------------------------------------------------

def obstruction_class(q_map, cls):
    """Obs in H^2(G, K), K = ker(q), of lifting ``cls`` along q: M_big -> M_small.

    Chooses set-level lifts l(g) of the cocycle values; the lift defects
    g l(h) - l(gh) + l(g) lie in K and form the obstruction 2-cocycle.
    """
    K, inc = q_map.kernel()
    if not q_map.is_surjective():
        raise ValueError("map is not surjective")
    return connecting_map(inc, q_map, cls)


# -- Borel B_2 cohomology ----------------------------------------------------

class FiniteRing:
    """A finite commutative ring by tables, with a G-action by permutations."""

    def __init__(self, size, add_table, mul_table, zero, one, group, perms, name="R", labels=None):
        self.size, self.add_t, self.mul_t = size, _arr(add_table), _arr(mul_table)
        self.zero_el, self.one_el = zero, one
        self.group, self.perms = group, [list(map(int, p)) for p in perms]
        self.name = name
        self.labels = labels or [str(i) for i in range(size)]
        self.neg_t = np.array([int(np.nonzero(self.add_t[x] == zero)[0][0]) for x in range(size)])
        self.units = [u for u in range(size) if (self.mul_t[u] == one).any()]

    def add(self, x, y):
        return int(self.add_t[x, y])

    def mul(self, x, y):
        return int(self.mul_t[x, y])

    def neg(self, x):
        return int(self.neg_t[x])

    def inv(self, u):
        return int(np.nonzero(self.mul_t[u] == self.one_el)[0][0])

    def act(self, g, x):
        return self.perms[g][x]

    @staticmethod
    def from_algebra(algebra, action):
        A = algebra
        els = A.elements()
        add_t = np.array([[A.add(int(x), int(y)) for y in els] for x in els])
        mul_t = np.array([[A.mul(int(x), int(y)) for y in els] for x in els])
        perms = [[action.act(g, int(x)) for x in els] for g in action.group.elements()]
        return FiniteRing(A.size, add_t, mul_t, 0, A.one, action.group, perms, name=A.name,
                          labels=[A.format(int(x)) for x in els])

    @staticmethod
    def witt2(algebra, action):
        from .witt import WittRing
        W = WittRing(algebra, 2)
        X = W.all_elements()
        n = len(X)
        add_t = W.index_of(W.add_arrays(X[:, None, :], X[None, :, :]))
        mul_t = W.index_of(W.mul_arrays(X[:, None, :], X[None, :, :]))
        perms = [W.index_of(W.map_arrays(action.matrices[g], X)).tolist()
                 for g in action.group.elements()]
        one = int(W.index_of(np.array(W.one().components)))
        R = FiniteRing(n, add_t, mul_t, 0, one, action.group, perms, name=f"W2({algebra.name})",
                       labels=[str(tuple(int(c) for c in row)) for row in X])
        R.witt = W
        R.elements_array = X
        return R


class BorelCocycle:
    """z: G -> upper triangular invertible 2x2 matrices, z(gh) = z(g) g(z(h)).

    Matrices are triples (a, b, d) for [[a, b], [0, d]].
    """

    def __init__(self, ring, table):
        self.ring = ring
        self.table = tuple(tuple(t) for t in table)

    def __repr__(self):
        return f"BorelCocycle({list(self.table)})"

    def __eq__(self, other):
        return isinstance(other, BorelCocycle) and self.table == other.table

    def __hash__(self):
        return hash(self.table)


def _bmul(R, x, y):
    a, b, d = x
    a2, b2, d2 = y
    return (R.mul(a, a2), R.add(R.mul(a, b2), R.mul(b, d2)), R.mul(d, d2))


def _binv(R, x):
    a, b, d = x
    ai, di = R.inv(a), R.inv(d)
    return (ai, R.neg(R.mul(R.mul(ai, b), di)), di)


def _bact(R, g, x):
    return tuple(R.act(g, c) for c in x)


def _borel_elements(R):
    return [(a, b, d) for a in R.units for b in range(R.size) for d in R.units]


def _is_b2_cocycle(R, table):
    G = R.group
    return all(table[G.mul(g, h)] == _bmul(R, table[g], _bact(R, g, table[h]))
               for g in G.elements() for h in G.elements())


def _b2_cocycles(R, bound):
    G = R.group
    S = _borel_elements(R)
    gens = []
    for g in G.elements():
        if g not in G.generated(gens):
            gens.append(g)
    if len(S) ** max(len(gens), 1) > bound and not G.is_cyclic():
        raise BoundExceeded("Borel cocycle candidates", len(S) ** len(gens), bound)
    if G.is_cyclic() and G.order > 1:
        gens = [G.generator()]
    if G.order > 8 and G.is_cyclic():
        raise BoundExceeded("cyclic group order", G.order, 8)
    if not G.is_cyclic() and G.order > 4:
        raise BoundExceeded("group order", G.order, 4)
    identity = (R.one_el, R.zero_el, R.one_el)
    out = []

    def extend(vals):
        table = {G.identity: identity}
        frontier = [G.identity]
        while frontier:
            x = frontier.pop(0)
            for s, v in zip(gens, vals):
                y = G.mul(x, s)
                # z(x s) = z(x) x(z(s))
                val = _bmul(R, table[x], _bact(R, x, v))
                if y in table:
                    if table[y] != val:
                        return None
                else:
                    table[y] = val
                    frontier.append(y)
        t = [table[g] for g in G.elements()]
        return t if _is_b2_cocycle(R, t) else None

    def search(prefix):
        if len(prefix) == len(gens):
            t = extend(prefix)
            if t is not None:
                out.append(BorelCocycle(R, t))
            return
        for z in S:
            vals = prefix + [z]
            if len(vals) < len(gens):
                # prune with the relations among the generators chosen so far
                sub = extend_partial(vals)
                if sub is None:
                    continue
            search(vals)

    def extend_partial(vals):
        part = gens[:len(vals)]
        table = {G.identity: identity}
        frontier = [G.identity]
        while frontier:
            x = frontier.pop(0)
            for s, v in zip(part, vals):
                y = G.mul(x, s)
                val = _bmul(R, table[x], _bact(R, x, v))
                if y in table:
                    if table[y] != val:
                        return None
                else:
                    table[y] = val
                    frontier.append(y)
        return table

    if G.order == 1:
        return [BorelCocycle(R, [identity])]
    search([])
    return out


def b2_h1_classes(ring, bound=200_000):
    """Twisted-conjugacy classes of Borel cocycles: list of (representative, members)."""
    R = ring
    G = R.group
    cocycles = _b2_cocycles(R, bound)
    index = {c.table: i for i, c in enumerate(cocycles)}
    S = _borel_elements(R)
    parent = list(range(len(cocycles)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, c in enumerate(cocycles):
        for b in S:
            binv = _binv(R, b)
            t = tuple(_bmul(R, _bmul(R, binv, c.table[g]), _bact(R, g, b)) for g in G.elements())
            j = index[t]
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)
    groups = {}
    for i in range(len(cocycles)):
        groups.setdefault(find(i), []).append(cocycles[i])
    return [(members[0], members) for _, members in sorted(groups.items())]


def _reduce_borel(Rbig, Rsmall, table):
    """Reduce W_2(A)-valued triples to A-valued ones (first Witt component)."""
    X = Rbig.elements_array
    return tuple(tuple(int(X[c][0]) for c in m) for m in table)


def b2_reduction_surjective(algebra, action, bound=200_000):
    """Is H^1(G, B_2(W_2(A))) -> H^1(G, B_2(A)) onto?  Returns (verdict, witnesses).

    Witnesses map each class representative over A to a W_2(A) cocycle whose
    reduction lies in that class; the reduction of the witness equals the
    representative itself whenever possible.
    """
    small = FiniteRing.from_algebra(algebra, action)
    big = FiniteRing.witt2(algebra, action)
    classes_small = b2_h1_classes(small, bound)
    where = {}
    for ci, (_, members) in enumerate(classes_small):
        for m in members:
            where[m.table] = ci
    big_cocycles = _b2_cocycles(big, bound)
    witnesses = {}
    for z in sorted(big_cocycles, key=lambda c: c.table):
        red = _reduce_borel(big, small, z.table)
        ci = where.get(red)
        if ci is None:
            raise AssertionError("reduction of a cocycle is not a cocycle")
        rep = classes_small[ci][0]
        prev = witnesses.get(ci)
        exact = red == rep.table
        if prev is None or (exact and not prev[1]):
            witnesses[ci] = (z, exact)
    verdict = len(witnesses) == len(classes_small)
    report = [(classes_small[ci][0], witnesses[ci][0] if ci in witnesses else None)
              for ci in range(len(classes_small))]
    return verdict, report, big, small
