"""Finitely generated Z/p^r-modules with a finite group action.

A module is presented by k generators, a relation submodule of (Z/q)^k
(stored in Howell form) and one k x k action matrix per group element.
Elements are coordinate rows; ``g . v = v @ action[g]``, so
``action[g*h] == action[h] @ action[g]`` modulo relations.
"""

from __future__ import annotations

import itertools

import numpy as np

from .algebra import trivial_action
from .witt import WittRing
from .zpmod import (LinearSolver, ResidueMatrix, howell_form, prime_power,
                    quotient_structure, reduce_rows)

__all__ = [
    "Character", "GModule", "ModuleMap", "WittModule", "all_characters",
    "trivial_module", "twisted_module", "direct_sum", "submodule",
    "quotient_module", "hom_module", "coinduced_module", "permutation_module",
    "wittmod_from_algebra", "identity_map", "zero_map",
]


def _arr(x):
    return np.array(x, dtype=np.int64)


class Character:
    """A homomorphism G -> (Z/q)^x given by its value table."""

    def __init__(self, group, modulus, values, check=True):
        prime_power(modulus)
        self.group = group
        self.modulus = int(modulus)
        self.values = tuple(int(v) % self.modulus for v in values)
        if len(self.values) != group.order:
            raise ValueError("character needs one value per group element")
        if check:
            p = prime_power(modulus)[0]
            if any(v % p == 0 for v in self.values):
                raise ValueError("character values must be units")
            for g in group.elements():
                for h in group.elements():
                    if self.values[group.mul(g, h)] != (self.values[g] * self.values[h]) % self.modulus:
                        raise ValueError("character is not multiplicative")

    def __call__(self, g):
        return self.values[g]

    def __eq__(self, other):
        return (isinstance(other, Character) and self.group == other.group
                and self.modulus == other.modulus and self.values == other.values)

    def __hash__(self):
        return hash((self.modulus, self.values))

    def __repr__(self):
        return f"Character(mod {self.modulus}, {list(self.values)})"

    def power(self, n):
        q = self.modulus
        return Character(self.group, q, [pow(v, n, q) for v in self.values], check=False)

    def reduce(self, q):
        if self.modulus % q:
            raise ValueError(f"cannot reduce a character mod {self.modulus} to mod {q}")
        return Character(self.group, q, [v % q for v in self.values], check=False)

    def is_trivial(self):
        return all(v == 1 for v in self.values)

    def restrict(self, elems, subgroup):
        return Character(subgroup, self.modulus, [self.values[g] for g in elems], check=False)

    @staticmethod
    def trivial(group, modulus):
        return Character(group, modulus, [1] * group.order, check=False)


def all_characters(group, modulus):
    """Every character G -> (Z/modulus)^x, in lexicographic order of tables."""
    p, _ = prime_power(modulus)
    units = [u for u in range(1, modulus) if u % p]
    gens = []
    for g in group.elements():
        if g not in group.generated(gens):
            gens.append(g)
    out = []
    for vals in itertools.product(units, repeat=len(gens)):
        table = {group.identity: 1}
        frontier = [group.identity]
        ok = True
        while frontier and ok:
            x = frontier.pop()
            for s, v in zip(gens, vals):
                y = group.mul(x, s)
                val = (table[x] * v) % modulus
                if y in table:
                    if table[y] != val:
                        ok = False
                        break
                else:
                    table[y] = val
                    frontier.append(y)
        if not ok:
            continue
        try:
            out.append(Character(group, modulus, [table[g] for g in group.elements()]))
        except ValueError:
            continue
    return sorted(set(out), key=lambda c: c.values)


class GModule:
    """A (Z/q, G)-module presented by generators, relations and action."""

    def __init__(self, group, modulus, action, relations=None, name=None, check=True):
        self.group = group
        self.modulus = q = int(modulus)
        self.p, self.r = prime_power(q)
        mats = [(_arr(m) % q) for m in action]
        if len(mats) != group.order:
            raise ValueError("need one action matrix per group element")
        k = mats[0].shape[0] if mats else 0
        self.k = k
        for m in mats:
            m.setflags(write=False)
        self.action = mats
        rel = np.zeros((0, k), dtype=np.int64) if relations is None else _arr(relations).reshape(-1, k)
        self.relations = howell_form(ResidueMatrix(rel, q, cols=k)).entries
        self.name = name or f"M(k={k}, q={q})"
        self._cache = {}
        if check:
            self.check()

    def __repr__(self):
        return f"GModule({self.name}, |G|={self.group.order}, q={self.modulus}, k={self.k})"

    def check(self):
        G, k = self.group, self.k
        eye = np.eye(k, dtype=np.int64)
        if not self.in_relations(self.action[G.identity] - eye).all():
            raise ValueError("identity does not act trivially")
        for g in G.elements():
            if self.relations.shape[0] and not self.in_relations(self.relations @ self.action[g]).all():
                raise ValueError("relation submodule is not G-stable")
        for g in G.elements():
            for h in G.elements():
                diff = self.action[h] @ self.action[g] - self.action[G.mul(g, h)]
                if not self.in_relations(diff).all():
                    raise ValueError("action matrices do not define a group action")

    # -- element helpers
    def reduce(self, v):
        """Canonical representative(s) modulo the relations."""
        v = _arr(v)
        if v.ndim == 1:
            return reduce_rows(self.relations, v[None, :], self.modulus)[0]
        return reduce_rows(self.relations, v.reshape(-1, self.k), self.modulus).reshape(v.shape)

    def in_relations(self, rows):
        rows = _arr(rows).reshape(-1, self.k)
        return ~reduce_rows(self.relations, rows, self.modulus).any(axis=1)

    def is_zero(self, v):
        return bool(self.in_relations(v)[0])

    def equal(self, v, w):
        return self.is_zero(_arr(v) - _arr(w))

    def act(self, g, v):
        return (_arr(v) @ self.action[g]) % self.modulus

    def zero(self):
        return np.zeros(self.k, dtype=np.int64)

    def basis_vector(self, i):
        v = self.zero()
        v[i] = 1
        return v

    @property
    def structure(self):
        if "structure" not in self._cache:
            gens = ResidueMatrix(np.eye(self.k, dtype=np.int64), self.modulus, cols=self.k)
            rels = ResidueMatrix(self.relations, self.modulus, cols=self.k)
            self._cache["structure"] = quotient_structure(gens, rels)
        return self._cache["structure"]

    @property
    def invariants(self):
        return self.structure.invariants

    def order(self):
        return self.structure.order

    def elements(self):
        """All elements as canonical rows, in a fixed order."""
        st = self.structure
        if not st.orders:
            return np.zeros((1, self.k), dtype=np.int64)
        coords = np.array(list(itertools.product(*[range(o) for o in st.orders])), dtype=np.int64)
        return self.reduce((coords @ st.generators) % self.modulus)

    def fixed_points(self):
        """Canonical elements fixed by every g (brute force)."""
        els = self.elements()
        keep = np.ones(len(els), dtype=bool)
        for g in self.group.elements():
            keep &= ~self.reduce((els @ self.action[g]) - els).any(axis=1)
        return els[keep]

    def restrict(self, subgroup_elems):
        sub, elems = self.group.subgroup(subgroup_elems)
        M = GModule(sub, self.modulus, [self.action[g] for g in elems], self.relations,
                    name=f"{self.name}|H", check=False)
        M.subgroup_elems = tuple(elems)
        return M

    def raised(self, Q):
        """The same module viewed over Z/Q for a multiple Q of the modulus."""
        if Q == self.modulus:
            return self
        if Q % self.modulus or prime_power(Q)[0] != self.p:
            raise ValueError(f"cannot raise modulus {self.modulus} to {Q}")
        key = ("raised", Q)
        if key not in self._cache:
            rel = np.concatenate([self.relations, self.modulus * np.eye(self.k, dtype=np.int64)])
            self._cache[key] = GModule(self.group, Q, self.action, rel, name=self.name, check=False)
        return self._cache[key]

    def inflate(self, group, projection):
        """Pull the action back along a surjection ``group -> self.group``."""
        return GModule(group, self.modulus, [self.action[projection[g]] for g in group.elements()],
                       self.relations, name=f"inf({self.name})")


class ModuleMap:
    """A G-equivariant map given by a k_src x k_tgt matrix (x -> x @ matrix)."""

    def __init__(self, source, target, matrix, check=True):
        if source.group != target.group:
            raise ValueError("modules over different groups")
        if prime_power(source.modulus)[0] != prime_power(target.modulus)[0]:
            raise ValueError("modules over different primes")
        self.source, self.target = source, target
        m = _arr(matrix).reshape(source.k, target.k) % target.modulus
        m.setflags(write=False)
        self.matrix = m
        if check:
            self.check()

    def __repr__(self):
        return f"ModuleMap({self.source.name} -> {self.target.name})"

    def check(self):
        S, T, m = self.source, self.target, self.matrix
        if S.relations.shape[0] and not T.in_relations(S.relations @ m).all():
            raise ValueError("map does not respect the relations of the source")
        if S.modulus < T.modulus and not T.in_relations(S.modulus * m).all():
            raise ValueError("map is not well defined on the source modulus")
        for g in S.group.elements():
            if not T.in_relations(S.action[g] @ m - m @ T.action[g]).all():
                raise ValueError(f"map is not G-equivariant (fails at element {g})")

    def apply(self, v):
        return (_arr(v) @ self.matrix) % self.target.modulus

    def compose(self, other):
        """``other`` after ``self``."""
        return ModuleMap(self.source, other.target, self.matrix @ other.matrix, check=False)

    def image_rows(self):
        return self.matrix

    def image_order(self):
        T = self.target
        gens = np.concatenate([self.matrix, T.relations])
        st = quotient_structure(ResidueMatrix(gens, T.modulus, cols=T.k),
                                ResidueMatrix(T.relations, T.modulus, cols=T.k))
        return st.order

    def is_surjective(self):
        return self.image_order() == self.target.order()

    def is_injective(self):
        return self.image_order() == self.source.order()

    def kernel_rows(self):
        """Rows in source coordinates generating the kernel."""
        S, T = self.source, self.target
        Q = max(S.modulus, T.modulus)
        Tq = T.raised(Q) if Q != T.modulus else T
        Sq = S.raised(Q) if Q != S.modulus else S
        stacked = np.concatenate([self.matrix, Tq.relations])
        ker = LinearSolver(ResidueMatrix(stacked, Q, cols=T.k)).kernel().entries[:, :S.k]
        ker = np.concatenate([ker, Sq.relations]) if Q != S.modulus else ker
        return ker % S.modulus

    def kernel(self):
        return submodule(self.source, self.kernel_rows())

    def is_zero(self):
        return bool(self.target.in_relations(self.matrix).all())

    def raised(self, Q):
        return ModuleMap(self.source.raised(Q), self.target.raised(Q), self.matrix, check=False)


def identity_map(M):
    return ModuleMap(M, M, np.eye(M.k, dtype=np.int64), check=False)


def zero_map(M, N):
    return ModuleMap(M, N, np.zeros((M.k, N.k), dtype=np.int64), check=False)


def trivial_module(group, modulus, k=1, name=None):
    eye = np.eye(k, dtype=np.int64)
    return GModule(group, modulus, [eye] * group.order, name=name or f"(Z/{modulus})^{k}", check=False)


def twisted_module(group, modulus, character, n=1, name=None):
    """Z/modulus(chi^n): rank one, g acts by chi(g)^n."""
    chi = character.reduce(modulus) if character.modulus != modulus else character
    chi = chi.power(n)
    mats = [np.array([[chi(g)]], dtype=np.int64) for g in group.elements()]
    return GModule(group, modulus, mats, name=name or f"Z/{modulus}({n})", check=False)


def _block_diag(blocks):
    n = sum(b.shape[0] for b in blocks)
    m = sum(b.shape[1] for b in blocks)
    out = np.zeros((n, m), dtype=np.int64)
    i = j = 0
    for b in blocks:
        out[i:i + b.shape[0], j:j + b.shape[1]] = b
        i += b.shape[0]
        j += b.shape[1]
    return out


def direct_sum(modules, name=None):
    """Direct sum with its inclusions and projections."""
    modules = list(modules)
    q = max(M.modulus for M in modules)
    modules_q = [M.raised(q) for M in modules]
    G = modules[0].group
    mats = [_block_diag([M.action[g] for M in modules_q]) for g in G.elements()]
    rel = _block_diag([M.relations for M in modules_q])
    S = GModule(G, q, mats, rel, name=name or " + ".join(M.name for M in modules), check=False)
    incs, projs = [], []
    off = 0
    for M in modules:
        inc = np.zeros((M.k, S.k), dtype=np.int64)
        inc[:, off:off + M.k] = np.eye(M.k, dtype=np.int64)
        incs.append(ModuleMap(M, S, inc, check=False))
        projs.append(ModuleMap(S, M, inc.T.copy(), check=False))
        off += M.k
    return S, incs, projs


def _present_subspace(rows, modulus, ambient_relations, ambient_action, group, name, check=True):
    """Module generated by ``rows`` inside an ambient presentation."""
    q = modulus
    rows = _arr(rows) % q
    k, n = rows.shape[0], rows.shape[1]
    stacked = np.concatenate([rows, ambient_relations]) if ambient_relations.shape[0] else rows
    solver = LinearSolver(ResidueMatrix(stacked, q, cols=n))
    rel = solver.kernel().entries[:, :k]
    mats = []
    for g in group.elements():
        imgs = (rows @ ambient_action[g]) % q
        x, ok = solver.solve_many(imgs)
        if not ok.all():
            raise ValueError("subspace is not G-stable")
        mats.append(x[:, :k])
    return GModule(group, q, mats, rel, name=name, check=check)


def submodule(M, rows, name=None):
    """Submodule generated by ``rows``; returns (S, inclusion map)."""
    rows = _arr(rows).reshape(-1, M.k) % M.modulus
    if rows.shape[0] == 0:
        S = GModule(M.group, M.modulus, [np.zeros((0, 0), dtype=np.int64)] * M.group.order,
                    name=name or f"0<{M.name}", check=False)
        return S, ModuleMap(S, M, np.zeros((0, M.k), dtype=np.int64), check=False)
    S = _present_subspace(rows, M.modulus, M.relations, M.action, M.group,
                          name or f"sub({M.name})")
    return S, ModuleMap(S, M, rows, check=False)


def quotient_module(M, rows, name=None):
    """M / <rows>; returns (Q, projection map)."""
    rows = _arr(rows).reshape(-1, M.k)
    rel = np.concatenate([M.relations, rows])
    Q = GModule(M.group, M.modulus, M.action, rel, name=name or f"{M.name}/N")
    return Q, ModuleMap(M, Q, np.eye(M.k, dtype=np.int64), check=False)


def hom_module(M, N, name=None):
    """Hom_{Z/q}(M, N) with (g F) = g o F o g^-1.

    Elements are flattened k_M x k_N matrices F (row-major); the module
    records ``hom_shape = (k_M, k_N)``.
    """
    G = M.group
    q = max(M.modulus, N.modulus)
    Mq, Nq = M.raised(q), N.raised(q)
    kM, kN = M.k, N.k
    dim = kM * kN
    # valid F: every relation row of M maps into the relations of N
    relM = Mq.relations
    if relM.shape[0]:
        L = np.zeros((dim, relM.shape[0] * kN), dtype=np.int64)
        for t, rho in enumerate(relM):
            for j in range(kM):
                for c in range(kN):
                    L[j * kN + c, t * kN + c] = rho[j]
        slack = _block_diag([Nq.relations] * relM.shape[0])
        stacked = np.concatenate([L, slack]) if slack.shape[0] else L
        valid = LinearSolver(ResidueMatrix(stacked, q, cols=L.shape[1])).kernel().entries[:, :dim]
    else:
        valid = np.eye(dim, dtype=np.int64)
    valid = howell_form(ResidueMatrix(valid, q, cols=dim)).entries
    amb_rel = np.zeros((0, dim), dtype=np.int64)
    if Nq.relations.shape[0]:
        amb_rel = np.concatenate([np.kron(np.eye(kM, dtype=np.int64)[i:i + 1], Nq.relations)
                                  for i in range(kM)])
    amb_action = [np.kron(Mq.action[G.inv(g)].T, Nq.action[g]) % q for g in G.elements()]
    H = _present_subspace(valid, q, amb_rel, amb_action, G, name or f"Hom({M.name},{N.name})")
    H.hom_shape = (kM, kN)
    H.hom_rows = valid
    H.hom_ends = (M, N)
    return H


def hom_element_matrix(H, v):
    """The k_M x k_N matrix of the Hom-module element ``v``."""
    return ((_arr(v) @ H.hom_rows) % H.modulus).reshape(H.hom_shape)


def coinduced_module(group, subgroup_elems, M_H, name=None):
    """Maps_H(G, M) with (g f)(x) = f(x g) and f(h x) = h f(x).

    Block j of a coordinate row holds f(s_j) for the right coset
    representative s_j; s_0 is the identity.
    """
    G = group
    H = sorted(subgroup_elems)
    _, elems = G.subgroup(H)
    hpos = {g: i for i, g in enumerate(elems)}
    reps, index = G.coset_reps(H)
    j0 = index[G.identity]
    order = [j0] + [j for j in range(len(reps)) if j != j0]
    reps = [reps[j] for j in order]
    where = {old: new for new, old in enumerate(order)}
    index = [where[i] for i in index]
    n, k, q = len(reps), M_H.k, M_H.modulus
    mats = []
    for g in G.elements():
        m = np.zeros((n * k, n * k), dtype=np.int64)
        for j, s in enumerate(reps):
            y = G.mul(s, g)
            l = index[y]
            hp = G.mul(y, G.inv(reps[l]))
            m[l * k:(l + 1) * k, j * k:(j + 1) * k] = M_H.action[hpos[hp]]
        mats.append(m)
    rel = _block_diag([M_H.relations] * n)
    C = GModule(G, q, mats, rel, name=name or f"CoInd({M_H.name})")
    C.coinduction = {"subgroup": tuple(H), "reps": reps, "index": index, "base": M_H,
                     "positions": hpos}
    return C


def permutation_module(gset, modulus, character=None, name=None):
    """Z/q(chi)[X]: g e_x = chi(g) e_{g x}."""
    G = gset.group
    chi = Character.trivial(G, modulus) if character is None else character.reduce(modulus)
    mats = []
    for g in G.elements():
        c = chi(g)
        m = np.zeros((gset.size, gset.size), dtype=np.int64)
        for x in range(gset.size):
            m[x, gset.act(g, x)] = c
        mats.append(m)
    return GModule(G, modulus, mats, name=name or f"Z/{modulus}[X]")


class WittModule(GModule):
    """W_r(A)(n) as a (Z/p^r, G)-module on the generators V^j tau(b_i).

    Generator ``j*d + i`` is the Witt vector with b_i in slot j and zeros
    elsewhere.  Every Witt vector has a unique expansion with digits in
    ``range(p)`` (``digits``), which also yields the relations
    ``p e_g = digits(p * gen_g)``.
    """

    def __init__(self, algebra, action, r, twist=None, n=1, name=None):
        A, G = algebra, action.group
        self.ring = W = WittRing(A, r)
        self.algebra, self.alg_action, self.length = A, action, r
        q = A.p ** r
        if twist is not None and twist.modulus % q:
            raise ValueError(f"twist modulus {twist.modulus} is not a multiple of p^r = {q}")
        self.twist, self.twist_power = twist, n
        d = A.dim
        self.gens = np.zeros((r * d, r), dtype=np.int64)
        for j in range(r):
            for i in range(d):
                self.gens[j * d + i, j] = A.basis_element(i)
        p_gens = W.int_mul_arrays(A.p, self.gens)
        rel = (A.p * np.eye(r * d, dtype=np.int64) - self.digits(p_gens)) % q
        chi = None if twist is None else twist.reduce(q).power(n)
        mats = []
        for g in G.elements():
            img = W.map_arrays(action.matrices[g], self.gens)
            m = self.digits(img)
            if chi is not None:
                m = (m * chi(g)) % q
            mats.append(m)
        tw = "" if twist is None else f"({n})"
        GModule.__init__(self, G, q, mats, rel, name=name or f"W{r}({A.name}){tw}")
        if self.order() != A.size ** r:
            raise AssertionError("Witt module presentation has the wrong order")

    def digits(self, x):
        """Digit expansion of Witt vectors (rows of shape (..., r))."""
        A, W, r, d = self.algebra, self.ring, self.length, self.algebra.dim
        x = np.array(x, dtype=np.int64).reshape(-1, r)
        out = np.zeros((x.shape[0], r * d), dtype=np.int64)
        for j in range(r):
            c = A.decode(x[:, j])
            out[:, j * d:(j + 1) * d] = c
            u = np.zeros_like(x)
            for i in range(d):
                g = self.gens[j * d + i]
                for t in range(A.p - 1):
                    mask = c[:, i] > t
                    if mask.any():
                        u[mask] = W.add_arrays(u[mask], g)
            x = W.sub_arrays(x, u)
        if x.any():
            raise AssertionError("digit expansion did not terminate")
        return out

    def to_witt(self, v):
        """Witt vectors (rows) of coordinate rows ``v``."""
        W = self.ring
        v = np.array(v, dtype=np.int64).reshape(-1, self.k) % self.modulus
        acc = np.zeros((v.shape[0], self.length), dtype=np.int64)
        for gi in range(self.k):
            coef = v[:, gi].copy()
            base = np.broadcast_to(self.gens[gi], acc.shape).copy()
            while coef.any():
                mask = (coef & 1).astype(bool)
                if mask.any():
                    acc[mask] = W.add_arrays(acc[mask], base[mask])
                coef >>= 1
                if coef.any():
                    base = W.add_arrays(base, base)
        return acc

    def from_witt(self, x):
        return self.digits(x)

    def frobenius_map(self, m):
        """W_r(Frob^m) as an endomorphism (G-equivariant)."""
        img = self.ring.frobenius_arrays(self.gens, m)
        return ModuleMap(self, self, self.digits(img))

    def algebra_map(self, target, matrix):
        """W_r of an algebra map A -> B (matrix d_A x d_B) into ``target``."""
        if target.length != self.length:
            raise ValueError("lengths differ")
        B = target.algebra
        img = np.asarray(B.encode(self.algebra.decode(self.gens) @ _arr(matrix)), dtype=np.int64)
        return ModuleMap(self, target, target.digits(img))

    def truncation_map(self, target):
        """pi_{s,r}: W_s(A)(n) -> W_r(A)(n)."""
        if target.algebra != self.algebra or target.length > self.length:
            raise ValueError("truncation needs the same algebra and a shorter length")
        r, d = target.length, self.algebra.dim
        m = np.zeros((self.k, target.k), dtype=np.int64)
        m[:r * d, :r * d] = np.eye(r * d, dtype=np.int64)
        return ModuleMap(self, target, m)

    def verschiebung_map(self, target):
        """V^t: W_s(A)(n) -> W_{s+t}(A)(n), a -> (0,..,0,a)."""
        if target.algebra != self.algebra or target.length < self.length:
            raise ValueError("Verschiebung needs the same algebra and a longer length")
        t, d = target.length - self.length, self.algebra.dim
        m = np.zeros((self.k, target.k), dtype=np.int64)
        m[:, t * d:] = np.eye(self.k, dtype=np.int64)
        return ModuleMap(self, target, m)


def wittmod_from_algebra(algebra, action=None, r=1, twist=None, n=1, group=None):
    """W_r(A)(n): the Witt module with semilinear action twisted by chi^n."""
    if action is None:
        if group is None:
            raise ValueError("need an action or a group")
        action = trivial_action(group, algebra)
    return WittModule(algebra, action, r, twist, n)
