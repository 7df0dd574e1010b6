"""Enumeration-based reference computations, independent of the linear algebra.

These walk over explicit cochains and module elements.  They are slow and
only meant for desk-scale cross-checks of the Howell-form engine.
"""

from __future__ import annotations

import itertools

import numpy as np

__all__ = ["rank_one_cohomology_order", "h1_lift_exists", "brute_classes_equal",
           "ModuleElements"]


def _tuples(N, n):
    return list(itertools.product(range(N), repeat=n))


def _count_rank_one_cocycles(group, q, chi, n):
    """Number of n-cocycles G^n -> Z/q(chi), by backtracking with propagation."""
    N = group.order
    if n == 0:
        return sum(1 for a in range(q) if all((chi[g] * a - a) % q == 0 for g in range(N)))
    cells = _tuples(N, n)
    pos = {c: i for i, c in enumerate(cells)}
    # each cocycle equation as a list of (cell index, coefficient)
    eqs = []
    for tup in _tuples(N, n + 1):
        terms = {}

        def put(cell, coef):
            i = pos[cell]
            terms[i] = (terms.get(i, 0) + coef) % q

        put(tup[1:], chi[tup[0]])
        for i in range(n):
            merged = tup[:i] + (group.mul(tup[i], tup[i + 1]),) + tup[i + 2:]
            put(merged, (-1) ** (i + 1))
        put(tup[:n], (-1) ** (n + 1))
        terms = [(i, c) for i, c in terms.items() if c]
        if terms:
            eqs.append(terms)
    by_cell = [[] for _ in cells]
    for k, eq in enumerate(eqs):
        for i, _ in eq:
            by_cell[i].append(k)
    units = {c: pow(c, -1, q) for c in range(1, q) if np.gcd(c, q) == 1}
    vals = [None] * len(cells)

    def propagate(stack):
        """Assign forced cells; return False on a contradiction."""
        while stack:
            k = stack.pop()
            eq = eqs[k]
            free = [(i, c) for i, c in eq if vals[i] is None]
            total = sum(c * vals[i] for i, c in eq if vals[i] is not None) % q
            if not free:
                if total:
                    return False
                continue
            if len(free) == 1 and free[0][1] in units:
                i, c = free[0]
                vals[i] = (-total * units[c]) % q
                assigned.append(i)
                stack.extend(by_cell[i])
        return True

    count = 0

    def search():
        nonlocal count
        try:
            i = vals.index(None)
        except ValueError:
            count += 1
            return
        for v in range(q):
            mark = len(assigned)
            vals[i] = v
            assigned.append(i)
            if propagate(list(by_cell[i])):
                search()
            while len(assigned) > mark:
                vals[assigned.pop()] = None

    assigned = []
    search()
    return count


def rank_one_cohomology_order(group, q, chi_values, n):
    """|H^n(G, Z/q(chi))| as |Z^n| / |B^n| with |B^n| = |C^{n-1}| / |Z^{n-1}|."""
    chi = [int(v) % q for v in chi_values]
    z_n = _count_rank_one_cocycles(group, q, chi, n)
    if n == 0:
        return z_n
    z_prev = _count_rank_one_cocycles(group, q, chi, n - 1)
    b_n = q ** (group.order ** (n - 1)) // z_prev
    assert z_n % b_n == 0
    return z_n // b_n


class ModuleElements:
    """Elements of a GModule as hashable tuples with add / act tables."""

    def __init__(self, M):
        self.M = M
        els = M.elements()
        self.rows = els
        self.index = {tuple(r): i for i, r in enumerate(els)}
        n = len(els)
        sums = M.reduce((els[:, None, :] + els[None, :, :]).reshape(-1, M.k)).reshape(n, n, M.k)
        self.add = np.array([[self.index[tuple(sums[i, j])] for j in range(n)] for i in range(n)])
        self.neg = np.array([self.index[tuple(r)] for r in M.reduce(-els)])
        self.act = np.array([[self.index[tuple(r)] for r in M.reduce(els @ M.action[g])]
                             for g in M.group.elements()])
        self.zero = self.index[tuple(M.reduce(M.zero()))]

    def lookup(self, v):
        return self.index[tuple(self.M.reduce(v))]


def _h1_cocycles(E):
    """All 1-cocycles G -> M as index lists, from their values on generators."""
    G = E.M.group
    gens = []
    for g in G.elements():
        if g not in G.generated(gens):
            gens.append(g)
    out = []
    n = len(E.rows)
    for choice in itertools.product(range(n), repeat=len(gens)):
        table = {G.identity: E.zero}
        frontier = [G.identity]
        ok = True
        while frontier and ok:
            x = frontier.pop(0)
            for s, v in zip(gens, choice):
                y = G.mul(x, s)
                val = E.add[table[x], E.act[x][v]]
                if y in table:
                    if table[y] != val:
                        ok = False
                        break
                else:
                    table[y] = val
                    frontier.append(y)
        if not ok:
            continue
        z = [table[g] for g in G.elements()]
        if all(z[G.mul(g, h)] == E.add[z[g], E.act[g][z[h]]] for g in G.elements() for h in G.elements()):
            out.append(z)
    return out


def brute_classes_equal(E, z1, z2):
    """Do two 1-cocycles differ by g -> g m - m for some element m?"""
    G = E.M.group
    diff = [E.add[a, E.neg[b]] for a, b in zip(z1, z2)]
    for m in range(len(E.rows)):
        if all(diff[g] == E.add[E.act[g][m], E.neg[m]] for g in G.elements()):
            return True
    return False


def h1_lift_exists(q_map, cocycle_rows, big=None, small=None):
    """Is there a 1-cocycle of the source reducing to a cohomologous cocycle?"""
    big = big or ModuleElements(q_map.source)
    small = small or ModuleElements(q_map.target)
    target = [small.lookup(v) for v in cocycle_rows]
    images = [small.lookup(v) for v in q_map.apply(big.rows)]
    for z in _h1_cocycles(big):
        if brute_classes_equal(small, [images[x] for x in z], target):
            return True
    return False
