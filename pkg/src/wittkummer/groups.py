"""Finite groups given by multiplication tables.

Elements are the integers ``0..n-1``.  Profinite groups enter only through
finite quotients, so a table is all we ever need.
"""

from __future__ import annotations

import itertools

import numpy as np

__all__ = ["FiniteGroup", "BoundExceeded", "cyclic_group", "direct_product",
           "trivial_group", "semidirect_product", "subgroups", "quotient_group"]

DEFAULT_SUBGROUP_BOUND = 64


class BoundExceeded(ValueError):
    """An enumeration would exceed a configured size bound."""

    def __init__(self, name, value, bound):
        super().__init__(f"{name} = {value} exceeds the bound {bound}")
        self.name, self.value, self.bound = name, value, bound


class FiniteGroup:
    """A group on ``range(n)`` with multiplication ``table[g, h] = g*h``."""

    def __init__(self, table, name=None, labels=None):
        t = np.array(table, dtype=np.int64)
        n = t.shape[0]
        if t.ndim != 2 or t.shape != (n, n) or n == 0:
            raise ValueError("multiplication table must be a nonempty square array")
        if t.min() < 0 or t.max() >= n:
            raise ValueError("table entries must lie in range(n)")
        for row in t:
            if len(set(row.tolist())) != n:
                raise ValueError("table rows must be permutations (not a group)")
        for col in t.T:
            if len(set(col.tolist())) != n:
                raise ValueError("table columns must be permutations (not a group)")
        ids = [e for e in range(n) if np.array_equal(t[e], np.arange(n))]
        if len(ids) != 1 or not np.array_equal(t[:, ids[0]], np.arange(n)):
            raise ValueError("table has no two-sided identity")
        e = ids[0]
        lhs = t[t, :]          # lhs[a,b,c] = (ab)c
        rhs = t[:, t]          # rhs[a,b,c] = a(bc)
        if not np.array_equal(lhs, rhs):
            raise ValueError("multiplication table is not associative")
        inv = np.array([int(np.nonzero(t[g] == e)[0][0]) for g in range(n)], dtype=np.int64)
        t.setflags(write=False)
        inv.setflags(write=False)
        self.table = t
        self.identity = e
        self.inverse = inv
        self.order = n
        self.name = name or f"G{n}"
        self.labels = list(labels) if labels is not None else [str(g) for g in range(n)]

    def __repr__(self):
        return f"FiniteGroup({self.name}, order={self.order})"

    def __len__(self):
        return self.order

    def __eq__(self, other):
        return isinstance(other, FiniteGroup) and np.array_equal(self.table, other.table)

    def __hash__(self):
        return hash(self.table.tobytes())

    def elements(self):
        return range(self.order)

    def mul(self, g, h):
        return int(self.table[g, h])

    def inv(self, g):
        return int(self.inverse[g])

    def prod(self, elems):
        out = self.identity
        for g in elems:
            out = int(self.table[out, g])
        return out

    def power(self, g, k):
        out = self.identity
        base = g if k >= 0 else self.inv(g)
        for _ in range(abs(k)):
            out = int(self.table[out, base])
        return out

    def element_order(self, g):
        k, x = 1, g
        while x != self.identity:
            x = int(self.table[x, g])
            k += 1
        return k

    def is_abelian(self):
        return bool(np.array_equal(self.table, self.table.T))

    def is_cyclic(self):
        return any(self.element_order(g) == self.order for g in self.elements())

    def generator(self):
        """Smallest element generating the group, or None if not cyclic."""
        for g in self.elements():
            if self.element_order(g) == self.order:
                return g
        return None

    def generated(self, gens):
        """Sorted tuple of the subgroup generated by ``gens``."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            x = frontier.pop()
            for s in gens:
                y = int(self.table[x, s])
                if y not in seen:
                    seen.add(y)
                    frontier.append(y)
        return tuple(sorted(seen))

    def is_subgroup(self, elems):
        s = set(int(x) for x in elems)
        if self.identity not in s:
            return False
        return all(int(self.table[a, self.inverse[b]]) in s for a in s for b in s)

    def subgroup(self, elems):
        """The subgroup on ``elems`` as a FiniteGroup plus the inclusion list."""
        elems = sorted(set(int(x) for x in elems))
        if not self.is_subgroup(elems):
            raise ValueError(f"{elems} is not a subgroup of {self.name}")
        pos = {g: i for i, g in enumerate(elems)}
        table = [[pos[int(self.table[a, b])] for b in elems] for a in elems]
        sub = FiniteGroup(table, name=f"{self.name}|{len(elems)}",
                          labels=[self.labels[g] for g in elems])
        return sub, elems

    def right_cosets(self, sub):
        """Right cosets H*g: returns (representatives, coset index of each g).

        Representatives are the minimal element of each coset, so the coset
        of H itself is represented by the identity only when the identity is
        the minimal element; callers needing rep(H) = 1 use ``coset_reps``.
        """
        sub = list(sub)
        index = [-1] * self.order
        reps = []
        for g in self.elements():
            if index[g] >= 0:
                continue
            j = len(reps)
            reps.append(g)
            for h in sub:
                index[int(self.table[h, g])] = j
        return reps, index

    def coset_reps(self, sub):
        """Right coset representatives with the identity representing H."""
        reps, index = self.right_cosets(sub)
        j0 = index[self.identity]
        reps[j0] = self.identity
        return reps, index

    def is_normal(self, sub):
        s = set(sub)
        return all(int(self.table[self.table[g, h], self.inverse[g]]) in s
                   for g in self.elements() for h in s)


def trivial_group():
    return FiniteGroup([[0]], name="1", labels=["1"])


def cyclic_group(n):
    t = [[(a + b) % n for b in range(n)] for a in range(n)]
    return FiniteGroup(t, name=f"C{n}", labels=[f"s^{a}" for a in range(n)])


def direct_product(g1, g2):
    n1, n2 = g1.order, g2.order
    t = np.zeros((n1 * n2, n1 * n2), dtype=np.int64)
    for a, b, c, d in itertools.product(range(n1), range(n2), range(n1), range(n2)):
        t[a * n2 + b, c * n2 + d] = g1.mul(a, c) * n2 + g2.mul(b, d)
    labels = [f"({x},{y})" for x in g1.labels for y in g2.labels]
    return FiniteGroup(t, name=f"{g1.name}x{g2.name}", labels=labels)


def semidirect_product(modulus, group, char_values):
    """(Z/modulus) x| G with (x,g)(y,h) = (x + chi(g) y, gh).

    Element (x, g) has index ``x * |G| + g``.
    """
    n = group.order
    t = np.zeros((modulus * n, modulus * n), dtype=np.int64)
    for x, g, y, h in itertools.product(range(modulus), range(n), range(modulus), range(n)):
        z = (x + int(char_values[g]) * y) % modulus
        t[x * n + g, y * n + h] = z * n + group.mul(g, h)
    labels = [f"({x},{lab})" for x in range(modulus) for lab in group.labels]
    return FiniteGroup(t, name=f"Z{modulus}x|{group.name}", labels=labels)


def subgroups(group, bound=DEFAULT_SUBGROUP_BOUND):
    """All subgroups, as sorted element tuples in a fixed order."""
    if group.order > bound:
        raise BoundExceeded("group order", group.order, bound)
    found = {group.generated([])}
    cyclic = {group.generated([g]) for g in group.elements()}
    found |= cyclic
    frontier = set(found)
    while frontier:
        new = set()
        for s in frontier:
            for c in cyclic:
                j = group.generated(set(s) | set(c))
                if j not in found:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(found, key=lambda s: (len(s), s))


def quotient_group(group, normal):
    """G/N as a FiniteGroup together with the projection list."""
    if not group.is_subgroup(normal) or not group.is_normal(normal):
        raise ValueError("not a normal subgroup")
    reps, index = group.right_cosets(normal)
    m = len(reps)
    t = [[index[group.mul(reps[a], reps[b])] for b in range(m)] for a in range(m)]
    q = FiniteGroup(t, name=f"{group.name}/{len(normal)}",
                    labels=[group.labels[g] + "N" for g in reps])
    return q, list(index)
