"""Truncated p-typical Witt vectors over finite F_p-algebras.

The ring operations come from the universal Witt polynomials, obtained by
inverting the ghost map over QQ.  Integrality of every coefficient is
checked, then the polynomials are reduced mod p and evaluated directly in
the coefficient algebra (p is not invertible there, so ghost components are
useless for evaluation).

Evaluation is vectorized: components are numpy arrays of encoded algebra
elements, so a whole addition table is one call.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass

import numpy as np
from sympy import QQ, ZZ
from sympy.polys.rings import ring

from .algebra import prime_field
from .groups import BoundExceeded
from .zpmod import _is_prime

__all__ = [
    "WittParams", "UniversalWittPolynomials", "WittRing", "WittVector",
    "compute_universal_polynomials", "ghost_polynomial", "add", "mul", "neg",
    "verschiebung", "frobenius", "teichmuller", "truncate", "DEFAULT_BOUND",
]

DEFAULT_BOUND = 125


@dataclass(frozen=True)
class WittParams:
    p: int
    r: int

    def __post_init__(self):
        if not _is_prime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.r < 1:
            raise ValueError("length must be at least 1")


@dataclass(frozen=True)
class UniversalWittPolynomials:
    """S, P, N as sympy ring elements over ZZ in a_0..a_{r-1}, b_0..b_{r-1}.

    ``reduced_*`` hold the same polynomials mod p as lists of
    ``(coefficient, exponent tuple)``; exponents are ordered a_0..a_{r-1},
    b_0..b_{r-1}.
    """

    p: int
    r: int
    ring: object
    addition_polys: tuple
    multiplication_polys: tuple
    negation_polys: tuple
    reduced_add: tuple
    reduced_mul: tuple
    reduced_neg: tuple


_cache = {}
_cache_lock = threading.Lock()


def ghost_polynomial(x, p, n):
    """w_n(x) = sum_{j <= n} p^j x_j^(p^(n-j))."""
    return sum((p ** j * x[j] ** (p ** (n - j)) for j in range(n + 1)), x[0] * 0)


def _invert_ghost(p, r, target, x0):
    """Solve w_n(out) = target[n] for n < r, asserting integrality."""
    out = []
    for n in range(r):
        rest = target[n] - sum((p ** j * out[j] ** (p ** (n - j)) for j in range(n)), x0 * 0)
        poly = rest * QQ(1, p ** n)
        for coeff in poly.coeffs():
            if coeff.denominator != 1:
                raise ArithmeticError(f"non-integral Witt polynomial at (p={p}, n={n}): "
                                      "this is a bug in the ghost inversion")
        out.append(poly)
    return out


def _reduce(poly, p, nvars):
    terms = []
    for monom, coeff in sorted(poly.terms()):
        c = int(coeff.numerator) % p
        if c:
            terms.append((c, tuple(monom[:nvars])))
    return tuple(terms)


def compute_universal_polynomials(p, r, bound=DEFAULT_BOUND):
    """Universal addition, multiplication and negation polynomials (cached)."""
    WittParams(p, r)
    if p ** r > bound:
        raise BoundExceeded("p^r", p ** r, bound)
    key = (p, r)
    with _cache_lock:
        if key in _cache:
            return _cache[key]
    names = [f"a{i}" for i in range(r)] + [f"b{i}" for i in range(r)]
    R, *gens = ring(",".join(names), QQ)
    a, b = gens[:r], gens[r:]
    wa = [ghost_polynomial(a, p, n) for n in range(r)]
    wb = [ghost_polynomial(b, p, n) for n in range(r)]
    S = _invert_ghost(p, r, [wa[n] + wb[n] for n in range(r)], a[0])
    P = _invert_ghost(p, r, [wa[n] * wb[n] for n in range(r)], a[0])
    N = _invert_ghost(p, r, [-wa[n] for n in range(r)], a[0])
    Rz = R.clone(domain=ZZ)
    conv = lambda polys: tuple(Rz(dict((m, int(c.numerator)) for m, c in f.terms())) for f in polys)
    polys = UniversalWittPolynomials(
        p, r, Rz, conv(S), conv(P), conv(N),
        tuple(_reduce(f, p, 2 * r) for f in S),
        tuple(_reduce(f, p, 2 * r) for f in P),
        tuple(_reduce(f, p, r) for f in N),
    )
    with _cache_lock:
        _cache.setdefault(key, polys)
        return _cache[key]


def _evaluate_rank_one(terms, variables, algebra, shape):
    """Fast path for one-dimensional algebras: x * y = c x y mod p."""
    p, c = algebra.p, int(algebra.constants[0, 0, 0])
    total = np.zeros(shape, dtype=np.int64)
    powers = {}
    for coef, monom in terms:
        val = np.full(shape, coef % p, dtype=np.int64)
        degree = 0
        for i, e in enumerate(monom):
            if e:
                # x^e in this algebra is c^(e-1) x^e as integers
                if (i, e) not in powers:
                    powers[i, e] = _powmod(variables[i], e, p)
                val = val * powers[i, e] % p
                degree += e
        if degree > 1:
            val = val * pow(c, degree - 1, p) % p
        elif degree == 0:
            val = val * algebra.one % p
        total = (total + val) % p
    return total


def _powmod(x, e, p):
    out = np.ones_like(x)
    base = x % p
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def _evaluate(terms, variables, algebra):
    """Evaluate reduced polynomial terms at arrays of encoded elements."""
    shape = np.broadcast(*variables).shape if variables else ()
    variables = [np.broadcast_to(np.asarray(v, dtype=np.int64), shape) for v in variables]
    if algebra.dim == 1:
        return _evaluate_rank_one(terms, variables, algebra, shape)
    powers = {}

    def power(i, e):
        key = (i, e)
        if key not in powers:
            if e == 1:
                powers[key] = variables[i]
            else:
                powers[key] = np.asarray(algebra.pow(variables[i], e), dtype=np.int64)
        return powers[key]

    total = np.zeros(shape, dtype=np.int64)
    for c, monom in terms:
        val = np.full(shape, algebra.one, dtype=np.int64)
        for i, e in enumerate(monom):
            if e:
                val = np.asarray(algebra.mul(val, power(i, e)), dtype=np.int64)
        if c != 1:
            val = np.asarray(algebra.scale(c, val), dtype=np.int64)
        total = np.asarray(algebra.add(total, val), dtype=np.int64)
    return total


class WittRing:
    """W_r(A) for a finite F_p-algebra A.

    Elements in bulk are integer arrays of shape ``(..., r)`` holding encoded
    components; ``WittVector`` wraps a single element.
    """

    def __init__(self, algebra, r, bound=DEFAULT_BOUND):
        if isinstance(algebra, int):
            algebra = prime_field(algebra)
        self.algebra = algebra
        self.p, self.r = algebra.p, int(r)
        self.params = WittParams(self.p, self.r)
        self.bound = bound
        self.polys = compute_universal_polynomials(self.p, self.r, bound)

    def __repr__(self):
        return f"W_{self.r}({self.algebra.name})"

    def __eq__(self, other):
        return isinstance(other, WittRing) and self.r == other.r and self.algebra == other.algebra

    def __hash__(self):
        return hash((self.r, self.algebra))

    @property
    def size(self):
        return self.algebra.size ** self.r

    # -- bulk operations on (..., r) arrays
    def add_arrays(self, x, y):
        x, y = np.asarray(x), np.asarray(y)
        vars_ = [x[..., i] for i in range(self.r)] + [y[..., i] for i in range(self.r)]
        return np.stack([_evaluate(t, vars_, self.algebra) for t in self.polys.reduced_add], axis=-1)

    def mul_arrays(self, x, y):
        x, y = np.asarray(x), np.asarray(y)
        vars_ = [x[..., i] for i in range(self.r)] + [y[..., i] for i in range(self.r)]
        return np.stack([_evaluate(t, vars_, self.algebra) for t in self.polys.reduced_mul], axis=-1)

    def neg_arrays(self, x):
        x = np.asarray(x)
        vars_ = [x[..., i] for i in range(self.r)]
        return np.stack([_evaluate(t, vars_, self.algebra) for t in self.polys.reduced_neg], axis=-1)

    def sub_arrays(self, x, y):
        return self.add_arrays(x, self.neg_arrays(y))

    def int_mul_arrays(self, n, x):
        """n * x by double-and-add (n may be negative)."""
        x = np.asarray(x, dtype=np.int64)
        if n < 0:
            return self.int_mul_arrays(-n, self.neg_arrays(x))
        out = np.zeros_like(x)
        base = x
        while n:
            if n & 1:
                out = self.add_arrays(out, base)
            base = self.add_arrays(base, base)
            n >>= 1
        return out

    def frobenius_arrays(self, x, times=1):
        out = np.asarray(x, dtype=np.int64)
        for _ in range(times):
            out = np.asarray(self.algebra.pow(out, self.p), dtype=np.int64)
        return out

    def verschiebung_arrays(self, x, times=1):
        x = np.asarray(x, dtype=np.int64)
        if times >= self.r:
            return np.zeros_like(x)
        out = np.zeros_like(x)
        out[..., times:] = x[..., :self.r - times]
        return out

    def map_arrays(self, matrix, x):
        """W_r of a linear ring map of A, applied componentwise."""
        return np.asarray(self.algebra.apply(matrix, np.asarray(x, dtype=np.int64)), dtype=np.int64)

    def all_elements(self):
        """Every element as a (|A|^r, r) array, first component fastest."""
        s = self.algebra.size
        idx = np.arange(s ** self.r, dtype=np.int64)
        return np.stack([(idx // s ** i) % s for i in range(self.r)], axis=-1)

    def index_of(self, x):
        s = self.algebra.size
        x = np.asarray(x, dtype=np.int64)
        return (x * np.array([s ** i for i in range(self.r)], dtype=np.int64)).sum(axis=-1)

    # -- element constructors
    def __call__(self, components):
        return WittVector(self, components)

    def zero(self):
        return WittVector(self, [0] * self.r)

    def one(self):
        return teichmuller(self.algebra.one, self)

    def from_int(self, n):
        return WittVector(self, self.int_mul_arrays(int(n), self.one().components))

    def elements(self):
        for row in self.all_elements():
            yield WittVector(self, row)


class WittVector:
    """A single element of W_r(A), components stored as encoded elements."""

    __slots__ = ("ring", "components")

    def __init__(self, ring, components):
        comps = tuple(int(c) for c in np.asarray(components).reshape(-1))
        if len(comps) != ring.r:
            raise ValueError(f"expected {ring.r} components, got {len(comps)}")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "components", comps)

    def __setattr__(self, name, value):
        raise AttributeError("WittVector is immutable")

    @property
    def params(self):
        return self.ring.params

    def _check(self, other):
        if not isinstance(other, WittVector):
            return NotImplemented
        if other.ring != self.ring:
            raise ValueError(f"Witt ring mismatch: {self.ring} vs {other.ring}")
        return None

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, neg(other))

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return neg(self)

    def __rmul__(self, n):
        if isinstance(n, (int, np.integer)):
            return WittVector(self.ring, self.ring.int_mul_arrays(int(n), self.components))
        return NotImplemented

    def __eq__(self, other):
        return (isinstance(other, WittVector) and self.ring == other.ring
                and self.components == other.components)

    def __hash__(self):
        return hash((self.ring, self.components))

    def __repr__(self):
        return f"W{self.ring.r}{self.components}"

    def is_zero(self):
        return not any(self.components)


def _same(x, y):
    if not isinstance(x, WittVector) or not isinstance(y, WittVector):
        raise TypeError("expected Witt vectors")
    if x.ring != y.ring:
        raise ValueError(f"Witt ring mismatch: {x.ring} vs {y.ring}")


def add(x, y):
    _same(x, y)
    return WittVector(x.ring, x.ring.add_arrays(x.components, y.components))


def mul(x, y):
    _same(x, y)
    return WittVector(x.ring, x.ring.mul_arrays(x.components, y.components))


def neg(x):
    return WittVector(x.ring, x.ring.neg_arrays(x.components))


def verschiebung(x, times=1):
    return WittVector(x.ring, x.ring.verschiebung_arrays(x.components, times))


def frobenius(x, times=1):
    return WittVector(x.ring, x.ring.frobenius_arrays(x.components, times))


def teichmuller(a, ring):
    return WittVector(ring, [int(a)] + [0] * (ring.r - 1))


def truncate(x, r):
    """pi_{s,r}: keep the first r components."""
    s = x.ring.r
    if r > s:
        raise ValueError(f"cannot truncate length {s} to length {r}")
    if r < 1:
        raise ValueError("length must be at least 1")
    target = x.ring if r == s else WittRing(x.ring.algebra, r, x.ring.bound)
    return WittVector(target, x.components[:r])
