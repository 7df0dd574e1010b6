import itertools

import pytest
from hypothesis import given, settings, strategies as st

from wittkummer.algebra import make_finite_field, make_truncated_poly, prime_field
from wittkummer.witt import (WittRing, compute_universal_polynomials, frobenius, teichmuller,
                             truncate, verschiebung)

from oracles import witt_add_fp, witt_from_int, witt_mul_fp

FP_CASES = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (3, 3), (5, 1), (5, 2)]


@pytest.mark.parametrize("p,r", FP_CASES)
def test_fp_tables_match_ghost_oracle(p, r):
    W = WittRing(p, r)
    digits = list(itertools.product(range(p), repeat=r))
    for a in digits:
        for b in digits:
            x, y = W(a), W(b)
            assert (x + y).components == witt_add_fp(p, a, b)
            assert (x * y).components == witt_mul_fp(p, a, b)


@pytest.mark.parametrize("p,r", [(2, 3), (3, 2), (5, 2)])
def test_from_int_is_additive_generator(p, r):
    W = WittRing(p, r)
    for n in range(p ** r):
        assert W.from_int(n).components == witt_from_int(p, r, n)
    assert W.from_int(p ** r).is_zero()


def test_teichmuller_not_additive():
    W = WittRing(2, 2)
    t1 = teichmuller(1, W)
    assert t1 + t1 == W((0, 1))
    assert t1 + t1 != teichmuller(0, W)


def test_universal_polynomials_low_degree():
    polys = compute_universal_polynomials(2, 2)
    a0, a1, b0, b1 = polys.ring.gens
    assert polys.addition_polys[0] == a0 + b0
    assert polys.addition_polys[1] == a1 + b1 - a0 * b0
    assert polys.multiplication_polys[1] == a1 * b0 ** 2 + a0 ** 2 * b1 + 2 * a1 * b1
    three = compute_universal_polynomials(3, 2)
    a0, a1, b0, b1 = three.ring.gens
    assert three.addition_polys[1] == a1 + b1 - a0 ** 2 * b0 - a0 * b0 ** 2


def test_negation_in_characteristic_two():
    # -1 = (1, 1, 1, ...) in W(F_2)
    W = WittRing(2, 3)
    assert (-W.one()).components == (1, 1, 1)


F4 = make_finite_field(2, [1, 1, 1])
D2 = make_truncated_poly(2, 2)


@pytest.mark.parametrize("A,r", [(F4, 2), (D2, 2), (prime_field(3), 3)])
def test_frobenius_verschiebung_relations(A, r):
    W = WittRing(A, r)
    p = A.p
    for x in W.elements():
        assert frobenius(verschiebung(x)) == p * x
        assert verschiebung(frobenius(x)) == p * x


def test_teichmuller_multiplicative_over_f4():
    W = WittRing(F4, 2)
    for a in range(4):
        for b in range(4):
            assert teichmuller(a, W) * teichmuller(b, W) == teichmuller(F4.mul(a, b), W)


def test_truncation_is_a_ring_map():
    W3, W1 = WittRing(D2, 2), WittRing(D2, 1)
    els = list(W3.elements())
    for x in els[::3]:
        for y in els[::5]:
            assert truncate(x + y, 1) == truncate(x, 1) + truncate(y, 1)
            assert truncate(x * y, 1) == truncate(x, 1) * truncate(y, 1)
    assert truncate(els[5], 1).ring == W1


def test_ring_mismatch_raises():
    with pytest.raises(ValueError):
        WittRing(2, 2).one() + WittRing(2, 3).one()
    with pytest.raises(ValueError):
        truncate(WittRing(2, 2).one(), 3)


W24 = WittRing(F4, 2)
elements = st.tuples(st.integers(0, 3), st.integers(0, 3)).map(W24)


@settings(max_examples=60, deadline=None)
@given(elements, elements, elements)
def test_ring_axioms_w2_f4(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + (-x) == W24.zero()
    assert x * W24.one() == x


@settings(max_examples=60, deadline=None)
@given(elements, elements)
def test_frobenius_is_ring_endomorphism(x, y):
    assert frobenius(x + y) == frobenius(x) + frobenius(y)
    assert frobenius(x * y) == frobenius(x) * frobenius(y)


def test_size_bound_enforced():
    from wittkummer.groups import BoundExceeded
    with pytest.raises(BoundExceeded):
        WittRing(2, 9)
