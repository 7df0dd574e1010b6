import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wittkummer.algebra import (PermutationGSet, action_from_generators, fixed_subring,
                                frobenius_endomorphism, galois_action, idempotents,
                                is_irreducible, make_finite_field, make_product,
                                make_truncated_poly, nilpotency_data, nilradical, norm_element,
                                prime_field, primitive_idempotents, residue_decomposition)
from wittkummer.groups import (BoundExceeded, FiniteGroup, cyclic_group, direct_product,
                               semidirect_product, subgroups)

from oracles import klein_table

F4 = make_finite_field(2, [1, 1, 1])
F9 = make_finite_field(3, [1, 0, 1])


def test_subgroup_counts():
    c2 = cyclic_group(2)
    assert [len(subgroups(G)) for G in (cyclic_group(4), direct_product(c2, c2), cyclic_group(6))] \
        == [3, 5, 4]
    s3 = semidirect_product(3, c2, [1, 2])
    assert s3.order == 6 and not s3.is_abelian()
    assert len(subgroups(s3)) == 6
    normal = [h for h in subgroups(s3) if s3.is_normal(h)]
    assert len(normal) == 3


def test_group_table_validation():
    assert FiniteGroup(klein_table()).order == 4
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1], [1, 1]])
    with pytest.raises(ValueError):
        FiniteGroup([[0, 1, 2], [1, 0, 2], [2, 2, 0]])
    with pytest.raises(BoundExceeded):
        subgroups(cyclic_group(70))


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.data())
def test_cyclic_group_laws(n, data):
    G = cyclic_group(n)
    g = data.draw(st.integers(0, n - 1))
    h = data.draw(st.integers(0, n - 1))
    assert G.mul(g, G.inv(g)) == G.identity
    assert G.mul(g, h) == G.mul(h, g)
    assert n % G.element_order(g) == 0
    assert G.is_cyclic()


def test_field_construction():
    assert is_irreducible(2, [1, 1, 1]) and not is_irreducible(2, [1, 0, 1])
    with pytest.raises(ValueError):
        make_finite_field(2, [1, 0, 1])
    assert F4.size == 4 and F4.is_field() and F4.is_perfect()
    for a in range(1, 4):
        assert F4.mul(a, F4.inverse(a)) == F4.one


def test_frobenius_of_f4_has_order_two():
    fr = frobenius_endomorphism(F4)
    assert not np.array_equal(fr % 2, np.eye(2, dtype=int))
    assert np.array_equal((fr @ fr) % 2, np.eye(2, dtype=int))


def test_truncated_poly_nilpotency():
    D3 = make_truncated_poly(3, 3)
    assert not D3.is_perfect()
    assert nilradical(D3).shape[0] == 2
    # index 3 needs one Frobenius to kill the nilradical over F_3
    assert nilpotency_data(D3) == (3, 1)
    assert nilpotency_data(make_truncated_poly(2, 3)) == (3, 2)
    assert nilpotency_data(F4) == (1, 0)


def test_idempotents_of_product():
    P = make_product([prime_field(2), prime_field(2)])
    assert idempotents(P) == [0, 1, 2, 3]
    assert sorted(primitive_idempotents(P)) == [1, 2]
    assert len(residue_decomposition(P).fields) == 2
    assert len(residue_decomposition(make_truncated_poly(2, 2)).fields) == 1


def test_galois_fixed_ring_and_norm():
    c2 = cyclic_group(2)
    act = galois_action(c2, F4)
    fixed, rows = fixed_subring(F4, act)
    assert fixed.size == 2
    for a in range(1, 4):
        assert norm_element(F4, act, a) == F4.one


def test_action_must_be_an_algebra_map():
    c2 = cyclic_group(2)
    D2 = make_truncated_poly(2, 2)
    with pytest.raises(ValueError):
        action_from_generators(c2, D2, {1: np.array([[0, 1], [1, 0]])})
    swap = make_product([prime_field(2), prime_field(2)])
    act = action_from_generators(c2, swap, {1: np.array([[0, 1], [1, 0]])})
    assert act.act(1, 1) == 2


def test_permutation_gset_checks_homomorphism():
    c2 = cyclic_group(2)
    X = PermutationGSet(c2, [[0, 1, 2], [1, 0, 2]])
    assert sorted(map(sorted, X.orbits())) == [[0, 1], [2]]
    with pytest.raises(ValueError):
        PermutationGSet(cyclic_group(3), [[0, 1], [1, 0], [1, 0]])


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 8), st.integers(0, 8), st.integers(0, 8))
def test_f9_field_axioms(a, b, c):
    A = F9
    assert A.mul(a, A.add(b, c)) == A.add(A.mul(a, b), A.mul(a, c))
    assert A.mul(A.mul(a, b), c) == A.mul(a, A.mul(b, c))
    assert A.pow(a, 9) == a
