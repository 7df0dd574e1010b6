import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from wittkummer.algebra import (frobenius_endomorphism, galois_action, make_finite_field,
                                make_truncated_poly, prime_field, trivial_action)
from wittkummer.cohomology import cohomology_group, frobenius_pullback, induced_map, is_cocycle
from wittkummer.gmodule import Character, all_characters, trivial_module, twisted_module
from wittkummer.groups import BoundExceeded, cyclic_group, direct_product, trivial_group
from wittkummer.kummer import (CyclotomicData, LineBundle, NonFreeLineBundle, NotCyclotomic,
                               cup_with_t, cyclothymic_witness, fit_factorization,
                               is_cyclotomic_pair, kummer_identity_check, laurent_model,
                               lift_cocycle_invertible, lift_cocycle_rank1, reduction_class,
                               smooth_instance_check, witt_module)
from wittkummer.corpus import fit_algebras, kummer_instances

C1, C2, C3, C4 = trivial_group(), cyclic_group(2), cyclic_group(3), cyclic_group(4)
V4 = direct_product(C2, C2)
F4 = make_finite_field(2, [1, 1, 1])


def test_sign_character_is_cyclotomic():
    rep = is_cyclotomic_pair(CyclotomicData(C2, 2, 1, 1, Character(C2, 4, [1, 3])))
    assert rep.verdict and rep.witness is None
    assert [r[1:] for r in rep.rows] == [(1, 1, 1, True), (2, 2, 2, True)]


@pytest.mark.parametrize("p", [2, 3])
def test_trivial_character_fails_with_generator_witness(p):
    G = cyclic_group(p)
    rep = is_cyclotomic_pair(CyclotomicData(G, p, 1, 1, Character.trivial(G, p * p)))
    assert not rep.verdict
    elems, cls = rep.witness
    assert elems == tuple(range(p))
    assert not cls.is_zero() and cohomology_group(cls.module, 1).order == p


@pytest.mark.parametrize("e", [1, 2])
def test_odd_order_groups_always_pass_at_two(e):
    for chi in all_characters(C3, 2 ** (e + 1)):
        for n in (1, 2):
            assert is_cyclotomic_pair(CyclotomicData(C3, 2, e, n, chi)).verdict


def test_frozen_verdicts_at_two():
    # only -1 survives among characters of order <= 2 mod 8
    verdicts = {chi.values: is_cyclotomic_pair(CyclotomicData(C2, 2, 2, 1, chi)).verdict
                for chi in all_characters(C2, 8)}
    assert verdicts == {(1, 1): False, (1, 3): False, (1, 5): False, (1, 7): True}
    assert not any(is_cyclotomic_pair(CyclotomicData(C4, 2, 1, 1, chi)).verdict
                   for chi in all_characters(C4, 4))
    assert not any(is_cyclotomic_pair(CyclotomicData(V4, 2, 1, 1, chi)).verdict
                   for chi in all_characters(V4, 4))


def test_passing_pairs_pass_at_every_intermediate_level():
    checked = 0
    for G, p, e in ((C2, 2, 2), (C2, 3, 2), (C3, 2, 2)):
        for chi in all_characters(G, p ** (e + 1)):
            if not is_cyclotomic_pair(CyclotomicData(G, p, e, 1, chi)).verdict:
                continue
            for f in range(2, e + 1):
                lower = CyclotomicData(G, p, f - 1, 1, chi.reduce(p ** f))
                assert is_cyclotomic_pair(lower).verdict
                checked += 1
    assert checked >= 3


def test_cyclotomic_requires_matching_modulus():
    with pytest.raises(ValueError):
        CyclotomicData(C2, 2, 1, 1, Character(C2, 8, [1, 7]))
    with pytest.raises(BoundExceeded):
        is_cyclotomic_pair(CyclotomicData(C2, 2, 1, 3, Character(C2, 4, [1, 3])))


def test_cyclothymic_witness_is_sign():
    psi = Character.trivial(C2, 2)
    F2 = twisted_module(C2, 2, psi)
    gen = [c for c in cohomology_group(F2, 1).classes() if not c.is_zero()][0]
    chi = cyclothymic_witness(C2, 2, 1, 1, psi, [((0, 1), gen)])
    assert chi is not None and chi.values == (1, 3)
    # no pairs: the first lift in lexicographic order
    assert cyclothymic_witness(C2, 2, 1, 1, psi, []).values == (1, 1)


@pytest.mark.parametrize("index", range(9))
def test_fit_corpus(index):
    A, act = fit_algebras()[index]
    fit = fit_factorization(A, act)
    assert fit.check(act)
    p = A.p
    assert np.array_equal((fit.f @ fit.g) % p,
                          np.linalg.matrix_power(frobenius_endomorphism(A), fit.m) % p)
    # smallest m with x^(p^m) = 0 on the nilradical
    expected = 0
    while p ** expected < fit.nilpotency_index:
        expected += 1
    assert fit.m == expected


def test_fit_frozen_truncated_poly():
    D2 = make_truncated_poly(2, 2)
    fit = fit_factorization(D2, trivial_action(C1, D2))
    assert fit.m == 1 and fit.X.size == 1
    assert fit.f.tolist() == [[1], [0]] and fit.g.tolist() == [[1, 0]]


def _lift_all(data, A, act, r):
    W = witt_module(A, act, r, data.chi.reduce(data.p ** r))
    out = []
    for c in cohomology_group(W, 1).classes():
        rep = lift_cocycle_rank1(data, A, act, c)
        top = rep.algorithmic_lift
        assert is_cocycle(top.module, top.cocycle, 1)
        down = top.module.truncation_map(c.module)
        assert induced_map(down, top) == frobenius_pullback(c, rep.algorithmic_m)
        assert induced_map(rep.lift.module.truncation_map(c.module), rep.lift) == \
            frobenius_pullback(c, rep.m)
        out.append((c, rep))
    return out


def test_lift_truncated_poly_sign():
    D2 = make_truncated_poly(2, 2)
    data = CyclotomicData(C2, 2, 1, 1, Character(C2, 4, [1, 3]))
    reps = _lift_all(data, D2, trivial_action(C2, D2), 1)
    assert len(reps) == 4
    for c, rep in reps:
        assert rep.m_A == 1 and rep.algorithmic_m == 1
        assert rep.m <= rep.algorithmic_m
        assert rep.lift.module.length == 2


def test_lift_over_galois_f8_c3():
    data = CyclotomicData(C3, 2, 2, 1, Character.trivial(C3, 8))
    act = galois_action(C3, make_finite_field(2, [1, 1, 0, 1]))
    for r in (1, 2):
        for c, rep in _lift_all(data, act.algebra, act, r):
            assert rep.m == 0


def test_lift_refuses_non_cyclotomic_pairs():
    F2 = prime_field(2)
    data = CyclotomicData(C2, 2, 1, 1, Character.trivial(C2, 4))
    W = witt_module(F2, trivial_action(C2, F2), 1, Character.trivial(C2, 2))
    c = list(cohomology_group(W, 1).classes())[1]
    with pytest.raises(NotCyclotomic):
        lift_cocycle_rank1(data, F2, trivial_action(C2, F2), c)


def test_line_bundle_must_be_free():
    F2 = prime_field(2)
    act = trivial_action(C2, F2)
    data = CyclotomicData(C2, 2, 1, 1, Character(C2, 4, [1, 3]))
    W = witt_module(F2, act, 1, Character.trivial(C2, 2))
    c = list(cohomology_group(W, 1).classes())[1]
    rep = lift_cocycle_invertible(data, LineBundle(F2), act, c)
    assert rep.tensor_exponent == 2 ** rep.algorithmic_m
    with pytest.raises(NonFreeLineBundle):
        lift_cocycle_invertible(data, LineBundle(F2, free=False), act, c)


def test_laurent_model_sizes_and_t():
    data = CyclotomicData(C2, 2, 1, 1, Character(C2, 4, [1, 3]))
    for k, order in ((1, 4), (2, 8)):
        model = laurent_model(data, k)
        assert model.group.order == order
        assert is_cocycle(model.module, model.t_cocycle, 1)
        assert not model.t_class.is_zero()
    with pytest.raises(BoundExceeded):
        laurent_model(data, 2, bound=4)


def test_cup_with_t_lands_in_degree_two():
    data = CyclotomicData(C2, 2, 1, 1, Character(C2, 4, [1, 3]))
    model = laurent_model(data, 1)
    F2 = trivial_module(C2, 2)
    gen = [c for c in cohomology_group(F2, 1).classes() if not c.is_zero()][0]
    out = cup_with_t(model, gen)
    assert out.degree == 2 and out.module.group is model.group


def test_square_identity_on_klein_four():
    count = 0
    for G, chi, e1, lifts in kummer_instances([V4]):
        for E2 in lifts:
            ok, lhs, rhs = kummer_identity_check(e1, chi, E2)
            assert ok
            count += 1
    assert count > 0


def test_square_identity_rejects_mismatched_reduction():
    instances = [(chi, e1, lifts) for G, chi, e1, lifts in kummer_instances([C2]) if lifts]
    chi, e1, lifts = instances[0]
    others = [x for c, x, _ in instances if c == chi and x != e1]
    F2 = e1.module
    assert reduction_class(lifts[0], F2) == e1
    if others:
        with pytest.raises(ValueError):
            kummer_identity_check(others[0], chi, lifts[0])


def test_smooth_instance_f2_witness():
    F2 = prime_field(2)
    res = smooth_instance_check(F2, trivial_action(C2, F2))
    assert res["verdict"] and res["perfect"]
    with pytest.raises(ValueError):
        smooth_instance_check(F2, trivial_action(C2, F2), e=2)


@settings(max_examples=15, deadline=None)
@given(st.sampled_from([1, 3, 5]), st.sampled_from([2, 3]))
def test_coprime_order_always_cyclotomic(m, p):
    G = cyclic_group(m)
    if m % p == 0:
        return
    for chi in all_characters(G, p * p):
        assert is_cyclotomic_pair(CyclotomicData(G, p, 1, 1, chi)).verdict
