import itertools

import numpy as np
import pytest

from wittkummer.algebra import PermutationGSet, galois_action, make_finite_field, prime_field, trivial_action
from wittkummer.bruteforce import ModuleElements, h1_lift_exists
from wittkummer.cohomology import cohomology_group
from wittkummer.extensions import (FiniteRing, GeometricallyNontrivial, GModExtension, b2_h1_classes,
                                   b2_reduction_surjective, baer_sum, brute_force_automorphisms,
                                   extension_automorphisms, extension_class, extension_from_cocycle,
                                   extension_of_torsor, find_torsor_isomorphism, is_extension_morphism,
                                   modulify, module_section, obstruction_class, pullback,
                                   pushforward, split_extension, torsor_of_extension)
from wittkummer.gmodule import (Character, ModuleMap, hom_module, permutation_module,
                                trivial_module, twisted_module)
from wittkummer.groups import cyclic_group

C2, C3 = cyclic_group(2), cyclic_group(3)


def _setup(G=C2, q=4, chi=None):
    A = trivial_module(G, q, name="A")
    B = twisted_module(G, q, chi or Character(G, q, [1, 3]), name="B")
    H = hom_module(A, B)
    return A, B, H, list(cohomology_group(H, 1).classes())


def test_class_round_trip_and_split():
    A, B, H, classes = _setup()
    assert len(classes) == 2
    for z in classes:
        E = extension_from_cocycle(A, B, z, hom=H)
        assert np.array_equal(extension_class(E).vector, z.vector)
    assert extension_class(split_extension(A, B)).is_zero()


def test_baer_sum_adds_classes():
    X = PermutationGSet(C2, [[0, 1], [1, 0]])
    A = trivial_module(C2, 2, name="F2")
    B = permutation_module(X, 2, name="F2[C2]")
    H = hom_module(A, B)
    classes = list(cohomology_group(H, 1).classes())
    A2 = trivial_module(C2, 2, name="F2'")
    B2 = trivial_module(C2, 2, name="F2''")
    H2 = hom_module(A2, B2)
    classes2 = list(cohomology_group(H2, 1).classes())
    assert len(classes2) == 2
    for z1, z2 in itertools.product(classes2, repeat=2):
        E1 = extension_from_cocycle(A2, B2, z1, hom=H2)
        E2 = extension_from_cocycle(A2, B2, z2, hom=H2)
        assert np.array_equal(extension_class(baer_sum(E1, E2)).vector, (z1 + z2).vector)
    # H^1(C2, Hom(F2, F2[C2])) vanishes (Shapiro), so every extension splits
    assert len(classes) == 1


def test_baer_sum_needs_common_ends():
    A, B, H, classes = _setup()
    E = extension_from_cocycle(A, B, classes[1], hom=H)
    other = split_extension(trivial_module(C2, 4), B)
    with pytest.raises(ValueError):
        baer_sum(E, other)


def test_pullback_along_doubling_kills_class():
    A, B, H, classes = _setup(chi=Character(C2, 4, [1, 1]))
    nonzero = [z for z in classes if not z.is_zero()][0]
    E = extension_from_cocycle(A, B, nonzero, hom=H)
    two = ModuleMap(A, A, [[2]])
    assert extension_class(pullback(two, E)).is_zero()
    ident = ModuleMap(A, A, [[1]])
    assert np.array_equal(extension_class(pullback(ident, E)).vector, nonzero.vector)


def test_pushforward_along_identity_keeps_class():
    A, B, H, classes = _setup()
    z = classes[1]
    E = extension_from_cocycle(A, B, z, hom=H)
    pushed = pushforward(ModuleMap(B, B, [[1]]), E)
    assert np.array_equal(extension_class(pushed).vector, z.vector)


def test_non_split_surjection_has_no_linear_section():
    Z2, Z4 = trivial_module(C2, 2), trivial_module(C2, 4)
    ext = GModExtension(ModuleMap(Z2, Z4, [[2]]), ModuleMap(Z4, Z2, [[1]]))
    with pytest.raises(GeometricallyNontrivial):
        module_section(ext)


def test_exactness_is_checked():
    Z4 = trivial_module(C2, 4)
    with pytest.raises(ValueError):
        GModExtension(ModuleMap(Z4, Z4, [[1]]), ModuleMap(Z4, Z4, [[1]]))


@pytest.mark.parametrize("G", [C2, C3])
def test_torsor_dictionary_round_trip(G):
    X_set = PermutationGSet(G, [[(i + g) % G.order for i in range(G.order)] for g in G.elements()])
    A = trivial_module(G, 2, name="F2")
    B = permutation_module(X_set, 2, name="F2[G]")
    H = hom_module(A, B)
    for z in cohomology_group(H, 1).classes():
        E = extension_from_cocycle(A, B, z, hom=H)
        X = torsor_of_extension(E)
        assert X.size == B.order()
        for rebuilt in (extension_of_torsor(X), modulify(X)):
            assert np.array_equal(extension_class(rebuilt).vector, z.vector)
            assert find_torsor_isomorphism(X, torsor_of_extension(rebuilt)) is not None


def test_distinct_torsors_are_not_isomorphic():
    A = trivial_module(C2, 2, name="F2")
    B = trivial_module(C2, 2, name="F2'")
    H = hom_module(A, B)
    z0, z1 = list(cohomology_group(H, 1).classes())
    X0 = torsor_of_extension(extension_from_cocycle(A, B, z0, hom=H))
    X1 = torsor_of_extension(extension_from_cocycle(A, B, z1, hom=H))
    assert X0.T is X1.T is B
    assert find_torsor_isomorphism(X0, X1) is None
    assert find_torsor_isomorphism(X1, X1) is not None


def test_automorphism_count_matches_enumeration():
    A, B, H, classes = _setup(q=2, chi=Character(C2, 2, [1, 1]))
    for z in classes:
        E = extension_from_cocycle(A, B, z, hom=H)
        auts = {m.tobytes() for m in extension_automorphisms(E)}
        brute = {m.astype(np.int64).tobytes() for m in brute_force_automorphisms(E)}
        assert auts == brute
        assert len(auts) == cohomology_group(H, 0).order == 2
        for phi in extension_automorphisms(E):
            assert is_extension_morphism(E, E, phi)


def test_obstruction_matches_enumeration():
    big = trivial_module(C2, 4)
    small = trivial_module(C2, 2)
    qmap = ModuleMap(big, small, [[1]])
    bigE, smallE = ModuleElements(big), ModuleElements(small)
    verdicts = []
    for c in cohomology_group(small, 1).classes():
        obs = obstruction_class(qmap, c)
        assert obs.is_zero() == h1_lift_exists(qmap, c.cocycle, bigE, smallE)
        verdicts.append(obs.is_zero())
    assert verdicts.count(False) == 1


def test_b2_over_f2():
    F2 = prime_field(2)
    verdict, report, big, small = b2_reduction_surjective(F2, trivial_action(C2, F2))
    assert verdict
    # B_2(F_2) is cyclic of order two, so H^1 = Hom(C_2, C_2) has two classes
    assert len(report) == len(b2_h1_classes(small)) == 2
    assert all(w is not None for _, w in report)


def test_b2_galois_f4():
    F4 = make_finite_field(2, [1, 1, 1])
    verdict, report, big, small = b2_reduction_surjective(F4, galois_action(C2, F4))
    assert verdict
    assert isinstance(small, FiniteRing) and small.size == 4
