"""Lift every class of H^1(C_2, W_1(A)(1)) to W_2 for A = F_2[x]/(x^2).

A is not reduced, so the lifting needs a Frobenius twist: the factorization
through a permutation module has exponent m(A) = 1.  We print, for each
class, the exponent used by the induction and the smallest exponent at
which the pulled-back class already lifts.
"""

from wittkummer.algebra import make_truncated_poly, trivial_action
from wittkummer.cohomology import cohomology_group
from wittkummer.gmodule import Character
from wittkummer.groups import cyclic_group
from wittkummer.kummer import CyclotomicData, fit_factorization, lift_cocycle_rank1, witt_module

G = cyclic_group(2)
A = make_truncated_poly(2, 2)
act = trivial_action(G, A)
data = CyclotomicData(G, 2, 1, 1, Character(G, 4, [1, 3]))

fit = fit_factorization(A, act)
print(f"m(A) = {fit.m}; f = {fit.f.tolist()}, g = {fit.g.tolist()}")

W1 = witt_module(A, act, 1, data.chi.reduce(2))
for c in cohomology_group(W1, 1).classes():
    rep = lift_cocycle_rank1(data, A, act, c)
    print(f"class {c.cocycle.tolist()}: induction m = {rep.algorithmic_m}, "
          f"minimal m = {rep.m}, lift = {rep.algorithmic_lift.cocycle.tolist()}")
