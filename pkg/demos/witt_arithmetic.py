"""Witt vectors of length r over F_p behave like Z/p^r.

Adds 1 to itself to walk through W_3(F_2), shows the carry rule in the
second component, and checks F V = p on W_2(F_4).
"""

from wittkummer.algebra import make_finite_field
from wittkummer.witt import WittRing, compute_universal_polynomials, frobenius, teichmuller, verschiebung

W = WittRing(2, 3)
print("n -> digits in W_3(F_2)")
for n in range(8):
    print(f"  {n} -> {W.from_int(n).components}")

polys = compute_universal_polynomials(2, 2)
print("second addition polynomial, p = 2:", polys.addition_polys[1].as_expr())

t1 = teichmuller(1, WittRing(2, 2))
print("tau(1) + tau(1) =", (t1 + t1).components, "(not tau(0): Teichmuller is not additive)")

F4 = make_finite_field(2, [1, 1, 1])
W2 = WittRing(F4, 2)
bad = [x for x in W2.elements() if frobenius(verschiebung(x)) != 2 * x]
print(f"F V = 2 on all {W2.size} elements of W_2(F_4):", not bad)
