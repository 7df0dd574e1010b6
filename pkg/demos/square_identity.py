"""e_1 cup e_1 = chi cup e_1 over the Klein four group.

For every character chi mod 4 and every class e_1 in H^1(V_4, F_2) we list
the Z/4-extensions 0 -> Z/4(chi) -> E -> Z/4 -> 0 reducing to e_1 and compare
both cup products in H^2(V_4, F_2).
"""

from wittkummer.corpus import kummer_instances
from wittkummer.groups import cyclic_group, direct_product
from wittkummer.kummer import kummer_identity_check

c2 = cyclic_group(2)
for G, chi, e1, lifts in kummer_instances([direct_product(c2, c2)]):
    if not lifts:
        print(f"chi = {list(chi.values)}, e1 = {e1.vector.tolist()}: no mod-4 lift")
        continue
    held = [kummer_identity_check(e1, chi, E)[0] for E in lifts]
    print(f"chi = {list(chi.values)}, e1 = {e1.vector.tolist()}: "
          f"{len(lifts)} lifts, identity holds in all: {all(held)}")
