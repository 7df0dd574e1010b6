"""Which characters make a small group into a cyclotomic pair?

For each group and each character mod p^(e+1) we ask whether reduction
H^1(H, Z/p^(e+1)(chi)) -> H^1(H, Z/p(chi)) is onto for every subgroup H,
and print the first failing subgroup otherwise.
"""

from wittkummer.gmodule import all_characters
from wittkummer.groups import cyclic_group, direct_product
from wittkummer.kummer import CyclotomicData, is_cyclotomic_pair

c2 = cyclic_group(2)
cases = [(c2, 2, 1), (c2, 2, 2), (cyclic_group(3), 2, 1), (cyclic_group(4), 2, 1),
         (direct_product(c2, c2), 2, 1), (cyclic_group(3), 3, 1)]

for G, p, e in cases:
    print(f"{G.name}, p = {p}, e = {e}")
    for chi in all_characters(G, p ** (e + 1)):
        rep = is_cyclotomic_pair(CyclotomicData(G, p, e, 1, chi))
        tail = "" if rep.verdict else f"  fails on subgroup {list(rep.witness[0])}"
        print(f"  chi = {list(chi.values)}: {'pass' if rep.verdict else 'fail'}{tail}")
