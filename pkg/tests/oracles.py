"""Reference computations that share no code with the package.

Witt arithmetic goes through integer ghost components; cyclic group
cohomology uses the two-periodic resolution; general H^0/H^1 enumerate
functions on the group directly.
"""

import itertools


def _ghost(p, digits):
    return [sum(p ** i * digits[i] ** (p ** (n - i)) for i in range(n + 1))
            for n in range(len(digits))]


def _unghost(p, ghosts):
    out = []
    for n, w in enumerate(ghosts):
        rest = w - sum(p ** i * out[i] ** (p ** (n - i)) for i in range(n))
        assert rest % p ** n == 0, "ghost vector not in the image of integral Witt vectors"
        out.append(rest // p ** n)
    return out


def witt_add_fp(p, a, b):
    """Sum in W_r(F_p) of digit tuples, via integer lifts and ghost maps."""
    g = [x + y for x, y in zip(_ghost(p, a), _ghost(p, b))]
    return tuple(x % p for x in _unghost(p, g))


def witt_mul_fp(p, a, b):
    g = [x * y for x, y in zip(_ghost(p, a), _ghost(p, b))]
    return tuple(x % p for x in _unghost(p, g))


def witt_from_int(p, r, n):
    """Digits of n in W_r(F_p) = Z/p^r: add 1 to itself n times."""
    one = (1,) + (0,) * (r - 1)
    x = (0,) * r
    for _ in range(n % p ** r):
        x = witt_add_fp(p, x, one)
    return x


def cyclic_cohomology_order(m, q, c, n):
    """|H^n(C_m, Z/q)| where the generator acts by multiplication by c."""
    def size_of_kernel(mult):
        return sum(1 for x in range(q) if (mult * x) % q == 0)

    def size_of_image(mult):
        return len({(mult * x) % q for x in range(q)})

    norm = sum(pow(c, i, q) for i in range(m)) % q
    if n == 0:
        return size_of_kernel(c - 1)
    if n % 2:
        return size_of_kernel(norm) // size_of_image(c - 1)
    return size_of_kernel(c - 1) // size_of_image(norm)


def h1_order_by_enumeration(table, q, act):
    """|H^1(G, Z/q)| with g acting by multiplication by act[g], from all maps G -> Z/q."""
    N = len(table)
    cocycles = 0
    for z in itertools.product(range(q), repeat=N):
        if all(z[table[g][h]] == (z[g] + act[g] * z[h]) % q for g in range(N) for h in range(N)):
            cocycles += 1
    boundaries = {tuple((act[g] * m - m) % q for g in range(N)) for m in range(q)}
    return cocycles // len(boundaries)


def cyclic_table(n):
    return [[(a + b) % n for b in range(n)] for a in range(n)]


def klein_table():
    return [[a ^ b for b in range(4)] for a in range(4)]


def mat_mul_mod(a, b, p):
    return [[sum(a[i][k] * b[k][j] for k in range(len(b))) % p for j in range(len(b[0]))]
            for i in range(len(a))]
