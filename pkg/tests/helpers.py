"""Seeded random instances shared by the property suites."""

from __future__ import annotations

import random
from fractions import Fraction

from chernweil.calculus import Derivation
from chernweil.gca import AlgebraSignature, Element
from chernweil.models import levi_civita, lie_algebra_model, poisson_model
from chernweil.symplectic import rational_inverse

SMALL = (Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(1, 3), Fraction(1), Fraction(2), Fraction(3))


def random_signature(rng: random.Random, size: int | None = None, max_weight: int = 3) -> AlgebraSignature:
    size = size or rng.randint(1, 4)
    return AlgebraSignature.from_grades((f"g{i}", rng.randint(0, max_weight)) for i in range(size))


def random_weil_signature(rng: random.Random, size: int | None = None) -> AlgebraSignature:
    return random_signature(rng, size).doubled()


def random_monomial(rng: random.Random, sig: AlgebraSignature, max_len: int = 3) -> Element:
    w = sig.one()
    for _ in range(rng.randint(0, max_len)):
        w = w * sig.gen(rng.randrange(len(sig)))
    return w


def random_element(rng: random.Random, sig: AlgebraSignature, terms: int = 4, max_len: int = 3,
                   degree: int | None = None, weight: int | None = None) -> Element:
    """Sum of random monomials, optionally filtered to one total degree or one weight."""
    out = sig.zero()
    for _ in range(terms * (6 if degree is not None or weight is not None else 1)):
        m = random_monomial(rng, sig, max_len)
        if not m:
            continue
        if degree is not None and m.degree() != degree:
            continue
        if weight is not None and m.weight() != weight:
            continue
        out = out + m.scale(rng.choice(SMALL))
        if len(out) >= terms:
            break
    return out


def random_homogeneous(rng: random.Random, sig: AlgebraSignature, terms: int = 4, max_len: int = 3) -> Element:
    """Nonzero element of a single total degree."""
    seed = sig.zero()
    while not seed:
        seed = random_monomial(rng, sig, max_len)
    rest = random_element(rng, sig, terms=terms - 1, max_len=max_len, degree=seed.degree())
    return seed.scale(rng.choice(SMALL)) + rest or seed


def random_derivation(rng: random.Random, sig: AlgebraSignature, degree: int | None = None) -> Derivation:
    degree = rng.randint(-1, 2) if degree is None else degree
    images = {}
    for g in sig:
        want = g.degree + degree
        if want < 0:
            continue
        img = random_element(rng, sig, terms=2, degree=want)
        if img:
            images[g.name] = img
    return Derivation(sig, degree, images)


# quadratic Lie algebras


def so3_data():
    C = {(a, b, c): levi_civita(a, b, c) for a in range(3) for b in range(3) for c in range(3)
         if levi_civita(a, b, c)}
    P = [[Fraction(int(i == j)) for j in range(3)] for i in range(3)]
    return 3, C, P


def sl2_data():
    # basis h, e, f
    C = {(1, 0, 1): 2, (1, 1, 0): -2, (2, 0, 2): -2, (2, 2, 0): 2, (0, 1, 2): 1, (0, 2, 1): -1}
    P = [[Fraction(2), 0, 0], [0, 0, Fraction(1)], [0, Fraction(1), 0]]
    return 3, C, [[Fraction(x) for x in row] for row in P]


def abelian_data(rng: random.Random, dim: int):
    while True:
        P = [[Fraction(0)] * dim for _ in range(dim)]
        for i in range(dim):
            for j in range(i, dim):
                P[i][j] = P[j][i] = rng.choice(SMALL + (Fraction(0),) * 3) if i != j else rng.choice(SMALL)
        if rational_inverse(P) is not None:
            return dim, {}, P


def direct_sum(*blocks):
    dim = 0
    C: dict = {}
    Ps = []
    for n, c, p in blocks:
        for (a, b, cc), q in c.items():
            C[(a + dim, b + dim, cc + dim)] = Fraction(q)
        Ps.append((dim, n, p))
        dim += n
    P = [[Fraction(0)] * dim for _ in range(dim)]
    for off, n, p in Ps:
        for i in range(n):
            for j in range(n):
                P[off + i][off + j] = Fraction(p[i][j])
    return dim, C, P


def random_invertible(rng: random.Random, dim: int) -> list[list[Fraction]]:
    while True:
        M = [[rng.choice((Fraction(0),) * 3 + SMALL) if i != j else rng.choice(SMALL) for j in range(dim)]
             for i in range(dim)]
        if rational_inverse(M) is not None:
            return M


def change_basis(dim: int, C: dict, P, M):
    """Structure constants and pairing in the basis ``e'_j = sum_a M[a][j] e_a``."""
    Minv = rational_inverse(M)
    C2 = {}
    for i in range(dim):
        for j in range(dim):
            for k in range(dim):
                q = Fraction(0)
                for (a, b, c), v in C.items():
                    if Minv[i][a] and M[b][j] and M[c][k]:
                        q += Minv[i][a] * v * M[b][j] * M[c][k]
                if q:
                    C2[(i, j, k)] = q
    P2 = [[sum((M[a][j] * P[a][b] * M[b][k] for a in range(dim) for b in range(dim)), Fraction(0))
           for k in range(dim)] for j in range(dim)]
    return C2, P2


def random_quadratic_lie(rng: random.Random):
    """(dim, C, P) for a random base change of a sum of so3, sl2 and abelian pieces, pairings rescaled."""
    blocks = []
    for _ in range(rng.randint(1, 2)):
        kind = rng.choice(("so3", "sl2", "ab"))
        if kind == "so3":
            n, C, P = so3_data()
        elif kind == "sl2":
            n, C, P = sl2_data()
        else:
            n, C, P = abelian_data(rng, rng.randint(1, 2))
        s = rng.choice(SMALL)
        blocks.append((n, C, [[s * x for x in row] for row in P]))
    dim, C, P = direct_sum(*blocks)
    if dim > 4:
        dim, C, P = blocks[0]
    C, P = change_basis(dim, C, P, random_invertible(rng, dim))
    return dim, C, P


def random_lie_model(rng: random.Random, name: str = "random_lie"):
    dim, C, P = random_quadratic_lie(rng)
    pairing = {(i, j): P[i][j] for i in range(dim) for j in range(i, dim) if P[i][j]}
    return lie_algebra_model(C, pairing, dim=dim, name=name)


def random_poisson_model(rng: random.Random, name: str = "random_poisson"):
    """Constant tensor, or a Lie-Poisson tensor from a random Lie algebra."""
    if rng.random() < 0.5:
        dim = rng.randint(2, 4)
        tensor = {(i, j): rng.choice(SMALL + (Fraction(0),)) for i in range(dim) for j in range(i + 1, dim)}
        return poisson_model(dim, tensor, name=name)
    dim, C, _ = random_quadratic_lie(rng)
    tensor = {}
    for i in range(dim):
        for j in range(i + 1, dim):
            expr = " + ".join(f"({C[(k, i, j)]})*x{k + 1}" for k in range(dim) if (k, i, j) in C)
            if expr:
                tensor[(i, j)] = expr
    return poisson_model(dim, tensor, name=name)
