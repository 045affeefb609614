"""Shared fixtures: standard spaces and random generators for the test suites."""

import random
from fractions import Fraction

from wittext.field import QQ, gf
from wittext.flags import Flag
from wittext.space import MetricSpace, perp, span, subspace_sum
from wittext.witt import random_isometry, witt_decompose
from wittext.maps import image_of

F3 = gf(3)
F7 = gf(7)


def space(F, gram, name=""):
    return MetricSpace.from_gram(F, gram, name)


def hyperbolic(m, F=F3):
    """H_{2m} with basis e_1..e_m, e~_1..e~_m and b(e_i, e~_i) = 1."""
    n = 2 * m
    return space(F, [[1 if abs(i - j) == m else 0 for j in range(n)] for i in range(n)], f"H{n}")


def diagonal(entries, F=F3):
    n = len(entries)
    return space(F, [[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])


def h2_d2(F=F3):
    return space(F, [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]], "H2+D2")


def gram_types_4():
    return [hyperbolic(2), diagonal([1, 1, 1, 1]), h2_d2()]


def rvec(rng, F, n):
    if F.p:
        return [rng.randrange(F.p) for _ in range(n)]
    return [Fraction(rng.randint(-3, 3)) for _ in range(n)]


def rsub(rng, V, d, inside=None):
    """A random subspace of dimension exactly d (inside ``inside`` when given)."""
    base = inside if inside is not None else V.whole()
    while True:
        s = span(V, [base.vector(rvec(rng, V.field, base.dim)) for _ in range(d)])
        if s.dim == d:
            return s


def rsub_any(rng, V):
    return rsub(rng, V, rng.randint(0, V.n))


def rflag(rng, V, k):
    dims = sorted(rng.randrange(0, V.n + 1) for _ in range(k - 1))
    members = [V.zero()]
    for d in dims:
        cur = members[-1]
        while cur.dim < d:
            cur = subspace_sum(cur, span(V, [rvec(rng, V.field, V.n)]))
        members.append(cur)
    members.append(V.whole())
    return Flag(V, tuple(members))


def rtotally_isotropic(rng, V, inside=None):
    """A random nonzero totally isotropic subspace, taken inside the image of V+."""
    W = witt_decompose(V, seed=rng.randrange(1000))
    plus = image_of(random_isometry(V, rng), W.plus)
    return rsub(rng, V, rng.randint(1, plus.dim), plus)


def rself_dual(rng, V):
    """A random self-dual flag built from a chain of totally isotropic subspaces."""
    W = witt_decompose(V, seed=rng.randrange(1000))
    plus = image_of(random_isometry(V, rng), W.plus)
    chain = [V.zero()]
    for d in sorted(rng.sample(range(1, plus.dim + 1), rng.randint(0, plus.dim))):
        chain.append(_grow(rng, V, chain[-1], d, plus))
    return Flag(V, tuple(chain + [perp(m) for m in reversed(chain)]))


def _grow(rng, V, cur, d, inside):
    while cur.dim < d:
        cur = subspace_sum(cur, span(V, [inside.vector(rvec(rng, V.field, inside.dim))]))
    return cur


def rational_space(rng, n):
    """A random symmetric Gram matrix over Q with small integer entries."""
    g = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            g[i][j] = g[j][i] = rng.randint(-2, 2)
    return space(QQ, g)


def seeded(seed):
    return random.Random(seed)


# criterion number -> (passed, detail); printed again in the pytest summary
ACCEPTANCE = {}


def record(number, passed, detail=""):
    ACCEPTANCE[number] = (passed, detail)
    print(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}")
