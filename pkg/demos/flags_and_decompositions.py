"""Flags, lattices and Witt decompositions on small spaces over GF(3).

    python demos/flags_and_decompositions.py
"""

import random

from wittext import gf, identity, perp, restrict, span
from wittext.decomp import extend_witt_decomposition, refine_flag
from wittext.flags import Flag, flag_lattice, flags_isometric, is_self_dual
from wittext.maps import image_of
from wittext.space import MetricSpace
from wittext.witt import random_isometry, witt_decompose

F = gf(3)


def hyperbolic(m):
    n = 2 * m
    g = [[0] * n for _ in range(n)]
    for i in range(m):
        g[i][i + m] = g[i + m][i] = 1
    return MetricSpace(F, tuple(map(tuple, g)), f"H{n}")


# %% a flag whose members all match, but whose lattice does not
H4 = hyperbolic(2)
A = span(H4, [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
f = Flag.of(H4, [span(H4, [[1, 0, 0, 0]]), A])  # e1 is the radical of A
g = Flag.of(H4, [span(H4, [[0, 1, 0, 0]]), A])  # e2 is not
for name, fl in (("f", f), ("g", g)):
    print(name, "lattice dims:", flag_lattice(fl).dims)
print("flags_isometric(f, g):", flags_isometric(f, g))

# %% moving a flag by a random isometry and recovering a witness
rng = random.Random(1)
h = random_isometry(H4, rng)
moved = Flag(H4, tuple(image_of(h, m) for m in f))
w = flags_isometric(f, moved)
print("recovered witness carries f onto its image:",
      all(image_of(w, x) == y for x, y in zip(f, moved)))

# %% a Witt decomposition of H6 and a self-dual flag through V+
H6 = hyperbolic(3)
W = witt_decompose(H6)
e1 = span(H6, [W.plus.rows[-1]])
flag = Flag.of(H6, [e1, perp(e1)])
print("self-dual:", is_self_dual(flag))
print("refined dims:", refine_flag(flag, W.plus).dims())

phi = restrict(identity(H6.whole()), span(H6, [W.plus.rows[0]]))
out = extend_witt_decomposition(phi, W, W, flag, flag)
print("extension respects V+, V-, and the flag:",
      image_of(out, W.plus) == W.plus and image_of(out, W.minus) == W.minus
      and all(image_of(out, m) == m for m in flag))
