"""Five isometries that still do not extend.

In the hyperbolic space H6 over GF(3) (basis e1 e2 e3 e~1 e~2 e~3) the identity
on E = span(e1, e2 + e3) is compared against A = span(e1, e2, e~2) and
A' = span(e1, e~1, e~2 - e~3).  E, A and the pieces of E cut out by A and its
perp all match up isometrically, but E cap A^perp cap A does not.

    python demos/second_counterexample_h6.py
"""

from wittext import check_conditions, extend_preserving_subspace, gf, identity, intersect, perp, span
from wittext.oracle import find_extension
from wittext.space import MetricSpace, radical, subspace_sum
from wittext.witt import subspace_isometric

F = gf(3)
gram = [[0] * 6 for _ in range(6)]
for i in range(3):
    gram[i][i + 3] = gram[i + 3][i] = 1
V = MetricSpace(F, tuple(map(tuple, gram)), "H6")


def vec(*xs):
    return list(xs)


E = span(V, [vec(1, 0, 0, 0, 0, 0), vec(0, 1, 1, 0, 0, 0)])
A = span(V, [vec(1, 0, 0, 0, 0, 0), vec(0, 1, 0, 0, 0, 0), vec(0, 0, 0, 0, 1, 0)])
A2 = span(V, [vec(1, 0, 0, 0, 0, 0), vec(0, 0, 0, 1, 0, 0), vec(0, 0, 0, 0, 1, -1)])
ap, ap2 = perp(A), perp(A2)

pieces = {
    "E": (E, E),
    "A": (A, A2),
    "E cap (A + A^perp)": (intersect(E, subspace_sum(A, ap)), intersect(E, subspace_sum(A2, ap2))),
    "E cap A": (intersect(E, A), intersect(E, A2)),
    "E cap A^perp": (intersect(E, ap), intersect(E, ap2)),
    "E cap A^perp cap A": (intersect(E, radical(A)), intersect(E, radical(A2))),
}
for name, (x, y) in pieces.items():
    print(f"{name:20s} dims {x.dim} / {y.dim}  isometric: {subspace_isometric(x, y)}")

phi = identity(E)
print("conditions:", check_conditions(phi, A, A2))
print("constructive answer:", extend_preserving_subspace(phi, A, A2))
print("exhaustive search finds an extension:", find_extension(phi, [(A, A2)]) is not None)
