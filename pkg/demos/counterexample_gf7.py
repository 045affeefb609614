"""Isometric lattices are not enough.

Over GF(7) with the form x^2 + y^2, take A = span(1, 0), E = span(1, 2) and
E' = span(1, 3).  Every subspace built from E and A with +, cap and perp is
isometric to its counterpart built from E' and A, yet no isometry of V fixes
A and carries E onto E'.

    python demos/counterexample_gf7.py
"""

from wittext import check_conditions, extend_preserving_subspace, from_pairs, gf, span
from wittext.maps import image_of, is_isometry
from wittext.oracle import closure_isometry_table, enumerate_isometries, expression_closure
from wittext.space import MetricSpace

F = gf(7)
V = MetricSpace(F, ((1, 0), (0, 1)), "V")
A = span(V, [[1, 0]])
E, E2 = span(V, [[1, 2]]), span(V, [[1, 3]])

# %% the lattice generated by E and A, side by side with E' and A
cl = expression_closure(E, A, E2, A)
for row in closure_isometry_table(cl):
    print(f"{row.expression:28s} dim {row.member.dim}  isometric: {row.isometric}")

# %% the whole orthogonal group has 16 elements; none of them does the job
group = list(enumerate_isometries(V, V))
hits = [g for g in group if image_of(g, A) == A and image_of(g, E) == E2]
print(f"|O(V)| = {len(group)}, isometries with A -> A and E -> E': {len(hits)}")

# %% the obstruction, named.  q(1, 2) = 5 and q(c, 3c) = 10 c^2 = 5 for c = 2, 5
for c in (2, 5):
    phi = from_pairs([[1, 2]], [[c, 3 * c % 7]], V, V)
    assert is_isometry(phi)
    rep = check_conditions(phi, A, A)
    res = extend_preserving_subspace(phi, A, A)
    print(f"phi: (1,2) -> ({c},{3 * c % 7})  first failure: {rep.first_failure()}  result: {res}")
