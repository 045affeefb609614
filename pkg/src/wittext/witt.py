"""Classical Witt machinery.

Isotropic vectors, hyperbolic pairs, Witt decompositions, isometry testing
with explicit witnesses, and the classical extension theorem built from
reflections.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

from .errors import (
    BackendUnsupported,
    DimensionMismatch,
    NotExtendable,
    SingularSpace,
)
from .field import FieldSpec
from .maps import (
    Isometry,
    LinearMap,
    apply,
    as_isometry,
    compose,
    from_pairs,
    inverse,
    map_from_local,
    map_to_local,
)
from .matrix import Vector, combine_rows, determinant, solve_rows, vec_add, vec_scale, vec_sub
from .space import (
    MetricSpace,
    Subspace,
    complement,
    intersect,
    local_space,
    perp,
    radical,
    span,
)

#: lexicographic isotropy search is used up to this many candidate vectors
ENUMERATION_LIMIT = 10 ** 6
#: integer box search over Q gives up after this many vectors
Q_SEARCH_BUDGET = 20000

SpaceLike = Union[MetricSpace, Subspace]


def _as_subspace(x: SpaceLike) -> Subspace:
    return x.whole() if isinstance(x, MetricSpace) else x


# ---------------------------------------------------------------------------
# Orthogonal bases


def orthogonal_basis(s: SpaceLike) -> List[Tuple[Vector, object]]:
    """Pairs (u, q(u)) forming an orthogonal basis of s.

    Radical directions come last with norm zero.
    """
    s = _as_subspace(s)
    V, F = s.space, s.field
    vecs = list(s.rows)
    out = []
    while vecs:
        idx = next((i for i, v in enumerate(vecs) if V.q(v) != 0), None)
        if idx is None:
            pair = next(((i, j) for i in range(len(vecs)) for j in range(i + 1, len(vecs))
                         if V.b(vecs[i], vecs[j]) != 0), None)
            if pair is None:
                out.extend((v, F.zero) for v in vecs)
                break
            i, j = pair
            vecs[i] = vec_add(F, vecs[i], vecs[j])
            idx = i
        u = vecs.pop(idx)
        a = V.q(u)
        out.append((u, a))
        inv = F.inv(a)
        vecs = [vec_sub(F, v, vec_scale(F, F.mul(V.b(v, u), inv), u)) for v in vecs]
    return out


# ---------------------------------------------------------------------------
# Isotropic vectors


def _projective_coords(F: FieldSpec, d: int):
    """Coordinate vectors with leading entry 1, earliest leading position first."""
    for lead in range(d):
        for rest in itertools.product(range(F.p), repeat=d - lead - 1):
            yield (0,) * lead + (1,) + rest


def _quad(F: FieldSpec, g, c) -> object:
    d = len(c)
    s = sum(c[i] * g[i][j] * c[j] for i in range(d) if c[i] for j in range(d) if c[j])
    return s % F.p if F.p else s


def find_isotropic_vector(s: SpaceLike, seed: Optional[int] = None) -> Optional[Vector]:
    """A nonzero v in s with q(v) = 0, or None when s is anisotropic.

    Without a seed over a small finite field the answer is the first one in
    the projective enumeration (leading coordinate 1 at the earliest
    position, the rest lexicographic).  A seed shuffles the search.
    """
    s = _as_subspace(s)
    F = s.field
    if s.dim == 0:
        return None
    if not F.p:
        return _isotropic_rational(s)
    g = s.gram()
    d = s.dim
    if F.p ** d <= ENUMERATION_LIMIT:
        if seed is not None:
            rng = random.Random(seed)
            for _ in range(8 * F.p):
                c = tuple(rng.randrange(F.p) for _ in range(d))
                if any(c) and _quad(F, g, c) == 0:
                    return s.vector(c)
        for c in _projective_coords(F, d):
            if _quad(F, g, c) == 0:
                return s.vector(c)
        return None
    return _isotropic_diagonal(s, seed)


def _field_order(F: FieldSpec, seed: Optional[int]):
    """Field elements in a seed-dependent order (just 0, 1, 2, ... without a seed)."""
    if seed is not None:
        rng = random.Random(seed)
        seen = set()
        for _ in range(64):
            x = rng.randrange(F.p)
            if x not in seen:
                seen.add(x)
                yield x
    yield from range(F.p)


def _isotropic_diagonal(s: Subspace, seed: Optional[int]) -> Optional[Vector]:
    """Constructive isotropic search from a diagonal form (large finite fields)."""
    F = s.field
    basis = orthogonal_basis(s)
    for u, a in basis:
        if a == 0:
            return u
    if len(basis) == 1:
        return None
    (u1, a1), (u2, a2) = basis[0], basis[1]
    r = F.div(F.neg(a2), a1)
    if F.is_square(r):
        return vec_add(F, vec_scale(F, F.sqrt(r), u1), u2)
    if len(basis) == 2:
        return None
    # a1 x^2 + a2 y^2 = -a3 is always solvable over a finite field
    u3, a3 = basis[2]
    for x in _field_order(F, seed):
        t = F.div(F.sub(F.neg(a3), F.mul(a1, F.mul(x, x))), a2)
        if F.is_square(t):
            y = F.sqrt(t)
            v = vec_add(F, vec_add(F, vec_scale(F, x, u1), vec_scale(F, y, u2)), u3)
            return v
    raise AssertionError("ternary forms over finite fields are isotropic")


def _isotropic_rational(s: Subspace) -> Optional[Vector]:
    F = s.field
    basis = orthogonal_basis(s)
    for u, a in basis:
        if a == 0:
            return u
    if len(basis) == 1:
        return None
    signs = {a > 0 for _, a in basis}
    if len(signs) == 1:
        return None  # definite
    for (u1, a1), (u2, a2) in itertools.combinations(basis, 2):
        r = -a2 / a1
        if F.is_square(r):
            return vec_add(F, vec_scale(F, F.sqrt(r), u1), u2)
    if len(basis) == 2:
        return None
    g = s.gram()
    for c in _integer_box(s.dim):
        if _quad(F, g, c) == 0:
            return s.vector(c)
    raise BackendUnsupported("no isotropic vector found by the bounded search over Q")


def _integer_box(d: int):
    """Small nonzero integer vectors, by growing max-norm, within the budget."""
    count = 0
    for bound in itertools.count(1):
        for c in itertools.product(range(-bound, bound + 1), repeat=d):
            if max(map(abs, c)) != bound:
                continue
            yield c
            count += 1
            if count >= Q_SEARCH_BUDGET:
                return


def hyperbolic_partner(v: Sequence, s: Subspace) -> Vector:
    """w in s with b(v, w) = 1 and q(w) = 0, for isotropic v with v not in rad(s)."""
    V, F = s.space, s.field
    w0 = next((r for r in s.rows if V.b(v, r) != 0), None)
    if w0 is None:
        raise SingularSpace("isotropic vector lies in the radical")
    w0 = vec_scale(F, F.inv(V.b(v, w0)), w0)
    half = F.div(V.q(w0), F(2))
    return vec_sub(F, w0, vec_scale(F, half, v))


# ---------------------------------------------------------------------------
# Witt decompositions


@dataclass(frozen=True)
class WittDecomposition:
    plus: Subspace
    anis: Subspace
    minus: Subspace

    @property
    def index(self) -> int:
        return self.plus.dim

    def violations(self, whole: Optional[Subspace] = None) -> List[str]:
        """Names of the defining properties that fail (empty when valid)."""
        whole = whole or self.plus.space.whole()
        bad = []
        total = self.plus + self.anis + self.minus
        if total != whole or self.plus.dim + self.anis.dim + self.minus.dim != whole.dim:
            bad.append("direct sum")
        if not self.plus.is_totally_isotropic():
            bad.append("plus totally isotropic")
        if not self.minus.is_totally_isotropic():
            bad.append("minus totally isotropic")
        if self.plus.dim != self.minus.dim:
            bad.append("equal dimensions")
        if not (self.anis.is_orthogonal_to(self.plus) and self.anis.is_orthogonal_to(self.minus)):
            bad.append("anis orthogonal")
        if self.anis.field.p and find_isotropic_vector(self.anis) is not None:
            bad.append("anis anisotropic")
        return bad

    def is_valid(self, whole: Optional[Subspace] = None) -> bool:
        return not self.violations(whole)


def hyperbolic_pairs(s: SpaceLike, seed: Optional[int] = None):
    """Split s (nonsingular) into hyperbolic pairs plus an anisotropic rest.

    Returns (pairs, rest) with pairs a list of (v, w), b(v, w) = 1.
    """
    s = _as_subspace(s)
    if not s.is_nonsingular():
        raise SingularSpace("Witt decomposition needs a nonsingular space")
    pairs = []
    cur = s
    k = 0
    while cur.dim:
        v = find_isotropic_vector(cur, None if seed is None else seed + k)
        if v is None:
            break
        w = hyperbolic_partner(v, cur)
        pairs.append((v, w))
        cur = intersect(cur, perp(span(s.space, [v, w])))
        k += 1
    return pairs, cur


def witt_decompose(V: SpaceLike, seed: Optional[int] = None) -> WittDecomposition:
    """V = V+ (+) V^ (+) V- by repeatedly splitting off hyperbolic planes."""
    s = _as_subspace(V)
    pairs, rest = hyperbolic_pairs(s, seed)
    sp = s.space
    return WittDecomposition(span(sp, [v for v, _ in pairs]), rest,
                             span(sp, [w for _, w in pairs]))


# ---------------------------------------------------------------------------
# Isometry classification and witnesses


@dataclass(frozen=True)
class SquareClassInvariant:
    dim: int
    disc_is_square: bool


def square_class_invariant(V: SpaceLike) -> SquareClassInvariant:
    s = _as_subspace(V)
    F = s.field
    if not F.p:
        raise BackendUnsupported("square-class invariants classify forms only over GF(p)")
    d = determinant(F, s.gram())
    if d == 0:
        raise SingularSpace("discriminant of a singular form")
    return SquareClassInvariant(s.dim, F.is_square(d))


def _represent(y: Subspace, a, seed: Optional[int]) -> Optional[Vector]:
    """Some v in the nonsingular y with q(v) = a."""
    F = y.field
    basis = orthogonal_basis(y)
    if not basis:
        return None
    if len(basis) == 1 or not F.p:
        for u, c in basis:
            r = F.div(a, c)
            if F.is_square(r):
                return vec_scale(F, F.sqrt(r), u)
        if not F.p and len(basis) > 1:
            return _represent_rational(y, a)
        return None
    (u1, b1), (u2, b2) = basis[0], basis[1]
    for x in _field_order(F, seed):
        t = F.div(F.sub(a, F.mul(b1, F.mul(x, x))), b2)
        if F.is_square(t):
            return vec_add(F, vec_scale(F, x, u1), vec_scale(F, F.sqrt(t), u2))
    return None


def _represent_rational(y: Subspace, a) -> Optional[Vector]:
    F = y.field
    g = y.gram()
    for c in _integer_box(y.dim):
        qc = _quad(F, g, c)
        if qc != 0 and F.is_square(a / qc):
            return vec_scale(F, F.sqrt(a / qc), y.vector(c))
    return None


def _q_signature(norms) -> int:
    return sum(1 for a in norms if a > 0)


def _nonsingular_match(x: Subspace, y: Subspace, seed: Optional[int]) -> Optional[LinearMap]:
    """Isometry x -> y between nonsingular subspaces, or None if they differ.

    Over Q, raises BackendUnsupported when the invariants agree but the
    bounded search cannot build a witness.
    """
    F = x.field
    if x.dim != y.dim:
        return None
    if x.dim == 0:
        return LinearMap(x, y, ())
    if x.gram() == y.gram():
        return LinearMap(x, y, y.rows)
    xs = orthogonal_basis(x)
    if F.p:
        if square_class_invariant(x) != square_class_invariant(y):
            return None
    else:
        ys = orthogonal_basis(y)
        dx = determinant(F, x.gram())
        dy = determinant(F, y.gram())
        if not F.is_square(dx / dy) or _q_signature(a for _, a in xs) != _q_signature(a for _, a in ys):
            return None
    imgs = []
    cur = y
    for k, (u, a) in enumerate(xs):
        v = _represent(cur, a, None if seed is None else seed + k)
        if v is None:
            if F.p:
                raise AssertionError("Witt cancellation failed")
            raise BackendUnsupported("cannot build an isometry witness over Q")
        imgs.append(v)
        cur = intersect(cur, perp(span(y.space, [v])))
    m = from_pairs([u for u, _ in xs], imgs, x.space, y.space, cod=y)
    return m


def find_subspace_isometry(e: SpaceLike, e2: SpaceLike, seed: Optional[int] = None) -> Optional[Isometry]:
    """An isometry e -> e2 of the restricted forms (either may be singular), or None."""
    e, e2 = _as_subspace(e), _as_subspace(e2)
    if e.field != e2.field:
        raise DimensionMismatch("subspaces over different fields")
    if e.dim != e2.dim:
        return None
    r, r2 = radical(e), radical(e2)
    if r.dim != r2.dim:
        return None
    c, c2 = complement(r, e), complement(r2, e2)
    m = _nonsingular_match(c, c2, seed)
    if m is None:
        return None
    src = list(r.rows) + list(m.dom.rows)
    tgt = list(r2.rows) + list(m.images)
    out = from_pairs(src, tgt, e.space, e2.space, cod=e2)
    return as_isometry(out)


def subspace_isometric(e: SpaceLike, e2: SpaceLike) -> bool:
    return find_subspace_isometry(e, e2) is not None


def find_isometry(V: SpaceLike, V2: SpaceLike, seed: Optional[int] = None) -> Optional[Isometry]:
    """Isometry V -> V2 (whole spaces or subspaces), or None if not isometric."""
    return find_subspace_isometry(V, V2, seed)


def is_isometric(V: SpaceLike, V2: SpaceLike) -> bool:
    """Decide V ~ V2.  Over GF(p) this only compares dimension and discriminant."""
    s, s2 = _as_subspace(V), _as_subspace(V2)
    F = s.field
    if F.p and s.is_nonsingular() and s2.is_nonsingular():
        return s.dim == s2.dim and square_class_invariant(s) == square_class_invariant(s2)
    return find_subspace_isometry(s, s2) is not None


# ---------------------------------------------------------------------------
# The classical extension theorem


def reflect(V: MetricSpace, u: Sequence, v: Sequence) -> Vector:
    """Reflection of v in the hyperplane orthogonal to the anisotropic u."""
    F = V.field
    c = F.div(F.mul(F(2), V.b(v, u)), V.q(u))
    return vec_sub(F, v, vec_scale(F, c, u))


def random_isometry(V: MetricSpace, rng: Optional[random.Random] = None,
                    steps: Optional[int] = None) -> Isometry:
    """A product of reflections in random anisotropic vectors (finite fields).

    Reflections generate the orthogonal group, so every isometry of V can occur.
    """
    rng = rng or random.Random()
    F = V.field
    if not F.p:
        raise BackendUnsupported("random isometries are drawn over GF(p) only")
    rows = [V.unit(i) for i in range(V.n)]
    for _ in range(steps if steps is not None else 2 * V.n):
        while True:
            u = tuple(F(rng.randrange(F.p)) for _ in range(V.n))
            if V.q(u) != 0:
                break
        rows = [reflect(V, u, r) for r in rows]
    return Isometry(V.whole(), V.whole(), rows)


def _nonsingular_hull(phi: LinearMap) -> Tuple[List[Vector], List[Vector]]:
    """Extend phi (an isometry inside one nonsingular space) to a nonsingular domain.

    Returns matching source/target lists spanning a nonsingular E~ >= E.
    """
    V = phi.source
    e = phi.dom
    rad = radical(e)
    src = list(e.rows)
    tgt = list(phi.images)
    if rad.dim == 0:
        return src, tgt
    c = complement(rad, e)
    r_src = list(rad.rows)
    r_tgt = [apply(phi, r) for r in r_src]
    c_tgt = [apply(phi, r) for r in c.rows]
    s_src = _hyperbolic_completion(V, r_src, list(c.rows))
    s_tgt = _hyperbolic_completion(V, r_tgt, c_tgt)
    return src + s_src, tgt + s_tgt


def _hyperbolic_completion(V: MetricSpace, r: List[Vector], c: List[Vector]) -> List[Vector]:
    """s_j orthogonal to c, with b(r_i, s_j) = delta_ij and b(s_i, s_j) = 0."""
    F = V.field
    n = V.n
    # conditions on t: b(c_k, t) = 0, b(r_i, t) = delta_ij
    rows = [tuple(x for x in row) for row in V.pairing(list(c) + list(r), V.whole().rows)]
    ts = []
    for j in range(len(r)):
        rhs = [F.zero] * len(c) + [F.one if i == j else F.zero for i in range(len(r))]
        ts.append(solve_rows(F, rows, n, rhs))
    half = F.inv(F(2))
    out = []
    for j, t in enumerate(ts):
        s = t
        for k in range(len(r)):
            ckj = F.neg(F.mul(V.b(ts[k], t), half))
            s = vec_add(F, s, vec_scale(F, ckj, r[k]))
        out.append(s)
    return out


def _extend_same_space(phi: LinearMap) -> Isometry:
    V = phi.source
    F = V.field
    src, tgt = _nonsingular_hull(phi)
    hull = from_pairs(src, tgt, V, V)
    diag = orthogonal_basis(hull.dom)
    sigma = [list(r) for r in V.whole().rows]  # sigma[i] = image of e_i
    for u, _ in diag:
        x = combine_rows(F, u, sigma, V.n)
        y = apply(hull, u)
        if x == y:
            continue
        d = vec_sub(F, x, y)
        if V.q(d) != 0:
            sigma = [reflect(V, d, row) for row in sigma]
        else:
            s = vec_add(F, x, y)
            sigma = [reflect(V, y, reflect(V, s, row)) for row in sigma]
    return Isometry(V.whole(), V.whole(), tuple(tuple(r) for r in sigma))


def witt_extend(phi: LinearMap, witness: Optional[LinearMap] = None) -> Isometry:
    """Extend an isometry E -> E' between subspaces of nonsingular spaces to V -> V'.

    ``witness`` is an optional isometry V -> V' used to transport the problem
    into one space; otherwise one is computed (NotExtendable if V, V' differ).
    """
    V, V2 = phi.source, phi.target
    if not V.nonsingular or not V2.nonsingular:
        raise SingularSpace("witt_extend needs nonsingular ambient spaces")
    if not isinstance(phi, Isometry):
        phi = as_isometry(phi)
    if V == V2 and witness is None:
        out = _extend_same_space(phi)
    else:
        omega = witness if witness is not None else find_isometry(V, V2)
        if omega is None:
            raise NotExtendable("the ambient spaces are not isometric")
        omega = as_isometry(omega)
        back = inverse(omega)
        psi = compose(back, phi)
        sigma = _extend_same_space(psi)
        out = compose(omega, sigma)
    result = Isometry(V.whole(), V2.whole(), out.images)
    for r, img in zip(phi.dom.rows, phi.images):
        assert apply(result, r) == img, "extension does not restrict to phi"
    return result


def witt_extend_within(phi: LinearMap, x: Subspace, x2: Subspace,
                       witness: Optional[LinearMap] = None) -> Isometry:
    """Extend phi (dom inside x, image inside x2) to an isometry x -> x2.

    x and x2 must be nonsingular subspaces; the witness, if given, is an
    isometry x -> x2.
    """
    lx, lx2 = local_space(x), local_space(x2)
    loc = map_to_local(phi, x, x2, lx, lx2)
    w = map_to_local(witness, x, x2, lx, lx2) if witness is not None else None
    ext = witt_extend(loc, w)
    out = map_from_local(ext, x, x2)
    return as_isometry(out)
