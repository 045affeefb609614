"""Linear maps and verified isometries between subspaces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .errors import (
    DimensionMismatch,
    DisagreeOnIntersection,
    NotAnIsometry,
    NotOrthogonal,
    OutOfDomain,
    Overlap,
)
from .matrix import Rows, Vector, combine_rows, express, row_reduce
from .space import (
    MetricSpace,
    Subspace,
    from_local,
    intersect,
    local_space,
    span,
    subspace_sum,
)


@dataclass(frozen=True)
class LinearMap:
    """Map sending ``dom.rows[i]`` to ``images[i]`` (a vector of the codomain ambient)."""

    dom: Subspace
    cod: Subspace
    images: Rows

    def __post_init__(self):
        images = tuple(tuple(v) for v in self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.dom.dim:
            raise DimensionMismatch(f"{len(images)} images for a {self.dom.dim}-dim domain")
        for v in images:
            if not self.cod.contains(v):
                raise OutOfDomain("image vector outside the codomain")

    @property
    def source(self) -> MetricSpace:
        return self.dom.space

    @property
    def target(self) -> MetricSpace:
        return self.cod.space

    def __call__(self, v: Sequence) -> Vector:
        return apply(self, v)

    def is_bijective(self) -> bool:
        F = self.target.field
        return (self.dom.dim == self.cod.dim
                and len(row_reduce(F, self.images, self.target.n)[1]) == self.dom.dim)

    def matrix(self) -> Rows:
        """Row i is the image of the i-th unit vector (whole-space maps only)."""
        if self.dom.dim != self.source.n:
            raise DimensionMismatch("matrix() needs a map defined on the whole space")
        return self.images


class Isometry(LinearMap):
    """A LinearMap whose form preservation and bijectivity are checked on creation."""

    def __post_init__(self):
        super().__post_init__()
        if not _preserves_form(self):
            raise NotAnIsometry("map does not preserve the bilinear form")
        if not self.is_bijective():
            raise NotAnIsometry("map is not a bijection onto its codomain")


def _preserves_form(phi: LinearMap) -> bool:
    return phi.dom.gram() == phi.target.gram_of(phi.images)


def is_isometry(phi: LinearMap) -> bool:
    return phi.is_bijective() and _preserves_form(phi)


def as_isometry(phi: LinearMap) -> Isometry:
    return Isometry(phi.dom, phi.cod, phi.images)


def apply(phi: LinearMap, v: Sequence) -> Vector:
    c = phi.dom.coords(v)
    return combine_rows(phi.target.field, c, phi.images, phi.target.n)


def image_of(phi: LinearMap, s: Subspace) -> Subspace:
    if not s.issubset(phi.dom):
        raise OutOfDomain("subspace is not inside the domain")
    return span(phi.target, [apply(phi, r) for r in s.rows])


def _wrap(like: LinearMap, dom, cod, images) -> LinearMap:
    cls = Isometry if isinstance(like, Isometry) else LinearMap
    return cls(dom, cod, images)


def restrict(phi: LinearMap, s: Subspace) -> LinearMap:
    images = tuple(apply(phi, r) for r in s.rows)
    return _wrap(phi, s, span(phi.target, images), images)


def from_pairs(sources: Sequence[Sequence], targets: Sequence[Sequence],
               source_space: MetricSpace, target_space: MetricSpace,
               cod: Optional[Subspace] = None) -> LinearMap:
    """The linear map on span(sources) with sources[i] -> targets[i].

    Dependent sources are allowed provided the assignment is consistent;
    otherwise DisagreeOnIntersection.
    """
    F = source_space.field
    n = source_space.n
    if len(sources) != len(targets):
        raise DimensionMismatch("sources and targets differ in length")
    basis_idx, cur = [], []
    for i, s in enumerate(sources):
        trial = row_reduce(F, cur + [tuple(s)], n)[0]
        if len(trial) > len(cur):
            cur = list(trial)
            basis_idx.append(i)
    bsrc = [tuple(sources[i]) for i in basis_idx]
    btgt = [tuple(targets[i]) for i in basis_idx]
    m = target_space.n
    for s, t in zip(sources, targets):
        c = express(F, bsrc, s)
        if combine_rows(F, c, btgt, m) != tuple(t):
            raise DisagreeOnIntersection("inconsistent assignment of images")
    dom = span(source_space, bsrc)
    images = tuple(combine_rows(F, express(F, bsrc, r), btgt, m) for r in dom.rows)
    if cod is None:
        cod = span(target_space, images)
    return LinearMap(dom, cod, images)


def identity(s: Subspace) -> Isometry:
    return Isometry(s, s, s.rows)


def compose(psi: LinearMap, phi: LinearMap) -> LinearMap:
    """psi after phi."""
    images = tuple(apply(psi, v) for v in phi.images)
    cod = image_of(psi, phi.cod)
    out = LinearMap(phi.dom, cod, images)
    if isinstance(psi, Isometry) and isinstance(phi, Isometry):
        return as_isometry(out)
    return out


def inverse(phi: LinearMap) -> LinearMap:
    if not phi.is_bijective():
        raise DimensionMismatch("only bijections can be inverted")
    return _wrap(phi, phi.cod, phi.dom, tuple(
        combine_rows(phi.source.field, express(phi.target.field, phi.images, r),
                     phi.dom.rows, phi.source.n) for r in phi.cod.rows))


def combine(mu: LinearMap, psi: LinearMap) -> LinearMap:
    """The unique linear map on dom(mu) + dom(psi) extending both."""
    common = intersect(mu.dom, psi.dom)
    for r in common.rows:
        if apply(mu, r) != apply(psi, r):
            raise DisagreeOnIntersection("maps disagree on the common domain")
    extra = [r for r in psi.dom.rows]
    m = from_pairs(list(mu.dom.rows) + extra,
                   list(mu.images) + [apply(psi, r) for r in extra],
                   mu.source, mu.target)
    return LinearMap(m.dom, subspace_sum(mu.cod, psi.cod), m.images)


def orthogonal_sum(mu: LinearMap, psi: LinearMap) -> LinearMap:
    """mu (.) psi: combination over orthogonal, independent domains and codomains."""
    if not mu.dom.is_orthogonal_to(psi.dom) or not mu.cod.is_orthogonal_to(psi.cod):
        raise NotOrthogonal("orthogonal sum needs orthogonal summands")
    if intersect(mu.dom, psi.dom).dim or intersect(mu.cod, psi.cod).dim:
        raise Overlap("orthogonal sum needs independent summands")
    out = combine(mu, psi)
    if isinstance(mu, Isometry) and isinstance(psi, Isometry):
        return as_isometry(out)
    return out


def equal_on(phi: LinearMap, psi: LinearMap, s: Subspace) -> bool:
    return all(apply(phi, r) == apply(psi, r) for r in s.rows)


def extends(big: LinearMap, small: LinearMap) -> bool:
    return small.dom.issubset(big.dom) and equal_on(big, small, small.dom)


def whole_map(source: MetricSpace, target: MetricSpace, matrix_rows: Sequence[Sequence]) -> LinearMap:
    """Whole-space map with row i the image of the i-th unit vector."""
    rows = tuple(tuple(r) for r in matrix_rows)
    cls = LinearMap
    m = LinearMap(source.whole(), target.whole(), rows)
    if is_isometry(m):
        cls = Isometry
    return cls(m.dom, m.cod, m.images)


# ---------------------------------------------------------------------------
# Transport between a subspace and its local coordinate space


def map_to_local(phi: LinearMap, x: Subspace, x2: Subspace,
                 lx: Optional[MetricSpace] = None, lx2: Optional[MetricSpace] = None) -> LinearMap:
    """phi (with dom inside x, image inside x2) in the coordinates of x and x2."""
    lx = lx or local_space(x)
    lx2 = lx2 or local_space(x2)
    src = [x.coords(r) for r in phi.dom.rows]
    tgt = [x2.coords(v) for v in phi.images]
    m = from_pairs(src, tgt, lx, lx2)
    return _wrap(phi, m.dom, m.cod, m.images)


def map_from_local(phi: LinearMap, x: Subspace, x2: Subspace) -> LinearMap:
    src = [x.vector(r) for r in phi.dom.rows]
    tgt = [x2.vector(v) for v in phi.images]
    m = from_pairs(src, tgt, x.space, x2.space)
    cod = from_local(x2, phi.cod)
    return _wrap(phi, m.dom, cod, m.images)
