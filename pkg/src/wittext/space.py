"""Metric spaces, canonical subspaces and the subspace lattice calculus.

A :class:`Subspace` is stored as the nonzero rows of its reduced row-echelon
basis, so two subspaces are equal exactly when their stored rows are.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

from .errors import AmbientMismatch, DimensionMismatch, NotWellDefined, OutOfDomain
from .field import FieldSpec
from .matrix import (
    Matrix,
    Rows,
    Vector,
    combine_rows,
    express,
    identity_rows,
    kernel_rows,
    matmul,
    row_reduce,
    transpose,
)


@dataclass(frozen=True)
class MetricSpace:
    """F^n with a symmetric bilinear form given by its Gram matrix."""

    field: FieldSpec
    gram: Rows
    name: str = dc_field(default="", compare=False)

    def __post_init__(self):
        F = self.field
        gram = tuple(tuple(F(x) for x in r) for r in self.gram)
        n = len(gram)
        if any(len(r) != n for r in gram):
            raise DimensionMismatch("Gram matrix must be square")
        if any(gram[i][j] != gram[j][i] for i in range(n) for j in range(i)):
            raise DimensionMismatch("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", gram)

    @classmethod
    def from_gram(cls, field: FieldSpec, gram, name: str = "") -> "MetricSpace":
        return cls(field, tuple(tuple(r) for r in gram), name)

    @property
    def n(self) -> int:
        return len(self.gram)

    @property
    def gram_matrix(self) -> Matrix:
        return Matrix(self.field, self.gram, self.n)

    @property
    def nonsingular(self) -> bool:
        return len(row_reduce(self.field, self.gram, self.n)[1]) == self.n

    def b(self, u: Sequence, v: Sequence):
        F = self.field
        g = self.gram
        s = sum(u[i] * g[i][j] * v[j] for i in range(self.n) if u[i] for j in range(self.n) if v[j])
        return s % F.p if F.p else F.zero + s

    def q(self, v: Sequence):
        return self.b(v, v)

    def gram_of(self, rows: Sequence[Sequence]) -> Rows:
        """Gram matrix of the given vectors."""
        g = matmul(self.field, rows, self.gram, self.n)
        return matmul(self.field, g, transpose(rows, self.n), len(rows))

    def pairing(self, rows: Sequence[Sequence], cols: Sequence[Sequence]) -> Rows:
        """Matrix of b(rows[i], cols[j])."""
        g = matmul(self.field, rows, self.gram, self.n)
        return matmul(self.field, g, transpose(cols, self.n), len(cols))

    def whole(self) -> "Subspace":
        return Subspace(self, identity_rows(self.field, self.n))

    def zero(self) -> "Subspace":
        return Subspace(self, ())

    def span(self, vectors: Iterable[Sequence]) -> "Subspace":
        return span(self, vectors)

    def unit(self, i: int) -> Vector:
        F = self.field
        return tuple(F.one if j == i else F.zero for j in range(self.n))

    def __str__(self):
        return self.name or f"MetricSpace({self.field}, n={self.n})"


@dataclass(frozen=True)
class Subspace:
    """Row space of ``rows`` (nonzero RREF rows) inside ``space``."""

    space: MetricSpace
    rows: Rows
    pivots: Tuple[int, ...] = dc_field(default=(), compare=False, repr=False)

    def __post_init__(self):
        if not self.pivots and self.rows:
            object.__setattr__(self, "pivots", tuple(
                next(j for j, x in enumerate(r) if x != 0) for r in self.rows))

    @property
    def field(self) -> FieldSpec:
        return self.space.field

    @property
    def dim(self) -> int:
        return len(self.rows)

    @property
    def n(self) -> int:
        return self.space.n

    def coords(self, v: Sequence) -> Vector:
        """Coordinates of v in the stored basis; OutOfDomain if v is not in here."""
        c = tuple(v[p] for p in self.pivots)
        if combine_rows(self.field, c, self.rows, self.n) != tuple(v):
            raise OutOfDomain("vector does not lie in the subspace")
        return c

    def vector(self, coords: Sequence) -> Vector:
        return combine_rows(self.field, coords, self.rows, self.n)

    def contains(self, v: Sequence) -> bool:
        c = tuple(v[p] for p in self.pivots)
        return combine_rows(self.field, c, self.rows, self.n) == tuple(v)

    def __contains__(self, v) -> bool:
        return self.contains(v)

    def issubset(self, other: "Subspace") -> bool:
        _same_ambient(self, other)
        return all(other.contains(r) for r in self.rows)

    def __le__(self, other: "Subspace") -> bool:
        return self.issubset(other)

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect(self, other)

    def perp(self) -> "Subspace":
        return perp(self)

    def gram(self) -> Rows:
        return self.space.gram_of(self.rows)

    def is_totally_isotropic(self) -> bool:
        return all(x == 0 for r in self.gram() for x in r)

    def is_nonsingular(self) -> bool:
        return len(row_reduce(self.field, self.gram(), self.dim)[1]) == self.dim

    def is_orthogonal_to(self, other: "Subspace") -> bool:
        if not self.rows or not other.rows:
            return True
        return all(x == 0 for r in self.space.pairing(self.rows, other.rows) for x in r)

    def vectors(self) -> Iterator[Vector]:
        """All vectors of the subspace, lexicographic in coordinates (finite fields)."""
        for c in itertools.product(self.field.elements(), repeat=self.dim):
            yield self.vector(c)

    def __repr__(self):
        fmt = self.field.format
        body = "; ".join(" ".join(fmt(x) for x in r) for r in self.rows)
        return f"Subspace(dim={self.dim}, [{body}])"


def _same_ambient(a: Subspace, b: Subspace):
    if a.space != b.space:
        raise AmbientMismatch("subspaces live in different ambient spaces")


def span(space: MetricSpace, vectors: Iterable[Sequence]) -> Subspace:
    F = space.field
    vecs = [tuple(F(x) for x in v) for v in vectors]
    if any(len(v) != space.n for v in vecs):
        raise DimensionMismatch(f"vectors must have length {space.n}")
    return _span_raw(space, vecs)


def _span_raw(space: MetricSpace, vecs: Sequence[Sequence]) -> Subspace:
    """span() for vectors already holding raw values of the right length."""
    rows, pivots = row_reduce(space.field, vecs, space.n)
    return Subspace(space, rows, tuple(pivots))


def subspace_sum(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    if not b.rows:
        return a
    if not a.rows:
        return b
    return _span_raw(a.space, a.rows + b.rows)


def sum_all(space: MetricSpace, subspaces: Iterable[Subspace]) -> Subspace:
    rows: List = []
    for s in subspaces:
        _same_ambient(s, space.zero())
        rows.extend(s.rows)
    return _span_raw(space, rows)


def intersect(a: Subspace, b: Subspace) -> Subspace:
    _same_ambient(a, b)
    if not a.rows or not b.rows:
        return a.space.zero()
    F = a.field
    # x A + y B = 0  <=>  (x, y) in the left kernel of [A; B]
    stacked = a.rows + b.rows
    ker = kernel_rows(F, transpose(stacked, a.n), len(stacked))
    vecs = [combine_rows(F, k[:a.dim], a.rows, a.n) for k in ker]
    return _span_raw(a.space, vecs)


def perp(a: Subspace) -> Subspace:
    space = a.space
    if not a.rows:
        return space.whole()
    m = matmul(space.field, a.rows, space.gram, space.n)
    rows = kernel_rows(space.field, m, space.n)
    return Subspace(space, rows)


def radical(a: Subspace) -> Subspace:
    return intersect(a, perp(a))


def restrict_form(a: Subspace) -> Matrix:
    return Matrix(a.field, a.gram(), a.dim)


def extend_basis(vectors: Sequence[Sequence], sup: Subspace) -> List[Vector]:
    """Rows of ``sup`` (in pivot order) that extend independent ``vectors`` to a basis.

    Raises OutOfDomain if the vectors do not lie in ``sup``.
    """
    F = sup.field
    for v in vectors:
        if not sup.contains(v):
            raise OutOfDomain("basis vector outside the enclosing subspace")
    cur, _ = row_reduce(F, list(vectors), sup.n)
    added = []
    for r in sup.rows:
        if len(cur) == sup.dim:
            break
        trial, _ = row_reduce(F, list(cur) + [r], sup.n)
        if len(trial) > len(cur):
            cur = trial
            added.append(r)
    return added


def complement(sub: Subspace, sup: Subspace) -> Subspace:
    """Deterministic complement of ``sub`` inside ``sup``."""
    _same_ambient(sub, sup)
    return Subspace(sup.space, tuple(extend_basis(sub.rows, sup)))


def basis_complement(vectors: Sequence[Sequence], sup: Subspace) -> List[Vector]:
    """``vectors`` followed by rows of ``sup`` completing them to a basis."""
    return list(vectors) + extend_basis(vectors, sup)


def independent(F: FieldSpec, vectors: Sequence[Sequence], n: int) -> bool:
    return len(row_reduce(F, list(vectors), n)[1]) == len(vectors)


def split(v: Sequence, parts: Sequence[Subspace]) -> List[Vector]:
    """Components of v along a direct sum of ``parts`` (one solve)."""
    space = parts[0].space
    F = space.field
    rows = [r for p in parts for r in p.rows]
    c = express(F, rows, v)
    out, k = [], 0
    for p in parts:
        out.append(combine_rows(F, c[k:k + p.dim], p.rows, space.n))
        k += p.dim
    return out


# ---------------------------------------------------------------------------
# Local coordinates: a subspace X viewed as a metric space of its own


def local_space(x: Subspace) -> MetricSpace:
    return MetricSpace(x.field, x.gram(), name=f"local({x.space.name})")


def to_local(x: Subspace, s: Subspace, local: Optional[MetricSpace] = None) -> Subspace:
    local = local or local_space(x)
    return span(local, [x.coords(r) for r in s.rows])


def from_local(x: Subspace, s: Subspace) -> Subspace:
    return span(x.space, [x.vector(r) for r in s.rows])


# ---------------------------------------------------------------------------
# Quotients by a subspace of the radical


@dataclass(frozen=True)
class QuotientSpace:
    """N / D with the induced form, represented on a complement of D in N."""

    numerator: Subspace
    denominator: Subspace
    reps: Subspace

    @property
    def dim(self) -> int:
        return self.reps.dim

    @property
    def gram(self) -> Rows:
        return self.reps.gram()

    def class_coords(self, v: Sequence) -> Vector:
        """Coordinates of v + D with respect to the representatives."""
        F = self.reps.field
        rows = self.reps.rows + self.denominator.rows
        try:
            c = express(F, rows, v)
        except Exception as exc:  # NoSolution
            raise OutOfDomain("vector is not in the numerator") from exc
        return c[:self.reps.dim]

    def representative(self, coords: Sequence) -> Vector:
        return self.reps.vector(coords)


def quotient_metric(num: Subspace, den: Subspace) -> QuotientSpace:
    _same_ambient(num, den)
    if not den.issubset(num):
        raise NotWellDefined("denominator is not contained in the numerator")
    if not den.is_orthogonal_to(num):
        raise NotWellDefined("denominator is not orthogonal to the numerator")
    return QuotientSpace(num, den, complement(den, num))
