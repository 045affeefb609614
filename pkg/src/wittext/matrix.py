"""Dense exact matrices and the echelon-form toolkit.

Vectors are tuples of raw field values (see :mod:`wittext.field`), matrices
are tuples of such rows.  Pivoting always takes the first nonzero entry
scanning top to bottom, so every result is reproducible.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Sequence, Tuple

from .errors import DimensionMismatch, NoSolution
from .field import FieldSpec

Vector = Tuple
Rows = Tuple[Tuple, ...]

_ZERO = Fraction(0)


@dataclass(frozen=True)
class Matrix:
    field: FieldSpec
    rows: Rows
    ncols: int

    def __post_init__(self):
        rows = tuple(tuple(self.field(x) for x in r) for r in self.rows)
        if any(len(r) != self.ncols for r in rows):
            raise DimensionMismatch("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def of(cls, field: FieldSpec, rows, ncols=None) -> "Matrix":
        rows = [tuple(r) for r in rows]
        if ncols is None:
            if not rows:
                raise DimensionMismatch("need ncols for an empty matrix")
            ncols = len(rows[0])
        return cls(field, tuple(rows), ncols)

    @classmethod
    def identity(cls, field: FieldSpec, n: int) -> "Matrix":
        return cls(field, identity_rows(field, n), n)

    @classmethod
    def zeros(cls, field: FieldSpec, m: int, n: int) -> "Matrix":
        return cls(field, tuple((field.zero,) * n for _ in range(m)), n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> "Matrix":
        return Matrix(self.field, transpose(self.rows, self.ncols), self.nrows)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise DimensionMismatch(f"{self.shape} @ {other.shape}")
        return Matrix(self.field, matmul(self.field, self.rows, other.rows, other.ncols), other.ncols)

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise DimensionMismatch(f"{self.shape} + {other.shape}")
        add = self.field.add
        return Matrix(self.field, tuple(tuple(add(a, b) for a, b in zip(r, s))
                                        for r, s in zip(self.rows, other.rows)), self.ncols)

    def rank(self) -> int:
        return len(row_reduce(self.field, self.rows, self.ncols)[1])

    def is_symmetric(self) -> bool:
        return self.nrows == self.ncols and all(
            self.rows[i][j] == self.rows[j][i] for i in range(self.nrows) for j in range(i))

    def det(self):
        if self.nrows != self.ncols:
            raise DimensionMismatch("determinant of a non-square matrix")
        return determinant(self.field, self.rows)

    def tolist(self):
        return [list(r) for r in self.rows]


# ---------------------------------------------------------------------------
# Row-level kernels.  All take raw rows and return raw tuples.


def identity_rows(F: FieldSpec, n: int) -> Rows:
    return tuple(tuple(F.one if i == j else F.zero for j in range(n)) for i in range(n))


def transpose(rows: Sequence[Sequence], ncols: int) -> Rows:
    return tuple(tuple(r[j] for r in rows) for j in range(ncols))


def dot(F: FieldSpec, u: Sequence, v: Sequence):
    if F.p:
        return sum(a * b for a, b in zip(u, v)) % F.p
    return sum((a * b for a, b in zip(u, v) if a and b), _ZERO)


def matmul(F: FieldSpec, a: Sequence[Sequence], b: Sequence[Sequence], bcols: int) -> Rows:
    bt = transpose(b, bcols)
    if not F.p:
        return _matmul_rational(a, bt)
    return tuple(tuple(dot(F, r, c) for c in bt) for r in a)


def _integral(v) -> Tuple[List[int], int]:
    """Integer numerators over a common denominator (ints and Fractions alike)."""
    den = math.lcm(*(x.denominator for x in v)) if v else 1
    if den == 1:
        return [x.numerator for x in v], 1
    return [x.numerator * (den // x.denominator) for x in v], den


def _matmul_rational(a, bt) -> Rows:
    """Products over Q on integer numerators, one Fraction per entry."""
    cols = [_integral(c) for c in bt]
    out = []
    for r in a:
        ri, rd = _integral(r)
        out.append(tuple(Fraction(sum(x * y for x, y in zip(ri, ci) if x and y), rd * cd)
                         for ci, cd in cols))
    return tuple(out)


def vec_add(F: FieldSpec, u, v) -> Vector:
    if F.p:
        p = F.p
        return tuple((a + b) % p for a, b in zip(u, v))
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(F: FieldSpec, u, v) -> Vector:
    if F.p:
        p = F.p
        return tuple((a - b) % p for a, b in zip(u, v))
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(F: FieldSpec, c, v) -> Vector:
    if F.p:
        p = F.p
        return tuple(c * a % p for a in v)
    return tuple(c * a for a in v)


def combine_rows(F: FieldSpec, coeffs: Sequence, rows: Sequence[Sequence], n: int) -> Vector:
    """Linear combination sum(coeffs[i] * rows[i]) of length-n vectors."""
    if not F.p:
        return _combine_rational(coeffs, rows, n)
    acc = [0] * n
    for c, r in zip(coeffs, rows):
        if c:
            for j, x in enumerate(r):
                acc[j] += c * x
    return tuple(a % F.p for a in acc)


def _combine_rational(coeffs, rows, n) -> Vector:
    terms = [(c, r) for c, r in zip(coeffs, rows) if c]
    if not terms:
        return (_ZERO,) * n
    cs, cd = _integral([c for c, _ in terms])
    acc = [0] * n
    parts = [_integral(r) for _, r in terms]
    den = math.lcm(*(d for _, d in parts))
    for c, (ri, rd) in zip(cs, parts):
        k = c * (den // rd)
        for j, x in enumerate(ri):
            if x:
                acc[j] += k * x
    d = cd * den
    return tuple(Fraction(a, d) if a else _ZERO for a in acc)


def _rref_rational(rows: Sequence[Sequence], ncols: int):
    """Fraction-free elimination over Q: integer rows, Fractions only at the end."""
    m = []
    for r in rows:
        den = math.lcm(*(x.denominator for x in r))
        m.append([x.numerator * (den // x.denominator) for x in r])
    nr = len(m)
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        row, pv = m[r], m[r][c]
        for i in range(nr):
            f = m[i][c]
            if i != r and f:
                new = [x * pv - f * y for x, y in zip(m[i], row)]
                g = math.gcd(*new)
                m[i] = [x // g for x in new] if g > 1 else new
        pivots.append(c)
        r += 1
    out = []
    for i, row in enumerate(m):
        if i < len(pivots):
            pv = row[pivots[i]]
            out.append(tuple(Fraction(x, pv) if x else _ZERO for x in row))
        else:
            out.append((_ZERO,) * ncols)
    return tuple(out), pivots, None


@functools.lru_cache(maxsize=None)
def _inverses(p: int) -> Tuple[int, ...]:
    return (0,) + tuple(pow(x, p - 2, p) for x in range(1, p))


def _rref(F: FieldSpec, rows: Sequence[Sequence], ncols: int, track: bool):
    """Gauss-Jordan elimination.  Returns (rows, pivots, transform)."""
    p = F.p
    if not p and not track:
        return _rref_rational(rows, ncols)
    invs = _inverses(p) if p and p <= 1 << 16 else None
    m = [list(r) for r in rows]
    nr = len(m)
    t = [list(r) for r in identity_rows(F, nr)] if track else None
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        if r == nr:
            break
        piv = next((i for i in range(r, nr) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            if track:
                t[r], t[piv] = t[piv], t[r]
        inv = invs[m[r][c]] if invs else F.inv(m[r][c])
        if p:
            m[r] = [x * inv % p for x in m[r]]
            if track:
                t[r] = [x * inv % p for x in t[r]]
        else:
            m[r] = [x * inv if x else x for x in m[r]]
            if track:
                t[r] = [x * inv if x else x for x in t[r]]
        row = m[r]
        trow = t[r] if track else None
        for i in range(nr):
            f = m[i][c]
            if i != r and f != 0:
                if p:
                    m[i] = [(x - f * y) % p for x, y in zip(m[i], row)]
                    if track:
                        t[i] = [(x - f * y) % p for x, y in zip(t[i], trow)]
                else:
                    # Fraction products are costly; skip the zeros
                    m[i] = [x - f * y if y else x for x, y in zip(m[i], row)]
                    if track:
                        t[i] = [x - f * y if y else x for x, y in zip(t[i], trow)]
        pivots.append(c)
        r += 1
    return tuple(map(tuple, m)), pivots, (tuple(map(tuple, t)) if track else None)


def row_reduce(F: FieldSpec, rows: Sequence[Sequence], ncols: int):
    """Nonzero RREF rows and their pivot columns."""
    if not F.p:
        # hashing Fractions costs more than reducing again
        red, pivots, _ = _rref_rational(rows, ncols)
        return red[:len(pivots)], tuple(pivots)
    return _row_reduce_cached(F, tuple(map(tuple, rows)), ncols)


# subspace calculus keeps reducing the same few matrices
@functools.lru_cache(maxsize=1 << 16)
def _row_reduce_cached(F: FieldSpec, rows: Tuple[tuple, ...], ncols: int):
    red, pivots, _ = _rref(F, rows, ncols, False)
    return red[:len(pivots)], tuple(pivots)


def determinant(F: FieldSpec, rows: Sequence[Sequence]):
    n = len(rows)
    m = [list(r) for r in rows]
    det = F.one
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            return F.zero
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            det = F.neg(det)
        det = F.mul(det, m[c][c])
        inv = F.inv(m[c][c])
        for i in range(c + 1, n):
            f = F.mul(m[i][c], inv)
            if f:
                m[i] = [F.sub(x, F.mul(f, y)) for x, y in zip(m[i], m[c])]
    return det


def kernel_rows(F: FieldSpec, rows: Sequence[Sequence], ncols: int) -> Rows:
    """RREF basis of {x : M x = 0}, returned as rows."""
    red, pivots = row_reduce(F, rows, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        x = [F.zero] * ncols
        x[f] = F.one
        for r, pc in zip(red, pivots):
            x[pc] = F.neg(r[f])
        basis.append(tuple(x))
    return row_reduce(F, basis, ncols)[0]


def solve_rows(F: FieldSpec, rows: Sequence[Sequence], ncols: int, b: Sequence) -> Vector:
    """A particular x with M x = b, the free variables set to zero."""
    aug = [tuple(r) + (F(bi),) for r, bi in zip(rows, b)]
    red, pivots = row_reduce(F, aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        raise NoSolution("inconsistent linear system")
    x = [F.zero] * ncols
    for r, pc in zip(red, pivots):
        x[pc] = r[ncols]
    return tuple(x)


def express(F: FieldSpec, basis: Sequence[Sequence], v: Sequence) -> Vector:
    """Coefficients c with sum(c[i] * basis[i]) = v; basis rows independent."""
    if not basis:
        if any(v):
            raise NoSolution("vector not in the zero span")
        return ()
    n = len(v)
    return solve_rows(F, transpose(basis, n), len(basis), v)


# ---------------------------------------------------------------------------
# Matrix-level API


def rref(M: Matrix):
    """(R, pivots, T) with R = T @ M in reduced row-echelon form."""
    red, pivots, t = _rref(M.field, M.rows, M.ncols, True)
    return Matrix(M.field, red, M.ncols), tuple(pivots), Matrix(M.field, t, M.nrows)


def solve(M: Matrix, b: Sequence) -> Vector:
    if len(b) != M.nrows:
        raise DimensionMismatch(f"rhs of length {len(b)} for {M.shape} system")
    return solve_rows(M.field, M.rows, M.ncols, b)


def kernel_basis(M: Matrix) -> Matrix:
    return Matrix(M.field, kernel_rows(M.field, M.rows, M.ncols), M.ncols)
