"""Exact scalar fields: GF(p) for an odd prime p, and the rationals.

Elements are stored as plain Python values so the linear algebra layer can
work on them directly: ``int`` residues in ``range(p)`` for GF(p) and
``fractions.Fraction`` for Q.  :class:`Scalar` wraps a value together with
its field for callers who want operator overloading and mismatch checks.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional, Union

from .errors import DivisionByZero, FieldMismatch, InfiniteField, NotASquare, WittError

RawScalar = Union[int, Fraction]

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for q in _MR_BASES:
        if n % q == 0:
            return n == q
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """A field of characteristic other than two.

    ``p`` is the modulus for GF(p); ``None`` means the rationals.
    """

    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None:
            if not isinstance(self.p, int) or not is_prime(self.p):
                raise WittError(f"GF(p) needs a prime modulus, got {self.p!r}")
            if self.p == 2:
                raise WittError("characteristic 2 is not supported")

    @property
    def is_finite(self) -> bool:
        return self.p is not None

    @property
    def zero(self) -> RawScalar:
        return 0 if self.p else Fraction(0)

    @property
    def one(self) -> RawScalar:
        return 1 if self.p else Fraction(1)

    def __str__(self):
        return f"gf({self.p})" if self.p else "q"

    def __repr__(self):
        return f"FieldSpec({self})"

    # -- conversion -------------------------------------------------------

    def __call__(self, x) -> RawScalar:
        """Canonical raw value for ``x`` (int, Fraction, str or Scalar)."""
        if isinstance(x, Scalar):
            if x.field != self:
                raise FieldMismatch(f"{x.field} element used in {self}")
            return x.value
        if isinstance(x, str):
            return self.parse(x)
        if self.p:
            if isinstance(x, Fraction):
                return x.numerator * pow(x.denominator, -1, self.p) % self.p
            return int(x) % self.p
        return Fraction(x)

    def parse(self, text: str) -> RawScalar:
        text = text.strip()
        m = re.fullmatch(r"([+-]?\d+)(?:/(\d+))?", text)
        if not m:
            raise WittError(f"cannot parse scalar {text!r}")
        num, den = int(m.group(1)), int(m.group(2) or 1)
        if den == 0:
            raise DivisionByZero(f"zero denominator in {text!r}")
        if self.p:
            if den % self.p == 0:
                raise DivisionByZero(f"{text!r} has a denominator divisible by {self.p}")
            return num * pow(den, -1, self.p) % self.p
        return Fraction(num, den)

    def format(self, a: RawScalar) -> str:
        if self.p:
            return str(a)
        a = Fraction(a)
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    @classmethod
    def from_tag(cls, tag: str) -> "FieldSpec":
        """Parse ``"gf(7)"`` or ``"q"``."""
        tag = tag.strip().lower()
        if tag in ("q", "qq", "rational"):
            return cls(None)
        m = re.fullmatch(r"gf\((\d+)\)", tag)
        if not m:
            raise WittError(f"unknown field tag {tag!r}")
        return cls(int(m.group(1)))

    # -- arithmetic on raw values -----------------------------------------

    def add(self, a, b):
        return (a + b) % self.p if self.p else a + b

    def sub(self, a, b):
        return (a - b) % self.p if self.p else a - b

    def mul(self, a, b):
        return a * b % self.p if self.p else a * b

    def neg(self, a):
        return -a % self.p if self.p else -a

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of zero")
        return pow(a, -1, self.p) if self.p else 1 / Fraction(a)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_square(self, a) -> bool:
        if a == 0:
            return True
        if self.p:
            return pow(a, (self.p - 1) // 2, self.p) == 1
        a = Fraction(a)
        if a < 0:
            return False
        return _is_int_square(a.numerator) and _is_int_square(a.denominator)

    def sqrt(self, a) -> RawScalar:
        """Square root; the smaller residue over GF(p), the positive one over Q."""
        if not self.is_square(a):
            raise NotASquare(f"{self.format(a)} is not a square in {self}")
        if a == 0:
            return self.zero
        if self.p:
            x = _tonelli_shanks(a, self.p)
            return min(x, self.p - x)
        a = Fraction(a)
        return Fraction(math.isqrt(a.numerator), math.isqrt(a.denominator))

    def elements(self) -> Iterator[int]:
        if not self.p:
            raise InfiniteField("cannot enumerate the rationals")
        return iter(range(self.p))

    def sign(self, a) -> int:
        """Real sign for Q (used as a signature invariant); 0 over GF(p)."""
        if self.p:
            return 0
        return (a > 0) - (a < 0)


def gf(p: int) -> FieldSpec:
    return FieldSpec(p)


QQ = FieldSpec(None)


def _is_int_square(n: int) -> bool:
    return n >= 0 and math.isqrt(n) ** 2 == n


def _tonelli_shanks(a: int, p: int) -> int:
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


@dataclass(frozen=True)
class Scalar:
    """A field element tagged with its field."""

    field: FieldSpec
    value: RawScalar

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _other(self, other) -> RawScalar:
        if isinstance(other, Scalar):
            if other.field != self.field:
                raise FieldMismatch(f"{self.field} vs {other.field}")
            return other.value
        return self.field(other)

    def __add__(self, other):
        return Scalar(self.field, self.field.add(self.value, self._other(other)))

    def __sub__(self, other):
        return Scalar(self.field, self.field.sub(self.value, self._other(other)))

    def __mul__(self, other):
        return Scalar(self.field, self.field.mul(self.value, self._other(other)))

    def __truediv__(self, other):
        return Scalar(self.field, self.field.div(self.value, self._other(other)))

    __radd__ = __add__
    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def inverse(self):
        return Scalar(self.field, self.field.inv(self.value))

    def is_square(self) -> bool:
        return self.field.is_square(self.value)

    def sqrt(self) -> "Scalar":
        return Scalar(self.field, self.field.sqrt(self.value))

    def __str__(self):
        return self.field.format(self.value)


def arith(op: str, a: Scalar, b: Optional[Scalar] = None) -> Scalar:
    """Dispatch ``op`` in {add, sub, mul, div, neg, inv} on scalars."""
    if op in ("neg", "inv"):
        return -a if op == "neg" else a.inverse()
    if b is None:
        raise WittError(f"{op} needs two operands")
    if a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    return {"add": a.__add__, "sub": a.__sub__, "mul": a.__mul__, "div": a.__truediv__}[op](b)


def enumerate_field(spec: FieldSpec) -> list:
    return [Scalar(spec, x) for x in spec.elements()]
