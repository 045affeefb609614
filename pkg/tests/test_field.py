from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wittext.errors import DivisionByZero, FieldMismatch, InfiniteField, NotASquare, WittError
from wittext.field import QQ, FieldSpec, Scalar, arith, enumerate_field, gf, is_prime

PRIMES = [3, 5, 7, 11, 13]


def test_gf7_inverse():
    assert arith("inv", Scalar(gf(7), 3)).value == 5


def test_rational_addition():
    assert arith("add", Scalar(QQ, Fraction(1, 2)), Scalar(QQ, Fraction(1, 3))).value == Fraction(5, 6)


def test_neg_zero():
    assert arith("neg", Scalar(gf(3), 0)).value == 0


@pytest.mark.parametrize("F, a, expected", [
    (gf(3), 2, False),
    (gf(7), 2, True),
    (QQ, Fraction(4, 9), True),
    (QQ, Fraction(2), False),
    (QQ, Fraction(-1), False),
    (gf(7), 0, True),
])
def test_is_square(F, a, expected):
    assert F.is_square(a) is expected


def test_square_roots():
    assert gf(7).sqrt(2) == 3
    assert gf(3).sqrt(1) == 1
    assert QQ.sqrt(Fraction(4, 9)) == Fraction(2, 3)
    with pytest.raises(NotASquare):
        gf(3).sqrt(2)


def test_enumerate():
    assert [s.value for s in enumerate_field(gf(3))] == [0, 1, 2]
    seven = enumerate_field(gf(7))
    assert len(seven) == 7 and seven[-1].value == 6
    with pytest.raises(InfiniteField):
        enumerate_field(QQ)


def test_division_by_zero():
    with pytest.raises(DivisionByZero):
        gf(5).inv(0)
    with pytest.raises(DivisionByZero):
        QQ.inv(Fraction(0))
    with pytest.raises(ZeroDivisionError):
        arith("div", Scalar(gf(3), 1), Scalar(gf(3), 0))


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        arith("add", Scalar(gf(3), 1), Scalar(gf(5), 1))


def test_parse_and_format():
    assert gf(7).parse("1/2") == 4
    assert gf(7)("-1") == 6
    assert QQ.parse("-3/6") == Fraction(-1, 2)
    assert QQ.format(Fraction(3, 1)) == "3"
    assert QQ.format(Fraction(-1, 2)) == "-1/2"
    with pytest.raises(DivisionByZero):
        gf(3).parse("1/3")
    with pytest.raises(WittError):
        QQ.parse("one half")


def test_tags():
    assert FieldSpec.from_tag("gf(7)") == gf(7)
    assert FieldSpec.from_tag("Q") == QQ
    assert str(gf(11)) == "gf(11)" and str(QQ) == "q"
    with pytest.raises(WittError):
        FieldSpec.from_tag("gf(x)")


def test_non_prime_rejected():
    assert is_prime(7) and not is_prime(9)
    with pytest.raises(WittError):
        gf(9)


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_field_axioms(p, a, b, c):
    F = gf(p)
    a, b, c = F(a), F(b), F(c)
    assert F.add(a, b) == F.add(b, a)
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.sub(F.add(a, b), b) == a
    if a:
        assert F.mul(a, F.inv(a)) == 1


@given(st.sampled_from(PRIMES), st.integers(min_value=1))
def test_square_root_round_trip(p, a):
    F = gf(p)
    a = F(a)
    if a == 0:
        return
    if F.is_square(a):
        r = F.sqrt(a)
        assert F.mul(r, r) == a
        # smaller of the two roots
        assert r <= p - r
    else:
        with pytest.raises(NotASquare):
            F.sqrt(a)


@given(st.fractions(), st.fractions().filter(lambda x: x != 0))
def test_rational_division(a, b):
    assert QQ.mul(QQ.div(a, b), b) == a
