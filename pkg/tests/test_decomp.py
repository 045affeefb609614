import random

import pytest

from support import F3, hyperbolic, rsub, space
from wittext.decomp import (
    extend_direct_sum_pair,
    extend_direct_sum_triple,
    extend_hyperbolic,
    extend_witt_decomposition,
    induced_map_pair,
    induced_map_triple,
    projection_pair,
    projection_triple,
    refine_flag,
)
from wittext.errors import ConditionsNotMet, NotCompatible, NotDirectSum, NotSelfDual
from wittext.flags import Flag
from wittext.maps import extends, from_pairs, identity, image_of, is_isometry, restrict
from wittext.oracle import find_extension
from wittext.space import perp, span, subspace_sum
from wittext.witt import WittDecomposition, find_subspace_isometry, random_isometry, witt_decompose

H4 = hyperbolic(2)
H6 = hyperbolic(3)


def u(*xs):
    return list(xs)


PLUS = span(H6, [u(1, 0, 0, 0, 0, 0), u(0, 1, 0, 0, 0, 0), u(0, 0, 1, 0, 0, 0)])
MINUS = span(H6, [u(0, 0, 0, 1, 0, 0), u(0, 0, 0, 0, 1, 0), u(0, 0, 0, 0, 0, 1)])
e1 = span(H6, [u(1, 0, 0, 0, 0, 0)])
P4 = span(H4, [[1, 0, 0, 0], [0, 1, 0, 0]])
M4 = span(H4, [[0, 0, 1, 0], [0, 0, 0, 1]])


def _respects(out, phi, pairs):
    assert out.dom == out.source.whole() and extends(out, phi)
    for x, y in pairs:
        assert image_of(out, x) == y


def test_projection_pair():
    e = span(H6, [u(1, 0, 0, 1, 0, 0)])
    pr = projection_pair(e, PLUS, MINUS)
    assert pr.onto_A == e1 and pr.onto_B == span(H6, [u(0, 0, 0, 1, 0, 0)])
    assert e.issubset(pr.P) and pr.P.dim == 2
    assert projection_pair(pr.P, PLUS, MINUS).P == pr.P
    assert projection_pair(e1, PLUS, MINUS).onto_B.dim == 0
    with pytest.raises(NotDirectSum):
        projection_pair(e, PLUS, PLUS)


def test_projection_triple():
    a, b, c = (span(H6, [r]) for r in ([1, 0, 0, 0, 0, 0], [0, 1, 0, 0, 0, 0], [0, 0, 1, 0, 0, 0]))
    with pytest.raises(NotDirectSum):
        projection_triple(e1, a, b, c)
    pr = projection_triple(span(H6, [u(1, 1, 0, 0, 0, 0)]), subspace_sum(a, b), c, MINUS)
    assert pr.onto_A.dim == 1 and pr.onto_B.dim == 0 and pr.onto_C.dim == 0


def test_direct_sum_pair_trivial_cases():
    empty = from_pairs([], [], H6, H6)
    out = extend_direct_sum_pair(empty, PLUS, MINUS, MINUS, PLUS)
    _respects(out, empty, [(PLUS, MINUS), (MINUS, PLUS)])
    # E = A forces phi(E) = A'
    ok = restrict(identity(H6.whole()), PLUS)
    _respects(extend_direct_sum_pair(ok, PLUS, MINUS, PLUS, MINUS), ok, [(PLUS, PLUS)])
    bad = from_pairs(PLUS.rows, [u(1, 0, 0, 0, 0, 0), u(0, 1, 0, 0, 0, 0), u(0, 0, 1, 1, 0, 0)], H6, H6)
    obs = extend_direct_sum_pair(bad, PLUS, MINUS, PLUS, MINUS)
    assert not obs and obs.clause == "E cap A" and obs.recheck() is False


def test_direct_sum_pair_against_oracle():
    rng = random.Random(13)
    some = 0
    for _ in range(40):
        e = rsub(rng, H6, rng.randint(1, 3))
        g = random_isometry(H6, rng) if rng.random() < 0.5 else identity(H6.whole())
        phi = restrict(g, e)
        out = extend_direct_sum_pair(phi, PLUS, MINUS, PLUS, MINUS)
        if out:
            some += 1
            _respects(out, phi, [(PLUS, PLUS), (MINUS, MINUS)])
        else:
            assert out.recheck() is False
            # a linear extension is necessary for an isometric one
            assert find_extension(phi, [(PLUS, PLUS), (MINUS, MINUS)]) is None
    assert some > 0


def test_induced_map_pair():
    a = span(H6, [u(1, 0, 0, 0, 0, 0), u(0, 1, 0, 0, 0, 0)])
    idv = identity(H6.whole())
    # E inside A: nothing on the B side
    t = induced_map_pair(restrict(idv, e1), PLUS, MINUS, PLUS, MINUS)
    assert t.dom == e1
    # a diagonal vector gets split into its components
    d = span(H6, [u(1, 0, 0, 1, 0, 0)])
    t = induced_map_pair(restrict(idv, d), PLUS, MINUS, PLUS, MINUS)
    assert t.dom == subspace_sum(e1, span(H6, [u(0, 0, 0, 1, 0, 0)]))
    assert extends(t, restrict(idv, d)) and t == restrict(idv, t.dom)
    with pytest.raises(ConditionsNotMet):
        sw = from_pairs([u(1, 0, 0, 0, 0, 0)], [u(0, 0, 0, 1, 0, 0)], H6, H6)
        induced_map_pair(sw, a, subspace_sum(span(H6, [u(0, 0, 1, 0, 0, 0)]), MINUS), a,
                         subspace_sum(span(H6, [u(0, 0, 1, 0, 0, 0)]), MINUS))


def test_direct_sum_triple():
    a = span(H6, [u(1, 0, 0, 0, 0, 0), u(0, 0, 0, 1, 0, 0)])
    b = span(H6, [u(0, 1, 0, 0, 0, 0), u(0, 0, 0, 0, 1, 0)])
    c = span(H6, [u(0, 0, 1, 0, 0, 0), u(0, 0, 0, 0, 0, 1)])
    idv = identity(H6.whole())
    phi = restrict(idv, span(H6, [u(1, 1, 0, 0, 0, 0)]))
    _respects(extend_direct_sum_triple(phi, a, b, c, a, b, c), phi, [(a, a), (b, b), (c, c)])
    t = induced_map_triple(phi, a, b, c, a, b, c)
    assert t.dom.dim == 2 and extends(t, phi)
    # e1 -> e2: E cap (B+C) = 0 but E' cap (B'+C') = span e2
    sw = from_pairs([u(1, 0, 0, 0, 0, 0)], [u(0, 1, 0, 0, 0, 0)], H6, H6)
    obs = extend_direct_sum_triple(sw, a, b, c, a, b, c)
    assert not obs and obs.clause == "E cap (B+C)" and obs.recheck() is False
    # C = 0 is the pair case
    zero = H6.zero()
    out = extend_direct_sum_triple(phi, PLUS, MINUS, zero, PLUS, MINUS, zero)
    assert bool(out) == bool(extend_direct_sum_pair(phi, PLUS, MINUS, PLUS, MINUS))


def test_refine_flag():
    f = Flag.of(H6, [])
    assert refine_flag(f, PLUS).members == (H6.zero(), PLUS, H6.whole())
    f2 = Flag.of(H6, [PLUS])
    assert refine_flag(f2, PLUS) == f2
    f3 = Flag.of(H6, [e1, perp(e1)])
    assert refine_flag(f3, PLUS).members == (H6.zero(), e1, PLUS, perp(e1), H6.whole())
    with pytest.raises(NotCompatible):
        refine_flag(f2, span(H6, [u(1, 0, 0, 0, 0, 0), u(0, 1, 0, 0, 0, 0), u(0, 0, 0, 0, 0, 1)]))
    with pytest.raises(NotCompatible):
        refine_flag(Flag.of(H6, [span(H6, [u(0, 0, 0, 1, 0, 0)]), perp(span(H6, [u(0, 0, 0, 1, 0, 0)]))]),
                    PLUS)
    with pytest.raises(NotSelfDual):
        refine_flag(Flag.of(H6, [e1]), PLUS)


def test_extend_hyperbolic_examples():
    empty = from_pairs([], [], H6, H6)
    flag = Flag.of(H6, [e1, perp(e1)])
    _respects(extend_hyperbolic(empty, PLUS, MINUS, PLUS, MINUS, flag, flag), empty,
              [(PLUS, PLUS), (MINUS, MINUS)] + list(zip(flag, flag)))
    e = span(H6, [u(1, 0, 0, 0, 0, 0), u(0, 0, 0, 1, 0, 0)])
    phi = restrict(identity(H6.whole()), e)
    out = extend_hyperbolic(phi, PLUS, MINUS, PLUS, MINUS, flag, flag)
    _respects(out, phi, [(PLUS, PLUS), (MINUS, MINUS)] + list(zip(flag, flag)))
    assert find_extension(phi, [(PLUS, PLUS), (MINUS, MINUS)] + list(zip(flag, flag))) is not None


def test_extend_hyperbolic_induced_not_isometry():
    # phi is an isometry E -> E', its split phi~ is not
    e = span(H4, [[1, 0, 0, 2], [0, 1, 1, 2]])
    e2 = span(H4, [[1, 0, 0, 1], [0, 1, 2, 2]])
    phi = from_pairs(e.rows, e2.rows, H4, H4)
    assert is_isometry(phi)
    obs = extend_hyperbolic(phi, P4, M4, P4, M4)
    assert not obs and obs.clause == "phi~ isometry" and obs.recheck() is False
    assert find_extension(phi, [(P4, P4), (M4, M4)]) is None


def test_extend_hyperbolic_against_oracle():
    rng = random.Random(17)
    for _ in range(60):
        e = rsub(rng, H4, rng.randint(0, 3))
        e2 = rsub(rng, H4, e.dim)
        m = find_subspace_isometry(e, e2)
        if m is None:
            continue
        out = extend_hyperbolic(m, P4, M4, P4, M4)
        expected = find_extension(m, [(P4, P4), (M4, M4)]) is not None
        assert bool(out) == expected
        if out:
            _respects(out, m, [(P4, P4), (M4, M4)])


def _h4_one():
    return space(F3, [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0], [1, 0, 0, 0, 0], [0, 1, 0, 0, 0], [0, 0, 0, 0, 1]])


def test_witt_decomposition_hyperbolic_only():
    W = witt_decompose(H4)
    assert W.anis.dim == 0
    phi = restrict(identity(H4.whole()), W.plus)
    _respects(extend_witt_decomposition(phi, W, W), phi, [(W.plus, W.plus), (W.minus, W.minus)])


def test_witt_decomposition_anisotropic_part():
    V = _h4_one()
    W = WittDecomposition(span(V, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]]), span(V, [[0, 0, 0, 0, 1]]),
                          span(V, [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]))
    assert W.is_valid()
    neg = from_pairs([[0, 0, 0, 0, 1]], [[0, 0, 0, 0, 2]], V, V)
    out = extend_witt_decomposition(neg, W, W)
    _respects(out, neg, [(W.plus, W.plus), (W.anis, W.anis), (W.minus, W.minus)])


def test_witt_decomposition_against_oracle():
    V = _h4_one()
    W = WittDecomposition(span(V, [[1, 0, 0, 0, 0], [0, 1, 0, 0, 0]]), span(V, [[0, 0, 0, 0, 1]]),
                          span(V, [[0, 0, 1, 0, 0], [0, 0, 0, 1, 0]]))
    rng = random.Random(23)
    seen = set()
    for _ in range(40):
        e = rsub(rng, V, rng.randint(1, 3))
        e2 = image_of(random_isometry(V, rng), e) if rng.random() < 0.5 else rsub(rng, V, e.dim)
        m = find_subspace_isometry(e, e2)
        if m is None:
            continue
        pairs = [(W.plus, W.plus), (W.anis, W.anis), (W.minus, W.minus)]
        out = extend_witt_decomposition(m, W, W)
        expected = find_extension(m, pairs) is not None
        assert bool(out) == expected
        seen.add(expected)
        if out:
            _respects(out, m, pairs)
    assert seen == {True, False}


def test_witt_decomposition_with_flag():
    W = WittDecomposition(PLUS, H6.zero(), MINUS)
    flag = Flag.of(H6, [e1, perp(e1)])
    phi = restrict(identity(H6.whole()), span(H6, [u(0, 1, 0, 0, 0, 0)]))
    out = extend_witt_decomposition(phi, W, W, flag, flag)
    _respects(out, phi, [(PLUS, PLUS), (MINUS, MINUS)] + list(zip(flag, flag)))
    # phi sends e1 out of V_1
    bad = from_pairs([u(1, 0, 0, 0, 0, 0)], [u(0, 1, 0, 0, 0, 0)], H6, H6)
    obs = extend_witt_decomposition(bad, W, W, flag, flag)
    assert not obs and obs.recheck() is False
    assert find_extension(bad, [(PLUS, PLUS), (MINUS, MINUS)] + list(zip(flag, flag))) is None


def test_flagless_consistency():
    rng = random.Random(29)
    W = WittDecomposition(PLUS, H6.zero(), MINUS)
    trivial = Flag.of(H6, [PLUS])
    for _ in range(25):
        e = rsub(rng, H6, rng.randint(1, 3))
        phi = restrict(random_isometry(H6, rng), e)
        assert bool(extend_witt_decomposition(phi, W, W)) == bool(
            extend_witt_decomposition(phi, W, W, trivial, trivial))
