"""Extension theorems with subspace constraints.

Every function returning an isometry verifies it before returning.  Existence
questions answer with an :class:`Isometry` or with a falsy
:class:`Obstruction` naming the condition that fails; broken preconditions of
a construction raise :class:`HypothesisViolated` instead.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

from .errors import (
    ConditionsNotMet,
    FlagsNotIsometric,
    HypothesisViolated,
    NotExtendable,
    NotIsometricAmbients,
    NotSelfDual,
    SplitHypothesisViolated,
)
from .maps import (
    Isometry,
    LinearMap,
    apply,
    as_isometry,
    from_pairs,
    image_of,
    restrict,
)
from .matrix import combine_rows, solve_rows, vec_add, vec_sub
from .space import (
    QuotientSpace,
    Subspace,
    complement,
    extend_basis,
    intersect,
    perp,
    quotient_metric,
    radical,
    span,
    split,
    subspace_sum,
)
from .witt import find_subspace_isometry, witt_extend, witt_extend_within


@dataclass(frozen=True)
class Obstruction:
    """A negative answer: ``clause`` names the failed condition.

    ``recheck`` re-evaluates that condition on its own and returns whether it
    holds, so a genuine obstruction always rechecks to False.
    """

    clause: str
    detail: str = ""
    recheck: Optional[Callable[[], bool]] = field(default=None, compare=False, repr=False)

    def __bool__(self):
        return False


def _obstruct(clause: str, test: Callable[[], bool], detail: str = "") -> Obstruction:
    return Obstruction(clause, detail, test)


def maps_onto(phi: LinearMap, x: Subspace, x2: Subspace) -> bool:
    """phi(E cap x) == E' cap x2, the literal form of "E cap x ~phi E' cap x2"."""
    return image_of(phi, intersect(phi.dom, x)) == intersect(phi.cod, x2)


def _check_result(result: Isometry, phi: LinearMap, pairs=()) -> Isometry:
    for r, img in zip(phi.dom.rows, phi.images):
        assert apply(result, r) == img, "result does not extend phi"
    for x, x2 in pairs:
        assert image_of(result, x) == x2, "result misses a required image"
    return result


def _project(v, onto: Subspace, along: Subspace):
    return split(v, [onto, along])[0]


def _transport(omega: LinearMap, x: Subspace, x2: Subspace, r2: Subspace) -> LinearMap:
    """x -> x2 by omega followed by projection along r2 (r2 in the radical)."""
    images = [_project(apply(omega, r), x2, r2) for r in x.rows]
    return from_pairs(x.rows, images, x.space, x2.space, cod=x2)


# ---------------------------------------------------------------------------
# Singular Witt and its corollaries


def extend_singular(phi: LinearMap, x: Optional[Subspace] = None, x2: Optional[Subspace] = None,
                    witness: Optional[LinearMap] = None) -> Isometry:
    """Extend phi: E -> E' to an isometry x -> x2 of possibly singular spaces.

    Needs phi(E cap rad x) = E' cap rad x2.  ``witness`` (an isometry x -> x2)
    is only consulted over Q.
    """
    x = x if x is not None else phi.source.whole()
    x2 = x2 if x2 is not None else phi.target.whole()
    if not phi.dom.issubset(x) or not phi.cod.issubset(x2):
        raise HypothesisViolated("containment", "E must lie in x and E' in x2")
    rad, rad2 = radical(x), radical(x2)
    if not maps_onto(phi, rad, rad2):
        raise HypothesisViolated("radical", "phi(E cap rad) != E' cap rad'")
    if rad.dim != rad2.dim or x.dim != x2.dim:
        raise NotIsometricAmbients("radicals or dimensions differ")
    e = phi.dom
    er = intersect(e, rad)
    et = complement(er, e)
    vt = span(x.space, list(et.rows) + extend_basis(subspace_sum(et, rad).rows, x))
    et2 = image_of(phi, et)
    vt2 = span(x2.space, list(et2.rows) + extend_basis(subspace_sum(et2, rad2).rows, x2))
    w = None
    if witness is not None:
        w = _transport(witness, vt, vt2, rad2)
    try:
        nonsing = witt_extend_within(restrict(phi, et), vt, vt2, w)
    except NotExtendable as exc:
        raise NotIsometricAmbients(str(exc)) from exc
    er2 = image_of(phi, er)
    src = list(nonsing.dom.rows) + list(er.rows) + extend_basis(er.rows, rad)
    tgt = list(nonsing.images) + [apply(phi, r) for r in er.rows] + extend_basis(er2.rows, rad2)
    out = as_isometry(from_pairs(src, tgt, x.space, x2.space, cod=x2))
    return _check_result(out, phi)


def find_isometry_mapping_subspace(e: Subspace, e2: Subspace, x: Optional[Subspace] = None,
                                   x2: Optional[Subspace] = None):
    """Isometry x -> x2 sending e onto e2, or an Obstruction."""
    x = x if x is not None else e.space.whole()
    x2 = x2 if x2 is not None else e2.space.whole()
    if find_subspace_isometry(e, e2) is None:
        return _obstruct("E~E'", lambda: find_subspace_isometry(e, e2) is not None)
    rad, rad2 = radical(x), radical(x2)
    er, er2 = intersect(e, rad), intersect(e2, rad2)
    if er.dim != er2.dim:
        return _obstruct("dim(E cap rad)", lambda: intersect(e, radical(x)).dim
                         == intersect(e2, radical(x2)).dim)
    phi0 = from_pairs(er.rows, er2.rows, e.space, e2.space)
    phi1 = extend_singular(phi0, e, e2)
    out = extend_singular(phi1, x, x2)
    return _check_result(out, phi1, [(e, e2)])


def _require_orthogonal(e: Subspace, a: Subspace, name: str):
    if not e.is_orthogonal_to(a):
        raise HypothesisViolated(name, "subspaces are not orthogonal")


def extend_orthogonal(phi: LinearMap, a: Subspace, a2: Subspace,
                      v_witness: Optional[LinearMap] = None) -> Isometry:
    """Extend phi to V -> V' sending a onto a2, when E is orthogonal to a."""
    _require_orthogonal(phi.dom, a, "E perp A")
    _require_orthogonal(phi.cod, a2, "E' perp A'")
    if a.dim != a2.dim or find_subspace_isometry(a, a2) is None:
        raise HypothesisViolated("A~A'", "A and A' are not isometric")
    if not maps_onto(phi, a, a2):
        raise HypothesisViolated("phi(E cap A)=E' cap A'")
    ap, ap2 = perp(a), perp(a2)
    phi1 = extend_singular(phi, ap, ap2)
    out = witt_extend(phi1, v_witness)
    return _check_result(out, phi, [(a, a2)])


def find_isometry_orthogonal_pair(e: Subspace, e2: Subspace, a: Subspace, a2: Subspace):
    """Isometry V -> V' with e -> e2 and a -> a2 (e perp a), or an Obstruction."""
    _require_orthogonal(e, a, "E perp A")
    _require_orthogonal(e2, a2, "E' perp A'")
    if find_subspace_isometry(e, e2) is None:
        return _obstruct("E~E'", lambda: find_subspace_isometry(e, e2) is not None)
    if find_subspace_isometry(a, a2) is None:
        return _obstruct("A~A'", lambda: find_subspace_isometry(a, a2) is not None)
    if intersect(e, a).dim != intersect(e2, a2).dim:
        return _obstruct("dim(E cap A)", lambda: intersect(e, a).dim == intersect(e2, a2).dim)
    phi1 = find_isometry_mapping_subspace(e, e2, perp(a), perp(a2))
    out = witt_extend(phi1)
    return _check_result(out, phi1, [(e, e2), (a, a2)])


# ---------------------------------------------------------------------------
# Self-dual flags: the k = 3 engine and its iteration


def _riesz(images: Sequence, target: Subspace, rhs: Sequence):
    """t in target with b'(images[k], t) = rhs[k] for every k."""
    V2 = target.space
    F = V2.field
    if not images or not target.rows:
        assert all(x == 0 for x in rhs), "Riesz system has no solution"
        return tuple(F.zero for _ in range(V2.n))
    c = solve_rows(F, V2.pairing(list(images), list(target.rows)), target.dim, rhs)
    return combine_rows(F, c, target.rows, V2.n)


def k3_extend(phi: LinearMap, v1: Subspace, v1p: Subspace,
              v_witness: Optional[LinearMap] = None) -> Isometry:
    """Extend phi to V -> V' sending the totally isotropic v1 onto v1p.

    Preconditions: phi(E cap V1) = E' cap V1' and phi(E cap V1^perp) =
    E' cap V1'^perp.
    """
    V, V2 = phi.source, phi.target
    e, e2 = phi.dom, phi.cod
    if not v1.is_totally_isotropic() or not v1p.is_totally_isotropic():
        raise HypothesisViolated("V1 totally isotropic")
    if v1.dim != v1p.dim:
        raise HypothesisViolated("dim V1")
    v1perp, v1pperp = perp(v1), perp(v1p)
    if not maps_onto(phi, v1, v1p):
        raise HypothesisViolated("E_1", "phi(E cap V1) != E' cap V1'")
    if not maps_onto(phi, v1perp, v1pperp):
        raise HypothesisViolated("E_2", "phi(E cap V1^perp) != E' cap V1'^perp")
    # (1) phi_0 on E + (V1 cap E^perp)
    a0, a0p = intersect(v1, perp(e)), intersect(v1p, perp(e2))
    full0 = extend_orthogonal(phi, a0, a0p, v_witness)
    phi0 = restrict(full0, subspace_sum(e, a0))
    # (2) phi_beta on a complement of V1 cap E^perp inside V1
    e_1 = intersect(e, v1)
    et = complement(intersect(e, v1perp), e)
    ebar = complement(intersect(e_1, perp(e)), e_1)
    vbar = span(V, list(ebar.rows) + extend_basis(subspace_sum(ebar, a0).rows, v1))
    ebar2 = image_of(phi0, ebar)
    vbar2 = span(V2, list(ebar2.rows) + extend_basis(subspace_sum(ebar2, a0p).rows, v1p))
    assert vbar.dim == et.dim == vbar2.dim
    et_img = [apply(phi0, r) for r in et.rows]
    beta_img = [_riesz(et_img, vbar2, [V.b(r, v) for r in et.rows]) for v in vbar.rows]
    src = list(phi0.dom.rows) + list(vbar.rows)
    tgt = list(phi0.images) + beta_img
    phi1 = as_isometry(from_pairs(src, tgt, V, V2))
    out = witt_extend(phi1, v_witness)
    return _check_result(out, phi, [(v1, v1p)])


def _members(flag) -> List[Subspace]:
    return list(getattr(flag, "members", flag))


def _is_self_dual(members: List[Subspace]) -> bool:
    k = len(members) - 1
    return all(perp(members[i]) == members[k - i] for i in range(k + 1))


def extend_preserving_self_dual_flag(phi: LinearMap, flag, flag2,
                                     v_witness: Optional[LinearMap] = None) -> Isometry:
    """Extend phi to V -> V' carrying each member of ``flag`` onto ``flag2``."""
    vs, ws = _members(flag), _members(flag2)
    if not _is_self_dual(vs) or not _is_self_dual(ws):
        raise NotSelfDual("both flags must be self-dual")
    if len(vs) != len(ws) or any(x.dim != y.dim for x, y in zip(vs, ws)):
        raise FlagsNotIsometric("flags differ in length or dimensions")
    for i, (x, y) in enumerate(zip(vs, ws)):
        if not maps_onto(phi, x, y):
            raise HypothesisViolated(f"E_{i}", f"phi(E cap V_{i}) != E' cap V'_{i}")
    k = len(vs) - 1
    cur: LinearMap = phi
    result = None
    for i in range(1, k // 2 + 1):
        result = k3_extend(cur, vs[i], ws[i], v_witness)
        cur = restrict(result, subspace_sum(cur.dom, vs[i]))
    if result is None:
        result = witt_extend(phi, v_witness)
    return _check_result(result, phi, list(zip(vs, ws)))


# ---------------------------------------------------------------------------
# Subspace pairs: conditions and induced quotient maps


@dataclass(frozen=True)
class ConditionReport:
    c1: bool
    c2: bool
    c3: bool
    c4: bool
    phi_A_isometry: Optional[bool] = None
    phi_A_perp_isometry: Optional[bool] = None

    def first_failure(self) -> Optional[str]:
        for name in ("c2", "c3", "c4"):
            if not getattr(self, name):
                return name.upper()
        if self.phi_A_isometry is False:
            return "phi_A"
        return None

    @property
    def extendable(self) -> bool:
        return self.first_failure() is None

    def invariants_hold(self) -> bool:
        ok = not (self.c3 and self.c4) or self.c1
        if self.phi_A_isometry is not None and self.phi_A_perp_isometry is not None:
            ok = ok and self.phi_A_isometry == self.phi_A_perp_isometry
        return ok


def condition_c1(phi, a, a2) -> bool:
    return maps_onto(phi, radical(a), radical(a2))


def condition_c2(phi, a, a2) -> bool:
    return maps_onto(phi, subspace_sum(a, perp(a)), subspace_sum(a2, perp(a2)))


def condition_c3(phi, a, a2) -> bool:
    return maps_onto(phi, a, a2)


def condition_c4(phi, a, a2) -> bool:
    return maps_onto(phi, perp(a), perp(a2))


@dataclass(frozen=True)
class InducedQuotientMap:
    """A map between quotient spaces, stored on their representative subspaces."""

    dom: QuotientSpace
    cod: QuotientSpace
    map: LinearMap

    def is_isometry(self) -> bool:
        return self.dom.gram == self.map.target.gram_of(self.map.images)

    def __call__(self, v):
        """Image class representative of the class of v."""
        c = self.dom.class_coords(v)
        return apply(self.map, self.dom.representative(c))


def _split_two(v, x: Subspace, y: Subspace):
    """(x-part, y-part) of v in x + y, using a complement of x cap y inside x."""
    cx = complement(intersect(x, y), x)
    return split(v, [cx, y])


def _induced(phi: LinearMap, a: Subspace, a2: Subspace, first_is_a: bool) -> InducedQuotientMap:
    e, e2 = phi.dom, phi.cod
    ap, ap2 = perp(a), perp(a2)
    r, r2 = intersect(a, ap), intersect(a2, ap2)
    x, y = (a, ap) if first_is_a else (ap, a)
    x2, y2 = (a2, ap2) if first_is_a else (ap2, a2)
    num = intersect(subspace_sum(e, y), x)
    num2 = intersect(subspace_sum(e2, y2), x2)
    q, q2 = quotient_metric(num, r), quotient_metric(num2, r2)
    images = []
    for v in q.reps.rows:
        # v = e - y_part with e in E
        ev = _split_two(v, e, y)  # v = e_part + y_part
        ecomp = ev[0]
        xpart2 = _split_two(apply(phi, ecomp), x2, y2)[0]
        c = q2.class_coords(xpart2)
        images.append(q2.representative(c))
    m = from_pairs(q.reps.rows, images, phi.source, phi.target, cod=q2.reps)
    return InducedQuotientMap(q, q2, m)


def _require_c234(phi, a, a2):
    for name, test in (("C2", condition_c2), ("C3", condition_c3), ("C4", condition_c4)):
        if not test(phi, a, a2):
            raise ConditionsNotMet(name, "induced maps need (C2), (C3) and (C4)")


def induced_phi_A(phi: LinearMap, a: Subspace, a2: Subspace) -> InducedQuotientMap:
    _require_c234(phi, a, a2)
    return _induced(phi, a, a2, True)


def induced_phi_A_perp(phi: LinearMap, a: Subspace, a2: Subspace) -> InducedQuotientMap:
    _require_c234(phi, a, a2)
    return _induced(phi, a, a2, False)


def check_conditions(phi: LinearMap, a: Subspace, a2: Subspace) -> ConditionReport:
    c1, c2, c3, c4 = (t(phi, a, a2) for t in (condition_c1, condition_c2, condition_c3, condition_c4))
    pa = pap = None
    if c2 and c3 and c4:
        pa = _induced(phi, a, a2, True).is_isometry()
        pap = _induced(phi, a, a2, False).is_isometry()
    return ConditionReport(c1, c2, c3, c4, pa, pap)


def induced_sum_extends(phi: LinearMap, a: Subspace, a2: Subspace) -> bool:
    """Whether phi_A (.) phi_A^perp extends the map induced by phi on E cap (A + A^perp)."""
    fa, fap = induced_phi_A(phi, a, a2), induced_phi_A_perp(phi, a, a2)
    ap, ap2 = perp(a), perp(a2)
    r2 = intersect(a2, ap2)
    en = intersect(phi.dom, subspace_sum(a, ap))
    xa = intersect(subspace_sum(phi.dom, ap), a)
    xap = intersect(subspace_sum(phi.dom, a), ap)
    F = phi.target.field
    for v in en.rows:
        pa, pap = _split_two(v, xa, xap)
        lhs = vec_sub(F, apply(phi, v), vec_add(F, fa(pa), fap(pap)))
        if not r2.contains(lhs):
            return False
    return True


# ---------------------------------------------------------------------------
# Extending while sending A onto A'


def _pair_obstruction(phi, a, a2) -> Optional[Obstruction]:
    if a.dim != a2.dim or find_subspace_isometry(a, a2) is None:
        return _obstruct("A~A'", lambda: find_subspace_isometry(a, a2) is not None)
    tests = (("C2", condition_c2), ("C3", condition_c3), ("C4", condition_c4))
    for name, test in tests:
        if not test(phi, a, a2):
            return _obstruct(name, lambda test=test: test(phi, a, a2))
    if not _induced(phi, a, a2, True).is_isometry():
        return _obstruct("phi_A", lambda: induced_phi_A(phi, a, a2).is_isometry(),
                         "the induced map on ((E + A^perp) cap A) / rad A is not an isometry")
    return None


def extend_preserving_subspace(phi: LinearMap, a: Subspace, a2: Subspace,
                               a_witness: Optional[LinearMap] = None,
                               v_witness: Optional[LinearMap] = None):
    """Extend phi to V -> V' sending a onto a2, or return an Obstruction.

    Over Q, ``a_witness`` (an isometry a -> a2) and ``v_witness`` (V -> V')
    spare the library from searching for isometries it cannot always find.
    """
    if not isinstance(phi, Isometry):
        phi = as_isometry(phi)
    obs = _pair_obstruction(phi, a, a2)
    if obs is not None:
        return obs
    out = _build_subspace_extension(phi, a, a2, a_witness, v_witness)
    return _check_result(out, phi, [(a, a2)])


def _component_split(vs, ca: Subspace, ap: Subspace):
    parts = [split(v, [ca, ap]) for v in vs]
    return [p[0] for p in parts], [p[1] for p in parts]


def _build_subspace_extension(phi: Isometry, a: Subspace, a2: Subspace, a_witness, v_witness) -> Isometry:
    V, V2 = phi.source, phi.target
    F = V.field
    e, e2 = phi.dom, phi.cod
    ap, ap2 = perp(a), perp(a2)
    r, r2 = intersect(a, ap), intersect(a2, ap2)
    n_ = subspace_sum(a, ap)

    # Step 1: E cap (A + A^perp) = (E cap R) (.) [(E_A (.) E_A^perp) (+) E_{A,A^perp}]
    en = intersect(e, n_)
    er = intersect(e, r)
    ea, eap = intersect(e, a), intersect(e, ap)
    e_a = complement(er, ea)
    e_ap = complement(er, eap)
    e_mixed = complement(subspace_sum(ea, eap), en)

    # Step 2: v_i = a_i + a_i^perp, then V_A and V_A^perp around them
    ca, ca2 = complement(r, a), complement(r2, a2)
    a_i, ap_i = _component_split(e_mixed.rows, ca, ap)
    mixed2 = [apply(phi, v) for v in e_mixed.rows]
    a2_i, ap2_i = _component_split(mixed2, ca2, ap2)

    def grow(core: List, whole: Subspace, rad: Subspace) -> Subspace:
        base = span(whole.space, core)
        assert base.dim == len(core) and intersect(base, rad).dim == 0
        return span(whole.space, core + extend_basis(subspace_sum(base, rad).rows, whole))

    e_a_img = [apply(phi, x) for x in e_a.rows]
    e_ap_img = [apply(phi, x) for x in e_ap.rows]
    va = grow(list(e_a.rows) + a_i, a, r)
    vap = grow(list(e_ap.rows) + ap_i, ap, r)
    va2 = grow(e_a_img + a2_i, a2, r2)
    vap2 = grow(e_ap_img + ap2_i, ap2, r2)

    # Steps 3-5: the transported induced maps, extended inside V_A and V_A^perp
    map_a = as_isometry(from_pairs(list(e_a.rows) + a_i, e_a_img + a2_i, V, V2))
    map_ap = as_isometry(from_pairs(list(e_ap.rows) + ap_i, e_ap_img + ap2_i, V, V2))
    wa = wap = None
    if not F.p:
        omega_a = a_witness if a_witness is not None else find_subspace_isometry(a, a2)
        omega = witt_extend(omega_a, v_witness)
        wa = _transport(omega, va, va2, r2)
        wap = _transport(omega, vap, vap2, r2)
    phi1 = witt_extend_within(map_a, va, va2, wa)
    phi2 = witt_extend_within(map_ap, vap, vap2, wap)

    # phi_0 on R through the chain w_1..w_l | ..w_p | ..w_q | ..w_m
    et = complement(en, e)
    et_img = [apply(phi, x) for x in et.rows]
    e_perp, e2_perp = perp(e), perp(e2)
    w_l = intersect(er, e_perp).rows
    w_p = extend_basis(w_l, er)
    ep_r = intersect(e_perp, r)
    w_q = extend_basis(w_l, ep_r)
    w_m = extend_basis(list(w_l) + w_p + w_q, r)
    img_l = [apply(phi, w) for w in w_l]
    img_p = [apply(phi, w) for w in w_p]
    img_q = extend_basis(img_l, intersect(e2_perp, r2))
    assert len(img_q) == len(w_q)
    img_m = [_riesz(et_img, r2, [V.b(x, w) for x in et.rows]) for w in w_m]
    src0 = list(w_l) + w_p + w_q + w_m
    tgt0 = img_l + img_p + img_q + img_m

    hat = as_isometry(from_pairs(src0 + list(phi1.dom.rows) + list(phi2.dom.rows),
                                 tgt0 + list(phi1.images) + list(phi2.images), V, V2))

    # the corrected map on E + A + A^perp
    u = subspace_sum(en, r)
    extra = extend_basis(u.rows, n_)
    tgt_extra = []
    for x in extra:
        hx = apply(hat, x)
        rhs = [F.sub(V2.b(y, hx), V.b(t, x)) for t, y in zip(et.rows, et_img)]
        tgt_extra.append(vec_sub(F, hx, _riesz(et_img, r2, rhs)))
    src = list(u.rows) + extra + list(et.rows)
    tgt = [apply(hat, x) for x in u.rows] + tgt_extra + et_img
    tilde = as_isometry(from_pairs(src, tgt, V, V2))
    return witt_extend(tilde, v_witness)


def extend_preserving_subspace_split(phi: LinearMap, a: Subspace, a2: Subspace,
                                     a_witness: Optional[LinearMap] = None,
                                     v_witness: Optional[LinearMap] = None):
    """The split case (E + A^perp) cap A = E cap A: only (C3) and (C4) matter."""
    e, e2 = phi.dom, phi.cod
    if intersect(subspace_sum(e, perp(a)), a) != intersect(e, a):
        raise SplitHypothesisViolated("split", "(E + A^perp) cap A != E cap A")
    if intersect(subspace_sum(e2, perp(a2)), a2) != intersect(e2, a2):
        raise SplitHypothesisViolated("split'", "(E' + A'^perp) cap A' != E' cap A'")
    if not condition_c3(phi, a, a2):
        return _obstruct("C3", lambda: condition_c3(phi, a, a2))
    if not condition_c4(phi, a, a2):
        return _obstruct("C4", lambda: condition_c4(phi, a, a2))
    return extend_preserving_subspace(phi, a, a2, a_witness, v_witness)
