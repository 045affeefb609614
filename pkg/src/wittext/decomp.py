"""Direct-sum projections, induced maps, and extensions that respect a
hyperbolic splitting or a Witt decomposition."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence

from .errors import (
    ConditionsNotMet,
    FlagsNotIsometric,
    HypothesisViolated,
    NotCompatible,
    NotDirectSum,
    NotExtendable,
    NotIsometricAmbients,
    NotSelfDual,
)
from .extend import Obstruction, _check_result, _obstruct, extend_preserving_self_dual_flag, maps_onto
from .flags import Flag, is_self_dual
from .maps import (
    LinearMap,
    as_isometry,
    from_pairs,
    image_of,
    is_isometry,
    map_from_local,
    map_to_local,
    orthogonal_sum,
    restrict,
)
from .space import (
    MetricSpace,
    Subspace,
    complement,
    extend_basis,
    intersect,
    local_space,
    perp,
    split,
    subspace_sum,
    sum_all,
    to_local,
)
from .witt import WittDecomposition, find_isotropic_vector, witt_extend_within


@dataclass(frozen=True)
class ProjectionPair:
    """P_{A,B}(E) = [(E+B) cap A] (+) [(E+A) cap B]."""

    onto_A: Subspace
    onto_B: Subspace
    P: Subspace


@dataclass(frozen=True)
class ProjectionTriple:
    onto_A: Subspace
    onto_B: Subspace
    onto_C: Subspace
    P: Subspace


def _require_direct_sum(parts: Sequence[Subspace]):
    space = parts[0].space
    if sum(p.dim for p in parts) != space.n or sum_all(space, parts).dim != space.n:
        raise NotDirectSum("the parts do not form a direct sum decomposition of V")


def _others(parts: Sequence[Subspace], i: int) -> Subspace:
    return sum_all(parts[0].space, (p for j, p in enumerate(parts) if j != i))


def _projections(e: Subspace, parts: Sequence[Subspace]) -> List[Subspace]:
    return [intersect(subspace_sum(e, _others(parts, i)), p) for i, p in enumerate(parts)]


def projection_pair(e: Subspace, a: Subspace, b: Subspace) -> ProjectionPair:
    _require_direct_sum([a, b])
    pa, pb = _projections(e, [a, b])
    return ProjectionPair(pa, pb, subspace_sum(pa, pb))


def projection_triple(e: Subspace, a: Subspace, b: Subspace, c: Subspace) -> ProjectionTriple:
    _require_direct_sum([a, b, c])
    pa, pb, pc = _projections(e, [a, b, c])
    return ProjectionTriple(pa, pb, pc, sum_all(e.space, [pa, pb, pc]))


_PAIR_NAMES = ("E cap B", "E cap A")
_TRIPLE_NAMES = ("E cap (B+C)", "E cap (C+A)", "E cap (A+B)")


def _setup(phi: LinearMap, parts, parts2):
    _require_direct_sum(parts)
    _require_direct_sum(parts2)
    if [p.dim for p in parts] != [p.dim for p in parts2]:
        raise NotDirectSum("corresponding parts differ in dimension")


def _first_failed(phi: LinearMap, parts, parts2, names) -> Optional[Obstruction]:
    for i, name in enumerate(names):
        o, o2 = _others(parts, i), _others(parts2, i)
        if not maps_onto(phi, o, o2):
            return _obstruct(name, lambda o=o, o2=o2: maps_onto(phi, o, o2))
    return None


def _induced(phi: LinearMap, parts, parts2) -> LinearMap:
    src, tgt = [], []
    for r, img in zip(phi.dom.rows, phi.images):
        src.extend(split(r, parts))
        tgt.extend(split(img, parts2))
    m = from_pairs(src, tgt, phi.source, phi.target)
    return as_isometry(m) if is_isometry(m) else m


def _induced_checked(phi, parts, parts2, names) -> LinearMap:
    _setup(phi, parts, parts2)
    obs = _first_failed(phi, parts, parts2, names)
    if obs is not None:
        raise ConditionsNotMet(obs.clause, f"phi(E cap ...) fails: {obs.clause}")
    return _induced(phi, parts, parts2)


def induced_map_pair(phi: LinearMap, a: Subspace, b: Subspace, a2: Subspace, b2: Subspace) -> LinearMap:
    """phi~_{A,B}: P_{A,B}(E) -> P_{A',B'}(E'), v_A -> phi(v)_{A'}, v_B -> phi(v)_{B'}."""
    return _induced_checked(phi, [a, b], [a2, b2], _PAIR_NAMES)


def induced_map_triple(phi: LinearMap, a: Subspace, b: Subspace, c: Subspace,
                       a2: Subspace, b2: Subspace, c2: Subspace) -> LinearMap:
    return _induced_checked(phi, [a, b, c], [a2, b2, c2], _TRIPLE_NAMES)


def _block_extension(tilde: LinearMap, parts, parts2) -> LinearMap:
    """Complete phi~ part by part with arbitrary bijections of complements."""
    src, tgt = list(tilde.dom.rows), list(tilde.images)
    for p, p2 in zip(parts, parts2):
        d = intersect(tilde.dom, p)
        d2 = image_of(tilde, d)
        src += extend_basis(d.rows, p)
        tgt += extend_basis(d2.rows, p2)
    V2 = tilde.target
    return from_pairs(src, tgt, tilde.source, V2, cod=V2.whole())


def _extend_direct_sum(phi, parts, parts2, names):
    _setup(phi, parts, parts2)
    obs = _first_failed(phi, parts, parts2, names)
    if obs is not None:
        return obs
    out = _block_extension(_induced(phi, parts, parts2), parts, parts2)
    return _check_result(out, phi, list(zip(parts, parts2)))


def extend_direct_sum_pair(phi: LinearMap, a: Subspace, b: Subspace, a2: Subspace, b2: Subspace):
    """A linear bijection V -> V' extending phi with A -> A', B -> B', or an Obstruction."""
    return _extend_direct_sum(phi, [a, b], [a2, b2], _PAIR_NAMES)


def extend_direct_sum_triple(phi: LinearMap, a: Subspace, b: Subspace, c: Subspace,
                             a2: Subspace, b2: Subspace, c2: Subspace):
    return _extend_direct_sum(phi, [a, b, c], [a2, b2, c2], _TRIPLE_NAMES)


# ---------------------------------------------------------------------------
# Hyperbolic spaces and Witt decompositions


def _members(flag) -> List[Subspace]:
    return list(getattr(flag, "members", flag))


def _is_maximal_isotropic(vplus: Subspace) -> bool:
    if not vplus.is_totally_isotropic():
        return False
    rest = complement(vplus, perp(vplus))
    return rest.dim == 0 or find_isotropic_vector(rest) is None


def refine_flag(flag, vplus: Subspace) -> Flag:
    """The self-dual flag with vplus inserted in the middle (k odd) or checked there (k even)."""
    ms = _members(flag)
    space = vplus.space
    if not is_self_dual(Flag(space, tuple(ms))):
        raise NotSelfDual("flag is not self-dual")
    if not _is_maximal_isotropic(vplus):
        raise NotCompatible("V+ is not a maximal totally isotropic subspace")
    k = len(ms) - 1
    h = k // 2
    if not ms[h].issubset(vplus):
        raise NotCompatible(f"V_{h} is not contained in V+")
    if k % 2 == 0:
        if ms[h] != vplus:
            raise NotCompatible(f"V_{h} must equal V+ for a flag of even length")
        return Flag(space, tuple(ms))
    return Flag(space, tuple(ms[:h + 1]) + (vplus,) + tuple(ms[h + 1:]))


def _default_flag(space: MetricSpace, flag) -> Flag:
    if flag is None:
        return Flag(space, (space.zero(), space.whole()))
    return flag if isinstance(flag, Flag) else Flag(space, tuple(flag))


def _check_flags(f: Flag, f2: Flag, vplus: Subspace, vplus2: Subspace):
    if not is_self_dual(f) or not is_self_dual(f2):
        raise NotSelfDual("flags must be self-dual")
    if f.dims() != f2.dims():
        raise FlagsNotIsometric("flags differ in length or dimensions")
    h = f.k // 2
    if not f[h].issubset(vplus) or not f2[h].issubset(vplus2):
        raise NotCompatible(f"V_{h} is not contained in V+")


def _slice_obstruction(tilde: LinearMap, f: Flag, f2: Flag) -> Optional[Obstruction]:
    for i in range(1, f.k + 1):
        if not maps_onto(tilde, f[i], f2[i]):
            return _obstruct(f"P cap V_{i}", lambda i=i: maps_onto(tilde, f[i], f2[i]))
    return None


def extend_hyperbolic(phi: LinearMap, vplus: Subspace, vminus: Subspace,
                      vplus2: Subspace, vminus2: Subspace, flag=None, flag2=None):
    """Extend phi on hyperbolic V = V+ (+) V- with V+ -> V'+, V- -> V'-, flag -> flag2.

    Returns an Isometry or an Obstruction naming the failed condition.
    """
    V, V2 = phi.source, phi.target
    for a, b in ((vplus, vminus), (vplus2, vminus2)):
        if not a.is_totally_isotropic() or not b.is_totally_isotropic() or a.dim != b.dim:
            raise HypothesisViolated("hyperbolic", "V+ and V- must be totally isotropic of equal dimension")
        _require_direct_sum([a, b])
    if V.n != V2.n:
        raise NotIsometricAmbients("hyperbolic spaces of different dimensions")
    f, f2 = _default_flag(V, flag), _default_flag(V2, flag2)
    _check_flags(f, f2, vplus, vplus2)
    parts, parts2 = [vplus, vminus], [vplus2, vminus2]
    obs = _first_failed(phi, parts, parts2, ("E cap V-", "E cap V+"))
    if obs is not None:
        return obs
    tilde = _induced(phi, parts, parts2)
    if not is_isometry(tilde):
        return _obstruct("phi~ isometry", lambda: is_isometry(_induced(phi, parts, parts2)))
    obs = _slice_obstruction(tilde, f, f2)
    if obs is not None:
        return obs
    tilde = as_isometry(tilde)
    fb, fb2 = refine_flag(f, vplus), refine_flag(f2, vplus2)
    first = extend_preserving_self_dual_flag(tilde, fb, fb2)
    phi1 = restrict(first, subspace_sum(tilde.dom, vplus))
    minus_flag = (V.zero(), vminus, V.whole())
    minus_flag2 = (V2.zero(), vminus2, V2.whole())
    out = extend_preserving_self_dual_flag(phi1, minus_flag, minus_flag2)
    return _check_result(out, phi, [(vplus, vplus2), (vminus, vminus2)] + list(zip(f, f2)))


def _check_decomposition(W: WittDecomposition, space: MetricSpace):
    bad = W.violations(space.whole())
    if bad:
        raise HypothesisViolated("witt decomposition", "invalid Witt decomposition: " + ", ".join(bad))


def extend_witt_decomposition(phi: LinearMap, W: WittDecomposition, W2: WittDecomposition,
                              flag=None, flag2=None, hat_witness: Optional[LinearMap] = None):
    """Extend phi to V -> V' respecting the Witt decompositions and the flags.

    Without flags this is the plain decomposition-preserving extension.
    ``hat_witness`` (an isometry of the anisotropic parts) is only needed over Q.
    """
    V, V2 = phi.source, phi.target
    _check_decomposition(W, V)
    _check_decomposition(W2, V2)
    if W.index != W2.index or W.anis.dim != W2.anis.dim:
        raise NotIsometricAmbients("Witt decompositions of different shapes")
    f, f2 = _default_flag(V, flag), _default_flag(V2, flag2)
    _check_flags(f, f2, W.plus, W2.plus)
    parts = [W.plus, W.anis, W.minus]
    parts2 = [W2.plus, W2.anis, W2.minus]
    names = ("E cap (V^ + V-)", "E cap (V- + V+)", "E cap (V+ + V^)")
    obs = _first_failed(phi, parts, parts2, names)
    if obs is not None:
        return obs
    tilde = _induced(phi, parts, parts2)
    if not is_isometry(tilde):
        return _obstruct("phi~ isometry", lambda: is_isometry(_induced(phi, parts, parts2)))
    obs = _slice_obstruction(tilde, f, f2)
    if obs is not None:
        return obs
    tilde = as_isometry(tilde)

    # anisotropic part
    e_hat = intersect(tilde.dom, W.anis)
    try:
        hat = witt_extend_within(restrict(tilde, e_hat), W.anis, W2.anis, hat_witness)
    except NotExtendable as exc:
        raise NotIsometricAmbients(str(exc)) from exc

    # hyperbolic part, in local coordinates of V+ (+) V-
    hyp, hyp2 = subspace_sum(W.plus, W.minus), subspace_sum(W2.plus, W2.minus)
    if hyp.dim == 0:
        out = hat
    else:
        lh, lh2 = local_space(hyp), local_space(hyp2)
        e_h = intersect(tilde.dom, hyp)
        loc = map_to_local(restrict(tilde, e_h), hyp, hyp2, lh, lh2)
        tf = Flag(lh, tuple(to_local(hyp, intersect(m, hyp), lh) for m in f))
        tf2 = Flag(lh2, tuple(to_local(hyp2, intersect(m, hyp2), lh2) for m in f2))
        res = extend_hyperbolic(loc, to_local(hyp, W.plus, lh), to_local(hyp, W.minus, lh),
                                to_local(hyp2, W2.plus, lh2), to_local(hyp2, W2.minus, lh2), tf, tf2)
        assert res, f"hyperbolic part failed although the conditions hold: {res}"
        h_map = map_from_local(res, hyp, hyp2)
        out = orthogonal_sum(hat, h_map) if hat.dom.dim else h_map
    out = as_isometry(LinearMap(out.dom, V2.whole(), out.images))
    return _check_result(out, phi, list(zip(parts, parts2)) + list(zip(f, f2)))


__all__ = [
    "ProjectionPair",
    "ProjectionTriple",
    "extend_direct_sum_pair",
    "extend_direct_sum_triple",
    "extend_hyperbolic",
    "extend_witt_decomposition",
    "induced_map_pair",
    "induced_map_triple",
    "projection_pair",
    "projection_triple",
    "refine_flag",
]
