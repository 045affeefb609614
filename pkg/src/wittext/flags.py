"""Flags of subspaces and the decision procedures for their isometry."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .errors import FlagsNotIsometric, NotSelfDual, NotTotallyIsotropic, WittError
from .extend import (
    Obstruction,
    _obstruct,
    _check_result,
    extend_preserving_self_dual_flag,
    extend_preserving_subspace_split,
)
from .maps import Isometry, LinearMap, from_pairs, image_of, restrict
from .space import MetricSpace, Subspace, complement, intersect, perp, subspace_sum, sum_all
from .witt import find_subspace_isometry, is_isometric


@dataclass(frozen=True)
class Flag:
    """A chain {0} = V_0 <= V_1 <= ... <= V_k = V (repeats allowed)."""

    ambient: MetricSpace
    members: Tuple[Subspace, ...]

    def __post_init__(self):
        ms = tuple(self.members)
        object.__setattr__(self, "members", ms)
        if not ms or ms[0].dim != 0 or ms[-1].dim != self.ambient.n:
            raise WittError("a flag runs from the zero space to the whole space")
        for x, y in zip(ms, ms[1:]):
            if not x.issubset(y):
                raise WittError("flag members must be nested")

    @classmethod
    def of(cls, ambient: MetricSpace, inner: Sequence[Subspace]) -> "Flag":
        """The flag {0} <= inner... <= V."""
        return cls(ambient, (ambient.zero(), *inner, ambient.whole()))

    @property
    def k(self) -> int:
        return len(self.members) - 1

    def __len__(self):
        return len(self.members)

    def __getitem__(self, i) -> Subspace:
        return self.members[i]

    def __iter__(self):
        return iter(self.members)

    def dims(self) -> Tuple[int, ...]:
        return tuple(m.dim for m in self.members)


def is_self_dual(flag: Flag) -> bool:
    """V_i^perp = V_{k-i} for every i."""
    k = flag.k
    return all(perp(flag[i]) == flag[k - i] for i in range(k + 1))


def _require_self_dual(*flags: Flag):
    for f in flags:
        if not is_self_dual(f):
            raise NotSelfDual("flag is not self-dual")


def self_dual_flags_isometric(flag: Flag, flag2: Flag, v_witness: Optional[LinearMap] = None):
    """An isometry carrying one self-dual flag onto the other, or an Obstruction."""
    _require_self_dual(flag, flag2)
    if flag.k != flag2.k:
        return _obstruct("length", lambda: flag.k == flag2.k)
    if not is_isometric(flag.ambient, flag2.ambient):
        return _obstruct("V~V'", lambda: is_isometric(flag.ambient, flag2.ambient))
    for i in range(1, flag.k // 2 + 1):
        if flag[i].dim != flag2[i].dim:
            return _obstruct(f"dim V_{i}", lambda i=i: flag[i].dim == flag2[i].dim)
    empty = from_pairs([], [], flag.ambient, flag2.ambient)
    return extend_preserving_self_dual_flag(empty, flag, flag2, v_witness)


@dataclass(frozen=True)
class FlagLattice:
    """Entries V_i^perp cap V_j of the lattice L(V) and their dimensions."""

    entries: Tuple[Tuple[Subspace, ...], ...]
    T: Subspace

    @property
    def dims(self) -> Tuple[Tuple[int, ...], ...]:
        return tuple(tuple(x.dim for x in row) for row in self.entries)


def flag_lattice(flag: Flag) -> FlagLattice:
    perps = [perp(m) for m in flag]
    entries = tuple(tuple(intersect(pi, vj) for vj in flag) for pi in perps)
    t = sum_all(flag.ambient, (entries[i][i] for i in range(flag.k + 1)))
    return FlagLattice(entries, t)


def _cells(lat: FlagLattice, k: int) -> List[List[Subspace]]:
    """Cells C_ij (j <= i): complements of L_{i,j-1} + L_{i+1,j} inside L_ij."""
    e = lat.entries
    out = []
    for i in range(k + 1):
        row = []
        for j in range(k + 1):
            if j > i:
                row.append(None)
                continue
            lij = e[i][j]
            below = lij.space.zero()
            if j > 0:
                below = subspace_sum(below, e[i][j - 1])
            if i < k:
                below = subspace_sum(below, e[i + 1][j])
            row.append(complement(below, lij))
        out.append(row)
    return out


def flags_isometric(flag: Flag, flag2: Flag, v_witness: Optional[LinearMap] = None):
    """An isometry V -> V' with V_i -> V'_i for all i, or an Obstruction."""
    k = flag.k
    if k != flag2.k:
        return _obstruct("length", lambda: flag.k == flag2.k)
    for i in range(k + 1):
        if find_subspace_isometry(flag[i], flag2[i]) is None:
            return _obstruct(f"V_{i}~V'_{i}",
                             lambda i=i: find_subspace_isometry(flag[i], flag2[i]) is not None)
    lat, lat2 = flag_lattice(flag), flag_lattice(flag2)
    for i in range(1, k):
        for j in range(1, i):
            if lat.dims[i][j] != lat2.dims[i][j]:
                return _obstruct(f"dim(V_{i}^perp cap V_{j})",
                                 lambda i=i, j=j: flag_lattice(flag).dims[i][j]
                                 == flag_lattice(flag2).dims[i][j])
    # phi_0 on T matching the lattice cell by cell
    c, c2 = _cells(lat, k), _cells(lat2, k)
    src, tgt = [], []
    for i in range(k + 1):
        for j in range(i + 1):
            assert c[i][j].dim == c2[i][j].dim, "lattice cells differ"
            src.extend(c[i][j].rows)
            tgt.extend(c2[i][j].rows)
    V, V2 = flag.ambient, flag2.ambient
    cur: LinearMap = from_pairs(src, tgt, V, V2)
    assert cur.dom == lat.T
    result = cur
    for j in range(k):
        result = extend_preserving_subspace_split(cur, flag[j + 1], flag2[j + 1], v_witness=v_witness)
        assert result, f"flag step {j} failed: {result}"
        cur = restrict(result, subspace_sum(lat.T, flag[j + 1]))
    assert all(image_of(result, x) == y for x, y in zip(flag, flag2))
    return result


def slices(e: Subspace, flag: Flag) -> List[Subspace]:
    """E_i = E cap V_i."""
    return [intersect(e, m) for m in flag]


def pair_subspace_flag_isometric(e: Subspace, e2: Subspace, flag: Flag, flag2: Flag,
                                 v_witness: Optional[LinearMap] = None):
    """An isometry sending e -> e2 and the self-dual flag onto flag2, or an Obstruction."""
    _require_self_dual(flag, flag2)
    k = flag.k
    if k != flag2.k or any(flag[i].dim != flag2[i].dim for i in range(k + 1)):
        raise FlagsNotIsometric("the self-dual flags are not isometric")
    es, es2 = slices(e, flag), slices(e2, flag2)
    for i in range(1, k + 1):
        if find_subspace_isometry(es[i], es2[i]) is None:
            return _obstruct(f"E_{i}~E'_{i}",
                             lambda i=i: find_subspace_isometry(es[i], es2[i]) is not None)
    for i in range(1, k + 1):
        pi, pi2 = perp(es[i]), perp(es2[i])
        for j in range(1, i):
            lhs = intersect(pi, es[j])
            if i + j <= k:
                assert lhs == es[j]
            if k - i < j and lhs.dim != intersect(pi2, es2[j]).dim:
                return _obstruct(f"dim(E_{i}^perp cap E_{j})",
                                 lambda i=i, j=j: intersect(perp(es[i]), es[j]).dim
                                 == intersect(perp(es2[i]), es2[j]).dim)
    V, V2 = flag.ambient, flag2.ambient
    eflag = Flag(V, tuple(es) + (V.whole(),))
    eflag2 = Flag(V2, tuple(es2) + (V2.whole(),))
    psi = flags_isometric(eflag, eflag2, v_witness)
    assert psi, f"slice flags not isometric: {psi}"
    out = extend_preserving_self_dual_flag(restrict(psi, e), flag, flag2, v_witness)
    return _check_result(out, restrict(psi, e), [(e, e2)])


def isotropic_pair_isometric(e: Subspace, e2: Subspace, a: Subspace, a2: Subspace,
                             v_witness: Optional[LinearMap] = None):
    """An isometry with e -> e2 and a -> a2 for totally isotropic a, a2, or an Obstruction."""
    if not a.is_totally_isotropic() or not a2.is_totally_isotropic():
        raise NotTotallyIsotropic("A and A' must be totally isotropic")
    if find_subspace_isometry(e, e2) is None:
        return _obstruct("E~E'", lambda: find_subspace_isometry(e, e2) is not None)
    if a.dim != a2.dim:
        return _obstruct("A~A'", lambda: a.dim == a2.dim)
    ap, ap2 = perp(a), perp(a2)
    ep, ep2 = perp(e), perp(e2)
    checks = [
        ("E cap A^perp ~ E' cap A'^perp",
         lambda: find_subspace_isometry(intersect(e, ap), intersect(e2, ap2)) is not None),
        ("dim(E cap A)", lambda: intersect(e, a).dim == intersect(e2, a2).dim),
        ("dim(E^perp cap E cap A)",
         lambda: intersect(intersect(ep, e), a).dim == intersect(intersect(ep2, e2), a2).dim),
        ("dim(E^perp cap E cap A^perp)",
         lambda: intersect(intersect(ep, e), ap).dim == intersect(intersect(ep2, e2), ap2).dim),
    ]
    for name, test in checks:
        if not test():
            return _obstruct(name, test)
    V, V2 = e.space, e2.space
    flag = Flag(V, (V.zero(), a, ap, V.whole()))
    flag2 = Flag(V2, (V2.zero(), a2, ap2, V2.whole()))
    out = pair_subspace_flag_isometric(e, e2, flag, flag2, v_witness)
    assert out, f"conditions held but the flag theorem failed: {out}"
    return out


__all__ = [
    "Flag",
    "FlagLattice",
    "Obstruction",
    "flag_lattice",
    "flags_isometric",
    "is_self_dual",
    "isotropic_pair_isometric",
    "pair_subspace_flag_isometric",
    "self_dual_flags_isometric",
    "slices",
    "Isometry",
]
