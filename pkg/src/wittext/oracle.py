"""Exhaustive search over isometries of small spaces over GF(p).

The search places images of an adapted basis one vector at a time.  Every
candidate for the next image is filtered at once with numpy against the Gram
equations with already placed vectors and against the linear conditions
coming from the required images of subspaces.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .errors import InfiniteField, PairingIncomplete, SearchSpaceTooLarge, WittError
from .maps import Isometry, LinearMap, from_pairs
from .matrix import express, kernel_rows, transpose
from .space import (
    MetricSpace,
    Subspace,
    extend_basis,
    intersect,
    perp,
    span,
    subspace_sum,
)
from .witt import subspace_isometric

MAX_VECTORS = 200_000
DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class ConstraintSet:
    """Required images ``source -> target`` and an optional map to extend."""

    pairs: Tuple[Tuple[Subspace, Subspace], ...] = ()
    base: Optional[LinearMap] = None

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))


def _all_vectors(p: int, n: int) -> np.ndarray:
    if p ** n > MAX_VECTORS:
        raise SearchSpaceTooLarge(f"{p}^{n} candidate vectors per level")
    grids = np.indices((p,) * n).reshape(n, -1).T
    return np.ascontiguousarray(grids, dtype=np.int64)


def _closed_pairs(pairs, V, V2):
    """Add perps and pairwise intersections; they hold for any solution."""
    out = {}
    for s, t in pairs:
        if s.dim != t.dim:
            return None
        out.setdefault(s, set()).add(t)
    base = list(out.items())
    for s, ts in base:
        for t in list(ts):
            out.setdefault(perp(s), set()).add(perp(t))
    items = [(s, t) for s, ts in out.items() for t in ts]
    for i, (s, t) in enumerate(items):
        for s2, t2 in items[i + 1:]:
            out.setdefault(intersect(s, s2), set()).add(intersect(t, t2))
            out.setdefault(subspace_sum(s, s2), set()).add(subspace_sum(t, t2))
    res = []
    for s, ts in out.items():
        if len(ts) > 1:
            return None
        for t in ts:
            if s.dim != t.dim:
                return None
            if 0 < s.dim < V.n:
                res.append((s, t))
    return res


class _Search:
    def __init__(self, V: MetricSpace, V2: MetricSpace, constraints: ConstraintSet, budget: int):
        F = V.field
        if not F.p:
            raise InfiniteField("the oracle needs a finite field")
        if V2.field != F:
            raise WittError("spaces must share the field")
        self.V, self.V2, self.p, self.n = V, V2, F.p, V.n
        self.budget = budget
        self.nodes = 0
        if V.n != V2.n:
            self.impossible = True
            return
        base = constraints.base
        pairs = list(constraints.pairs)
        if base is not None:
            pairs.append((base.dom, span(V2, base.images)))
        pairs = _closed_pairs(pairs, V, V2)
        self.impossible = pairs is None
        if self.impossible:
            return
        # adapted basis: domain of the base map, then constraint sources by dimension
        fixed_src = list(base.dom.rows) if base is not None else []
        fixed_img = list(base.images) if base is not None else []
        basis = list(fixed_src)
        for s, _ in sorted(pairs, key=lambda st: st[0].dim):
            cur = span(V, basis)
            basis += extend_basis(cur.rows, subspace_sum(cur, s))
        basis += extend_basis(basis, V.whole())
        self.basis = basis
        self.nfixed = len(fixed_src)
        self.fixed_img = [tuple(v) for v in fixed_img]
        self.gram = np.array(V.gram_of(basis), dtype=np.int64) % self.p
        self.vecs = _all_vectors(self.p, self.n)
        g2 = np.array(V2.gram, dtype=np.int64)
        self.vg = (self.vecs @ g2) % self.p
        self.norms = np.einsum("ij,ij->i", self.vg, self.vecs) % self.p
        self.conds = self._conditions(pairs)

    def _conditions(self, pairs):
        """Per level t: list of (ann, coeffs, inv_ct) for new vectors of S cap B_t.

        Also records, per level, the targets S' whose span with the placed
        images must not grow (b_t outside S + B_{t-1}).
        """
        F, V = self.V.field, self.V
        conds: List[list] = [[] for _ in self.basis]
        self.avoid: List[list] = [[] for _ in self.basis]
        for s, t in pairs:
            for lvl in range(len(self.basis)):
                if not subspace_sum(s, span(V, self.basis[:lvl])).contains(self.basis[lvl]):
                    self.avoid[lvl].append(t)
            ann = kernel_rows(F, t.rows, self.n)
            annm = np.array(transpose(ann, self.n) if ann else [[0]] * self.n, dtype=np.int64)
            prev = V.zero()
            for lvl in range(len(self.basis)):
                bt = span(V, self.basis[:lvl + 1])
                cur = intersect(s, bt)
                for v in extend_basis(prev.rows, cur):
                    c = express(F, self.basis[:lvl + 1], v)
                    conds[lvl].append((annm, np.array(c[:lvl], dtype=np.int64), F.inv(c[lvl])))
                prev = cur
        return conds

    def _placed_ok(self, level: int, imgs) -> bool:
        y = np.array(imgs[level], dtype=np.int64)
        ok = self._filter(level, imgs[:level], y[None, :], np.array([0]))
        return bool(ok.size)

    def _filter(self, level: int, placed, cand: np.ndarray, idx: np.ndarray) -> np.ndarray:
        p = self.p
        vg = (cand @ np.array(self.V2.gram, dtype=np.int64)) % p if cand is not self.vecs else self.vg
        mask = np.ones(len(cand), dtype=bool)
        if cand is self.vecs:
            mask &= self.norms == self.gram[level, level]
        else:
            mask &= np.einsum("ij,ij->i", vg, cand) % p == self.gram[level, level]
        if placed:
            pm = np.array(placed, dtype=np.int64)
            mask &= np.all((vg @ pm.T) % p == self.gram[level, :level], axis=1)
        for annm, c, inv in self.conds[level]:
            w = (c @ np.array(placed, dtype=np.int64)) % p if level else np.zeros(self.n, dtype=np.int64)
            rhs = (-inv * (w @ annm)) % p
            mask &= np.all((cand @ annm) % p == rhs, axis=1)
        for t in self.avoid[level] + [self.V2.zero()]:
            if not mask.any():
                break
            ann = kernel_rows(self.V2.field, list(t.rows) + list(placed), self.n)
            if not ann:
                return idx[:0]
            annm = np.array(transpose(ann, self.n), dtype=np.int64)
            mask &= np.any((cand @ annm) % p != 0, axis=1)
        return idx[mask]

    def run(self) -> Iterator[List[tuple]]:
        if self.impossible:
            return
        imgs = list(self.fixed_img)
        for lvl in range(self.nfixed):
            if not self._placed_ok(lvl, imgs):
                return
        yield from self._extend(imgs)

    def _extend(self, imgs):
        level = len(imgs)
        if level == self.n:
            yield list(imgs)
            return
        self.nodes += 1
        if self.nodes > self.budget:
            raise SearchSpaceTooLarge(f"search exceeded {self.budget} nodes")
        idx = self._filter(level, imgs, self.vecs, np.arange(len(self.vecs)))
        own = tuple(int(x) for x in self.basis[level])
        order = sorted(idx.tolist(), key=lambda i: 0 if tuple(self.vecs[i].tolist()) == own else 1)
        for i in order:
            y = tuple(int(x) for x in self.vecs[i])
            imgs.append(y)
            yield from self._extend(imgs)
            imgs.pop()

    def to_isometry(self, imgs) -> Isometry:
        m = from_pairs(self.basis, imgs, self.V, self.V2)
        return Isometry(m.dom, self.V2.whole(), m.images)


def enumerate_isometries(V: MetricSpace, V2: MetricSpace,
                         constraints: Optional[ConstraintSet] = None,
                         budget: int = DEFAULT_BUDGET) -> Iterator[Isometry]:
    """Every isometry V -> V2 meeting the constraints, each exactly once."""
    s = _Search(V, V2, constraints or ConstraintSet(), budget)
    for imgs in s.run():
        yield s.to_isometry(imgs)


def exists_isometry(V: MetricSpace, V2: MetricSpace,
                    constraints: Optional[ConstraintSet] = None,
                    budget: int = DEFAULT_BUDGET) -> Optional[Isometry]:
    """The first isometry in search order meeting the constraints, or None."""
    return next(enumerate_isometries(V, V2, constraints, budget), None)


def count_isometries(V: MetricSpace, V2: MetricSpace,
                     constraints: Optional[ConstraintSet] = None,
                     budget: int = DEFAULT_BUDGET) -> int:
    s = _Search(V, V2, constraints or ConstraintSet(), budget)
    return sum(1 for _ in s.run())


def find_extension(phi: LinearMap, pairs: Sequence[Tuple[Subspace, Subspace]] = (),
                   budget: int = DEFAULT_BUDGET) -> Optional[Isometry]:
    """Exhaustive counterpart of the extension theorems."""
    return exists_isometry(phi.source, phi.target, ConstraintSet(tuple(pairs), phi), budget)


# ---------------------------------------------------------------------------
# Expression closures


@dataclass
class ExpressionClosure:
    """Subspaces reachable from the generators by +, cap and perp.

    ``traces`` records an expression producing each member; when primed
    generators are given, ``pairing`` sends each member to the value of the
    same expression on them (None where two expressions disagree).
    """

    generators: Dict[str, Subspace]
    members: List[Subspace]
    traces: Dict[Subspace, str]
    pairing: Dict[Subspace, Optional[Subspace]] = field(default_factory=dict)
    primed: Optional[Dict[str, Subspace]] = None


def expression_closure(e: Subspace, a: Subspace, e2: Optional[Subspace] = None,
                       a2: Optional[Subspace] = None) -> ExpressionClosure:
    V = e.space
    paired = e2 is not None and a2 is not None
    V2 = e2.space if paired else None
    gens = {"0": (V.zero(), V2.zero() if paired else None),
            "V": (V.whole(), V2.whole() if paired else None),
            "E": (e, e2), "A": (a, a2)}
    traces: Dict[Subspace, str] = {}
    pairing: Dict[Subspace, Optional[Subspace]] = {}
    seen = set()
    frontier = []

    def add(x, x2, expr):
        key = (x, x2)
        if key in seen:
            return
        seen.add(key)
        frontier.append(key)
        if x not in traces:
            traces[x] = expr
            pairing[x] = x2
        elif pairing[x] != x2:
            pairing[x] = None

    for name, (x, x2) in gens.items():
        add(x, x2, name)
    done: List[tuple] = []
    while frontier:
        cur = frontier.pop(0)
        x, x2 = cur
        tx = traces[x]
        add(perp(x), perp(x2) if paired else None, f"({tx})^perp")
        for y, y2 in done + [cur]:
            ty = traces[y]
            add(subspace_sum(x, y), subspace_sum(x2, y2) if paired else None, f"({tx} + {ty})")
            add(intersect(x, y), intersect(x2, y2) if paired else None, f"({tx} cap {ty})")
        done.append(cur)
    members = sorted(traces, key=lambda s: (s.dim, s.rows))
    return ExpressionClosure({"E": e, "A": a}, members, traces,
                             pairing if paired else {},
                             {"E": e2, "A": a2} if paired else None)


@dataclass(frozen=True)
class TableRow:
    member: Subspace
    image: Subspace
    isometric: bool
    expression: str


def closure_isometry_table(cl: ExpressionClosure) -> List[TableRow]:
    """Rows (X, pi(X), X ~ pi(X)) over the closure; needs a total pairing."""
    if cl.primed is None:
        raise PairingIncomplete("closure was built without primed generators")
    missing = [cl.traces[x] for x in cl.members if cl.pairing.get(x) is None]
    if missing:
        raise PairingIncomplete("expressions with ambiguous images: " + ", ".join(missing))
    return [TableRow(x, cl.pairing[x], subspace_isometric(x, cl.pairing[x]), cl.traces[x])
            for x in cl.members]


__all__ = [
    "ConstraintSet",
    "ExpressionClosure",
    "TableRow",
    "closure_isometry_table",
    "count_isometries",
    "enumerate_isometries",
    "exists_isometry",
    "expression_closure",
    "find_extension",
]
