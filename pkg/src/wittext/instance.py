"""JSON problem instances: loading with path-qualified diagnostics, plus output helpers.

Layout (scalars are strings, ``"1/2"`` style over Q)::

    {
      "field": "gf(3)",
      "spaces": {"V": {"gram": [["0", "1"], ["1", "0"]]}},
      "subspaces": {"E": {"space": "V", "rows": [["1", "0"]]}},
      "maps": {"phi": {"dom": "E", "cod": "V", "images": [["0", "1"]]}},
      "flags": {"F": {"space": "V", "members": ["E"]}},
      "decompositions": {"W": {"space": "V", "plus": "P", "anis": "Z", "minus": "M"}},
      "task": {"op": "extend", "theorem": "witt", "args": {"map": "phi"}}
    }

``images[i]`` is the image of the i-th row listed for the domain subspace.
Flag members are inner members; the zero space and the whole space are added
at the ends when missing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Sequence, Union

from .errors import WittError
from .field import FieldSpec
from .flags import Flag
from .maps import LinearMap, apply, from_pairs
from .space import MetricSpace, Subspace, span
from .witt import WittDecomposition


class InstanceError(WittError):
    """Malformed instance; ``where`` locates the offending field."""

    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}" if where else message)


@dataclass
class Instance:
    field: FieldSpec
    spaces: Dict[str, MetricSpace] = field(default_factory=dict)
    subspaces: Dict[str, Subspace] = field(default_factory=dict)
    maps: Dict[str, LinearMap] = field(default_factory=dict)
    flags: Dict[str, Flag] = field(default_factory=dict)
    decompositions: Dict[str, WittDecomposition] = field(default_factory=dict)
    task: Dict[str, Any] = field(default_factory=dict)
    # rows exactly as written, needed to interpret map images
    given_rows: Dict[str, List[tuple]] = field(default_factory=dict)

    def space_of(self, name: str) -> MetricSpace:
        return _lookup(self.spaces, name, "spaces")

    def subspace(self, name: str) -> Subspace:
        """A named subspace; the names of spaces denote their whole space."""
        if name in self.subspaces:
            return self.subspaces[name]
        if name in self.spaces:
            return self.spaces[name].whole()
        raise InstanceError("", f"unknown subspace {name!r}")

    def map(self, name: str) -> LinearMap:
        return _lookup(self.maps, name, "maps")

    def flag(self, name: str) -> Flag:
        return _lookup(self.flags, name, "flags")

    def decomposition(self, name: str) -> WittDecomposition:
        return _lookup(self.decompositions, name, "decompositions")


def _lookup(table, name, kind):
    try:
        return table[name]
    except KeyError:
        raise InstanceError(kind, f"unknown name {name!r}") from None


def _scalar(F: FieldSpec, x, where: str):
    if isinstance(x, bool) or not isinstance(x, (str, int)):
        raise InstanceError(where, f"expected a scalar string, got {x!r}")
    try:
        return F(x)
    except WittError as exc:
        raise InstanceError(where, str(exc)) from None


def _vector(F: FieldSpec, v, n: int, where: str) -> tuple:
    if not isinstance(v, list) or len(v) != n:
        raise InstanceError(where, f"expected a list of {n} scalars")
    return tuple(_scalar(F, x, f"{where}[{j}]") for j, x in enumerate(v))


def _rows(F: FieldSpec, rows, n: int, where: str) -> List[tuple]:
    if not isinstance(rows, list):
        raise InstanceError(where, "expected a list of rows")
    return [_vector(F, r, n, f"{where}[{i}]") for i, r in enumerate(rows)]


def _table(doc: dict, key: str) -> dict:
    t = doc.get(key, {})
    if not isinstance(t, dict):
        raise InstanceError(key, "expected an object keyed by name")
    return t


def _ref(table: dict, name, where: str):
    if not isinstance(name, str) or name not in table:
        raise InstanceError(where, f"unknown reference {name!r}")
    return table[name]


def parse_instance(doc: dict) -> Instance:
    if not isinstance(doc, dict):
        raise InstanceError("", "instance must be a JSON object")
    if "field" not in doc:
        raise InstanceError("field", "missing field tag")
    try:
        F = FieldSpec.from_tag(str(doc["field"]))
    except WittError as exc:
        raise InstanceError("field", str(exc)) from None
    inst = Instance(F)
    for name, spec in _table(doc, "spaces").items():
        where = f"spaces.{name}"
        gram = spec.get("gram") if isinstance(spec, dict) else None
        if not isinstance(gram, list) or not gram:
            raise InstanceError(f"{where}.gram", "expected a square matrix")
        rows = _rows(F, gram, len(gram), f"{where}.gram")
        try:
            inst.spaces[name] = MetricSpace(F, tuple(rows), name)
        except WittError as exc:
            raise InstanceError(f"{where}.gram", str(exc)) from None
    whole = {k: v.whole() for k, v in inst.spaces.items()}
    for name, spec in _table(doc, "subspaces").items():
        where = f"subspaces.{name}"
        if not isinstance(spec, dict):
            raise InstanceError(where, "expected an object")
        V = _ref(inst.spaces, spec.get("space"), f"{where}.space")
        rows = _rows(F, spec.get("rows", []), V.n, f"{where}.rows")
        inst.subspaces[name] = span(V, rows)
        inst.given_rows[name] = rows
    subs = {**whole, **inst.subspaces}
    for name, spec in _table(doc, "maps").items():
        where = f"maps.{name}"
        if not isinstance(spec, dict):
            raise InstanceError(where, "expected an object")
        dom_name = spec.get("dom")
        dom = _ref(subs, dom_name, f"{where}.dom")
        src = inst.given_rows.get(dom_name, list(dom.rows))
        target = _ref(inst.spaces, spec.get("cod", dom.space.name), f"{where}.cod")
        imgs = _rows(F, spec.get("images", []), target.n, f"{where}.images")
        if len(imgs) != len(src):
            raise InstanceError(f"{where}.images", f"expected {len(src)} images")
        try:
            inst.maps[name] = from_pairs(src, imgs, dom.space, target)
        except WittError as exc:
            raise InstanceError(where, str(exc)) from None
    for name, spec in _table(doc, "flags").items():
        where = f"flags.{name}"
        if not isinstance(spec, dict):
            raise InstanceError(where, "expected an object")
        V = _ref(inst.spaces, spec.get("space"), f"{where}.space")
        members = [_ref(subs, m, f"{where}.members[{i}]")
                   for i, m in enumerate(spec.get("members", []))]
        if not members or members[0].dim:
            members.insert(0, V.zero())
        if members[-1].dim != V.n:
            members.append(V.whole())
        try:
            inst.flags[name] = Flag(V, tuple(members))
        except WittError as exc:
            raise InstanceError(where, str(exc)) from None
    for name, spec in _table(doc, "decompositions").items():
        where = f"decompositions.{name}"
        if not isinstance(spec, dict):
            raise InstanceError(where, "expected an object")
        parts = [_ref(subs, spec.get(k), f"{where}.{k}") for k in ("plus", "anis", "minus")]
        inst.decompositions[name] = WittDecomposition(*parts)
    task = doc.get("task", {})
    if not isinstance(task, dict):
        raise InstanceError("task", "expected an object")
    inst.task = task
    return inst


def load_instance(source: Union[str, Path]) -> Instance:
    text = Path(source).read_text(encoding="utf-8")
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"line {exc.lineno}, column {exc.colno}", exc.msg) from None
    return parse_instance(doc)


# ---------------------------------------------------------------------------
# Output helpers


def rows_json(F: FieldSpec, rows: Sequence[Sequence]) -> List[List[str]]:
    return [[F.format(x) for x in r] for r in rows]


def subspace_json(s: Subspace) -> Dict[str, Any]:
    return {"dim": s.dim, "rows": rows_json(s.field, s.rows)}


def map_matrix(phi: LinearMap) -> List[List[str]]:
    """Images of the unit vectors (phi must be defined on the whole space)."""
    V = phi.source
    return rows_json(V.field, [apply(phi, V.unit(i)) for i in range(V.n)])
