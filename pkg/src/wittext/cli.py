"""Command-line front end.

    wittext decompose instance.json
    wittext extend instance.json --theorem preserve-subspace
    wittext check | flags | oracle | closure instance.json

Every subcommand prints one JSON report.  Exit status: 0 when the question
was decided (either way), 2 for invalid input, 3 when the backend cannot
decide (e.g. an isotropy search over Q, or an exhaustive search too large).
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import decomp, extend, flags, oracle
from .errors import (
    BackendUnsupported,
    HypothesisViolated,
    InfiniteField,
    SearchSpaceTooLarge,
    WittError,
)
from .extend import Obstruction
from .instance import Instance, InstanceError, load_instance, map_matrix, rows_json, subspace_json
from .maps import LinearMap, apply, from_pairs, image_of, is_isometry, map_from_local, whole_map
from .space import Subspace, local_space
from .witt import witt_decompose, witt_extend

EXIT_DECIDED, EXIT_INVALID, EXIT_UNSUPPORTED = 0, 2, 3

# clauses of HypothesisViolated that are necessary conditions of the theorem,
# so their failure decides the question negatively
_NECESSARY = ("radical", "A~A'", "phi(E cap A)=E' cap A'")


def _is_necessary(exc: HypothesisViolated) -> bool:
    c = str(exc.clause)
    return c in _NECESSARY or (c.startswith("E_") and c[2:].isdigit())


class Args:
    """Task arguments: the instance's task.args overridden by --arg k=v (v may be JSON)."""

    def __init__(self, inst: Instance, overrides: Sequence[str]):
        self.inst = inst
        self.values: Dict[str, Any] = dict(inst.task.get("args", {}))
        for item in overrides:
            if "=" not in item:
                raise InstanceError("--arg", f"expected key=value, got {item!r}")
            k, v = item.split("=", 1)
            try:
                self.values[k] = json.loads(v)
            except json.JSONDecodeError:
                self.values[k] = v

    def get(self, key: str, default=None):
        return self.values.get(key, default)

    def need(self, key: str) -> str:
        if key not in self.values:
            raise InstanceError(f"task.args.{key}", "missing argument")
        return self.values[key]

    def subspace(self, key: str) -> Subspace:
        return self.inst.subspace(self.need(key))

    def opt_subspace(self, key: str) -> Optional[Subspace]:
        return self.inst.subspace(self.values[key]) if key in self.values else None

    def map(self, key: str = "map") -> LinearMap:
        if key not in self.values and len(self.inst.maps) == 1:
            return next(iter(self.inst.maps.values()))
        return self.inst.map(self.need(key))

    def flag(self, key: str):
        return self.inst.flag(self.need(key))

    def opt_flag(self, key: str):
        return self.inst.flag(self.values[key]) if key in self.values else None

    def space(self, key: str = "space"):
        if key not in self.values and len(self.inst.spaces) == 1:
            return next(iter(self.inst.spaces.values()))
        return self.inst.space_of(self.need(key))


# ---------------------------------------------------------------------------
# Independent verification of witnesses


def verify_witness(matrix: Sequence[Sequence], phi: Optional[LinearMap],
                   pairs: Sequence[Tuple[Subspace, Subspace]], source, target,
                   isometry: bool = True) -> bool:
    """Rebuild the map from its matrix and re-check every required property."""
    F = source.field
    m = whole_map(source, target, [[F(x) for x in r] for r in matrix])
    if isometry and not is_isometry(m):
        return False
    if not m.is_bijective():
        return False
    if phi is not None and any(apply(m, r) != img for r, img in zip(phi.dom.rows, phi.images)):
        return False
    return all(image_of(m, x) == y for x, y in pairs)


def _certificate(obs) -> Dict[str, Any]:
    if isinstance(obs, Obstruction):
        recheck = obs.recheck() if obs.recheck is not None else None
        return {"clause": obs.clause, "detail": obs.detail, "recheck_holds": recheck}
    return {"clause": str(obs.clause), "detail": obs.detail, "kind": "necessary hypothesis"}


def _outcome(result, phi, pairs, source, target, isometry=True) -> Dict[str, Any]:
    if isinstance(result, (Obstruction, HypothesisViolated)):
        return {"result": "none", "certificate": _certificate(result)}
    mat = map_matrix(result)
    return {"result": "some", "witness": mat,
            "verified": verify_witness(mat, phi, pairs, source, target, isometry)}


# ---------------------------------------------------------------------------
# Subcommands


def cmd_decompose(a: Args, opts) -> Dict[str, Any]:
    V = a.space()
    W = witt_decompose(V, seed=opts.seed)
    return {"space": V.name, "plus": subspace_json(W.plus), "anis": subspace_json(W.anis),
            "minus": subspace_json(W.minus), "index": W.index,
            "verified": W.is_valid(V.whole())}


def _flag_pairs(f, f2):
    return list(zip(f.members, f2.members)) if f is not None else []


def _run_extend(theorem: str, a: Args) -> Tuple[Any, Optional[LinearMap], List, Any, Any, bool]:
    """(result, phi, required pairs, source, target, is_isometry)."""
    if theorem == "mapping-subspace":
        e, e2 = a.subspace("E"), a.subspace("E2")
        return extend.find_isometry_mapping_subspace(e, e2), None, [(e, e2)], e.space, e2.space, True
    if theorem == "orthogonal-pair":
        e, e2, s, s2 = a.subspace("E"), a.subspace("E2"), a.subspace("A"), a.subspace("A2")
        res = extend.find_isometry_orthogonal_pair(e, e2, s, s2)
        return res, None, [(e, e2), (s, s2)], e.space, e2.space, True
    phi = a.map()
    V, V2 = phi.source, phi.target
    if theorem == "witt":
        return witt_extend(phi), phi, [], V, V2, True
    if theorem == "singular":
        return extend.extend_singular(phi), phi, [], V, V2, True
    if theorem in ("orthogonal", "preserve-subspace", "split"):
        s, s2 = a.subspace("A"), a.subspace("A2")
        fn = {"orthogonal": extend.extend_orthogonal,
              "preserve-subspace": extend.extend_preserving_subspace,
              "split": extend.extend_preserving_subspace_split}[theorem]
        return fn(phi, s, s2), phi, [(s, s2)], V, V2, True
    if theorem == "k3":
        s, s2 = a.subspace("V1"), a.subspace("V1p")
        return extend.k3_extend(phi, s, s2), phi, [(s, s2)], V, V2, True
    if theorem == "self-dual-flag":
        f, f2 = a.flag("flag"), a.flag("flag2")
        return extend.extend_preserving_self_dual_flag(phi, f, f2), phi, _flag_pairs(f, f2), V, V2, True
    if theorem == "direct-sum":
        names = [k for k in ("A", "B", "C") if k in a.values]
        parts = [a.subspace(k) for k in names]
        parts2 = [a.subspace(k + "2") for k in names]
        fn = decomp.extend_direct_sum_pair if len(parts) == 2 else decomp.extend_direct_sum_triple
        return fn(phi, *parts, *parts2), phi, list(zip(parts, parts2)), V, V2, False
    if theorem == "hyperbolic":
        p, m, p2, m2 = (a.subspace(k) for k in ("plus", "minus", "plus2", "minus2"))
        f, f2 = a.opt_flag("flag"), a.opt_flag("flag2")
        res = decomp.extend_hyperbolic(phi, p, m, p2, m2, f, f2)
        return res, phi, [(p, p2), (m, m2)] + _flag_pairs(f, f2), V, V2, True
    if theorem == "witt-decomposition":
        W, W2 = a.inst.decomposition(a.need("W")), a.inst.decomposition(a.need("W2"))
        f, f2 = a.opt_flag("flag"), a.opt_flag("flag2")
        res = decomp.extend_witt_decomposition(phi, W, W2, f, f2)
        pairs = [(W.plus, W2.plus), (W.anis, W2.anis), (W.minus, W2.minus)] + _flag_pairs(f, f2)
        return res, phi, pairs, V, V2, True
    raise InstanceError("theorem", f"unknown theorem {theorem!r}")


THEOREMS = ("witt", "singular", "mapping-subspace", "orthogonal", "orthogonal-pair", "k3",
            "self-dual-flag", "preserve-subspace", "split", "direct-sum", "hyperbolic", "witt-decomposition")


def cmd_extend(a: Args, opts) -> Dict[str, Any]:
    theorem = opts.theorem or a.inst.task.get("theorem")
    if not theorem:
        raise InstanceError("theorem", "no theorem given (use --theorem)")
    try:
        res, phi, pairs, V, V2, iso = _run_extend(theorem, a)
    except HypothesisViolated as exc:
        if not _is_necessary(exc):
            raise
        return {"theorem": theorem, **_outcome(exc, None, [], None, None)}
    return {"theorem": theorem, **_outcome(res, phi, pairs, V, V2, iso)}


def _report_json(rep) -> Dict[str, Any]:
    return {"C1": rep.c1, "C2": rep.c2, "C3": rep.c3, "C4": rep.c4,
            "phi_A_isometry": rep.phi_A_isometry, "phi_A_perp_isometry": rep.phi_A_perp_isometry,
            "first_failure": rep.first_failure(), "extendable": rep.extendable,
            "invariants_hold": rep.invariants_hold()}


def _candidate_maps(e: Subspace, e2: Subspace, budget: int):
    """All isometries e -> e2 (finite fields), through the oracle on local spaces."""
    le, le2 = local_space(e), local_space(e2)
    if le.n != le2.n:
        return
    if le.n == 0:
        yield from_pairs([], [], e.space, e2.space)
        return
    for iso in oracle.enumerate_isometries(le, le2, budget=budget):
        yield map_from_local(iso, e, e2)


def cmd_check(a: Args, opts) -> Dict[str, Any]:
    s, s2 = a.subspace("A"), a.subspace("A2")
    if "map" in a.values or ("E" not in a.values and a.inst.maps):
        phi = a.map()
        return {"report": _report_json(extend.check_conditions(phi, s, s2))}
    e, e2 = a.subspace("E"), a.subspace("E2")
    if not e.field.p:
        raise BackendUnsupported("enumerating candidate maps needs a finite field")
    rows = []
    for phi in _candidate_maps(e, e2, opts.budget):
        rep = extend.check_conditions(phi, s, s2)
        rows.append({"images": rows_json(e.field, phi.images), "report": _report_json(rep)})
    return {"domain": rows_json(e.field, e.rows), "candidates": rows,
            "extendable_count": sum(1 for r in rows if r["report"]["extendable"])}


def cmd_flags(a: Args, opts) -> Dict[str, Any]:
    kind = a.get("kind") or opts.kind or "witt-flag"
    if kind == "lattice":
        f = a.flag("flag")
        lat = flags.flag_lattice(f)
        return {"kind": kind, "dims": [list(r) for r in lat.dims], "T": subspace_json(lat.T),
                "self_dual": flags.is_self_dual(f)}
    if kind == "isotropic":
        e, e2, s, s2 = a.subspace("E"), a.subspace("E2"), a.subspace("A"), a.subspace("A2")
        res = flags.isotropic_pair_isometric(e, e2, s, s2)
        return {"kind": kind, **_outcome(res, None, [(e, e2), (s, s2)], e.space, e2.space)}
    f, f2 = a.flag("flag"), a.flag("flag2")
    pairs = _flag_pairs(f, f2)
    if kind == "witt-flag":
        res = flags.flags_isometric(f, f2)
    elif kind == "self-dual":
        res = flags.self_dual_flags_isometric(f, f2)
    elif kind == "pair":
        e, e2 = a.subspace("E"), a.subspace("E2")
        res = flags.pair_subspace_flag_isometric(e, e2, f, f2)
        pairs.append((e, e2))
    else:
        raise InstanceError("kind", f"unknown flag question {kind!r}")
    return {"kind": kind, **_outcome(res, None, pairs, f.ambient, f2.ambient)}


def _constraint_pairs(a: Args) -> List[Tuple[Subspace, Subspace]]:
    out = []
    for i, pair in enumerate(a.get("constraints", [])):
        if not isinstance(pair, list) or len(pair) != 2:
            raise InstanceError(f"task.args.constraints[{i}]", "expected [source, target]")
        out.append((a.inst.subspace(pair[0]), a.inst.subspace(pair[1])))
    return out


def cmd_oracle(a: Args, opts) -> Dict[str, Any]:
    phi = a.map() if ("map" in a.values) else None
    V = phi.source if phi else a.space("V") if "V" in a.values else a.space()
    V2 = phi.target if phi else a.space("V2") if "V2" in a.values else V
    pairs = _constraint_pairs(a)
    cons = oracle.ConstraintSet(tuple(pairs), phi)
    out: Dict[str, Any] = {}
    if opts.count or a.get("count"):
        out["count"] = oracle.count_isometries(V, V2, cons, budget=opts.budget)
    first = oracle.exists_isometry(V, V2, cons, budget=opts.budget)
    if first is None:
        out.update({"result": "none", "certificate": {"clause": "exhaustive search", "detail":
                    "no isometry satisfies the constraints"}})
    else:
        out.update(_outcome(first, phi, pairs, V, V2))
    return out


def cmd_closure(a: Args, opts) -> Dict[str, Any]:
    e, s = a.subspace("E"), a.subspace("A")
    e2, s2 = a.opt_subspace("E2"), a.opt_subspace("A2")
    cl = oracle.expression_closure(e, s, e2, s2)
    out: Dict[str, Any] = {"size": len(cl.members)}
    if e2 is None or s2 is None:
        out["members"] = [{"expression": cl.traces[x], **subspace_json(x)} for x in cl.members]
        return out
    table = oracle.closure_isometry_table(cl)
    out["table"] = [{"expression": r.expression, "member": subspace_json(r.member),
                     "image": subspace_json(r.image), "isometric": r.isometric} for r in table]
    out["all_isometric"] = all(r.isometric for r in table)
    if e.field.p:
        hit = oracle.exists_isometry(e.space, e2.space, oracle.ConstraintSet(((e, e2), (s, s2))),
                                     budget=opts.budget)
        out["simultaneous_isometry"] = hit is not None
    return out


COMMANDS: Dict[str, Callable[[Args, Any], Dict[str, Any]]] = {
    "decompose": cmd_decompose,
    "extend": cmd_extend,
    "check": cmd_check,
    "flags": cmd_flags,
    "oracle": cmd_oracle,
    "closure": cmd_closure,
}


_SCALAR_ROW = re.compile(r'\[\s*("[-0-9/]*"(?:,\s*"[-0-9/]*")*|[0-9, \n]*)\s*\]')


def dumps(report: Dict[str, Any]) -> str:
    """Indented JSON with each row of scalars kept on one line."""
    text = json.dumps(report, indent=2)
    return _SCALAR_ROW.sub(lambda m: "[" + ", ".join(
        x.strip() for x in m.group(1).split(",") if x.strip()) + "]", text)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="wittext", description="Extensions of isometries of "
                                 "symmetric bilinear spaces, with certificates.")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("instance", help="JSON instance file")
        p.add_argument("--arg", action="append", default=[], metavar="KEY=VALUE",
                       help="override an entry of task.args")
        p.add_argument("--seed", type=int, default=None, help="seed for randomized searches")
        p.add_argument("--budget", type=int, default=oracle.DEFAULT_BUDGET,
                       help="node budget for exhaustive searches")
        if name == "extend":
            p.add_argument("--theorem", choices=THEOREMS)
        if name == "flags":
            p.add_argument("--kind", choices=("witt-flag", "self-dual", "pair", "isotropic", "lattice"))
        if name == "oracle":
            p.add_argument("--count", action="store_true", help="also count all solutions")
    return ap


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    opts = build_parser().parse_args(argv)
    try:
        inst = load_instance(opts.instance)
        report = {"command": opts.command, **COMMANDS[opts.command](Args(inst, opts.arg), opts)}
        code = EXIT_DECIDED
    except (BackendUnsupported, InfiniteField, SearchSpaceTooLarge) as exc:
        report, code = {"command": opts.command, "error": str(exc), "kind": type(exc).__name__}, EXIT_UNSUPPORTED
    except InstanceError as exc:
        report = {"command": opts.command, "error": str(exc), "where": exc.where, "kind": "InstanceError"}
        code = EXIT_INVALID
    except (WittError, OSError) as exc:
        report, code = {"command": opts.command, "error": str(exc), "kind": type(exc).__name__}, EXIT_INVALID
    out.write(dumps(report) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
