"""Command-line front end: ``setla -f FILE COMMAND ...``."""

from __future__ import annotations

import argparse
import json
import shlex
import sys
from dataclasses import dataclass, field
from fractions import Fraction

from .analysis import (
    DECOMPOSITION_MODES,
    MODES,
    check_decomposition,
    is_generating,
    is_independent,
    is_simple,
    min_generating,
    span,
)
from .carrier import Element, element_from_value, parse_value, render
from .deffile import DefinitionFile, parse_definition, parse_subset
from .errors import BudgetExceeded, SetlaError, StructureInvalid
from .fuzzy import FuzzyMap, verify_fuzzy
from .lattice import LatticeSet
from .maps import LinearMap, check_projection_onto, enumerate_homs, verify_map
from .multi import MultiStructure, n_dimension, verify_multi
from .structures import (
    FAMILIES,
    AxiomReport,
    StructureDecl,
    check_substructure,
    classify_substructure,
    sorted_elements,
    verify_structure,
)

__all__ = ["Item", "Report", "emit_report", "run", "main"]

LIST_LIMIT = 64


@dataclass
class Item:
    name: str
    kind: str
    verdict: bool
    axioms: dict[str, bool] = field(default_factory=dict)
    witness: list[str] | None = None
    window: bool = False
    details: dict[str, object] = field(default_factory=dict)


@dataclass
class Report:
    command: str
    items: list[Item]

    @property
    def exit(self) -> int:
        return 0 if all(i.verdict for i in self.items) else 1


def fmt(x) -> str:
    """Render a witness component in literal syntax."""
    if isinstance(x, Element):
        return render(x)
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, Fraction, str)):
        return str(x)
    if x is None:
        return "none"
    if isinstance(x, (frozenset, set)):
        return fmt_set(x)
    if isinstance(x, (tuple, list)):
        return "(" + ", ".join(fmt(y) for y in x) + ")"
    return str(x)


def fmt_set(items) -> str:
    return "{" + ",".join(render(v) for v in sorted(items)) + "}"


def _witness(w) -> list[str] | None:
    if w is None:
        return None
    return [fmt(x) for x in w] if isinstance(w, tuple) else [fmt(w)]


def _from_axioms(name: str, kind: str, rep: AxiomReport) -> Item:
    bad = rep.failing()
    wit = None
    if bad is not None:
        wit = [bad.axiom] + (_witness(bad.witness) or [])
    return Item(name, kind, rep.holds, {e.axiom: e.holds for e in rep.entries}, wit, rep.window)


def _show_set(S) -> dict[str, object]:
    if isinstance(S, LatticeSet) and S.cardinality > LIST_LIMIT:
        return {"size": S.cardinality, "generators": fmt_set(S.generators())}
    if len(S) > LIST_LIMIT:
        return {"size": len(S)}
    return {"size": len(S), "elements": fmt_set(sorted_elements(S))}


# ---------------------------------------------------------------------------
# commands


def _structure(defs: DefinitionFile, name: str) -> StructureDecl:
    obj = defs[name]
    if not isinstance(obj, StructureDecl):
        raise SetlaError(f"{name} is a {defs.kind_of(name)}, not a structure")
    return obj


def _subset(d: StructureDecl, text: str):
    W = parse_subset(text.strip(), d.carrier)
    return d.carrier if W == "all" else W


def _scalars(d: StructureDecl, text: str) -> frozenset:
    raw = parse_value(text)
    if not (isinstance(raw, tuple) and raw[0] == "set"):
        raise SetlaError(f"expected a scalar set literal, got {text!r}")
    return frozenset(element_from_value(v, d.scalars.base) for v in raw[1])


def cmd_verify(defs, a) -> list[Item]:
    obj = defs[a.name]
    if isinstance(obj, StructureDecl):
        item = _from_axioms(a.name, "structure", verify_structure(obj, a.budget))
        item.details["family"] = obj.family
        return [item]
    if isinstance(obj, MultiStructure):
        item = _from_axioms(a.name, "multi", verify_multi(obj))
        item.details["n"] = obj.n
        return [item]
    if isinstance(obj, FuzzyMap):
        return [_from_axioms(a.name, "fuzzy", verify_fuzzy(obj))]
    r = verify_map(obj, a.budget)
    details = {"law": r.law, "injective": r.injective, "surjective": r.surjective}
    if r.idempotent is not None:
        details["idempotent"] = r.idempotent
    return [Item(a.name, "map", r.linear, {"linear": r.linear}, _witness(r.witness), r.window, details)]


def _dim_item(name: str, kind: str, res) -> Item:
    details = {
        "dimension": res.cardinality,
        "basis": fmt_set(res.elements),
        "certificate": res.certificate,
        "mode": res.mode,
    }
    return Item(name, kind, True, window=res.window, details=details)


def cmd_dim(defs, a) -> list[Item]:
    obj = defs[a.name]
    try:
        if isinstance(obj, MultiStructure):
            res = n_dimension(obj, a.mode, a.budget)
            items = [_dim_item(f"{a.name}[{i + 1}]", "structure", r) for i, r in enumerate(res.results)]
            summary = Item(a.name, "multi", True, details={"dimension": fmt(res.dims)})
            return [summary] + items
        return [_dim_item(a.name, "structure", min_generating(_structure(defs, a.name), a.mode, a.budget))]
    except StructureInvalid as exc:
        return [Item(a.name, defs.kind_of(a.name), False, details={"error": str(exc)})]


def cmd_span(defs, a) -> list[Item]:
    d = _structure(defs, a.name)
    B = sorted_elements(_subset(d, a.set))
    res = is_generating(d, B, a.mode)
    details = {"mode": res.mode}
    details.update({f"span_{k}": v for k, v in _show_set(span(d, B, a.mode)).items()})
    wit = ["uncovered", render(res.uncovered[0])] if res.uncovered else None
    return [Item(a.name, "structure", res.generating, {"generating": res.generating}, wit, res.window, details)]


def cmd_independent(defs, a) -> list[Item]:
    d = _structure(defs, a.name)
    res = is_independent(d, sorted_elements(_subset(d, a.set)), a.budget)
    return [Item(a.name, "structure", res.independent, {"independent": res.independent}, _witness(res.witness))]


def cmd_sub(defs, a) -> list[Item]:
    d = _structure(defs, a.name)
    W = _subset(d, a.set)
    T = _scalars(d, a.scalars) if a.scalars else None
    if a.classify:
        labels = classify_substructure(d, W, T)
        return [Item(a.name, "structure", bool(labels), details={"labels": ", ".join(labels) or "none"})]
    rep = check_substructure(d, W, a.as_family, T, a.budget)
    item = _from_axioms(a.name, "structure", rep)
    item.details["family"] = a.as_family or d.family
    return [item]


def cmd_decompose(defs, a) -> list[Item]:
    d = _structure(defs, a.name)
    parts = [_subset(d, p) for p in a.parts.split(";") if p.strip()]
    r = check_decomposition(d, parts, a.mode)
    grid = "; ".join(" ".join(row) for row in r.pairwise)
    axioms = {"covers": r.covers, "distinct": r.distinct}
    details = {"mode": r.mode, "pairwise": grid}
    return [Item(a.name, "structure", r.verdict, axioms, _witness(r.witness), details=details)]


def cmd_simple(defs, a) -> list[Item]:
    d = _structure(defs, a.name)
    r = is_simple(d, a.kind, a.budget)
    details = {"kind": r.kind}
    if r.simple is None:
        details["search"] = "budget exhausted"
    return [Item(a.name, "structure", bool(r.simple), {r.kind: bool(r.simple)}, _witness(r.witness), details=details)]


def cmd_homs(defs, a) -> list[Item]:
    V, W = _structure(defs, a.source), _structure(defs, a.target)
    try:
        r = enumerate_homs(V, W, a.budget)
    except BudgetExceeded as exc:
        found = len(exc.partial) if exc.partial is not None else 0
        return [Item(f"{a.source}->{a.target}", "homs", False, details={"search": "budget exhausted", "found": found})]
    details = {"count": len(r), "closed_under_scalars": r.closed}
    if len(r) <= 8:
        for m in r.maps:
            details[m.name] = ", ".join(f"{render(v)}->{render(w)}" for v, w in m.table)
    return [Item(f"{a.source}->{a.target}", "homs", True, witness=_witness(r.witness), window=r.window, details=details)]


def cmd_project(defs, a) -> list[Item]:
    m = defs[a.name]
    if not isinstance(m, LinearMap):
        raise SetlaError(f"{a.name} is not a map")
    r = check_projection_onto(m, _subset(m.source, a.onto))
    axioms = {"linear": r.linear, "range_inside": r.range_inside}
    return [Item(a.name, "map", r.projection, axioms, _witness(r.witness), r.window, {"idempotent": r.idempotent})]


COMMANDS = {
    "verify": cmd_verify,
    "dim": cmd_dim,
    "span": cmd_span,
    "independent": cmd_independent,
    "sub": cmd_sub,
    "decompose": cmd_decompose,
    "simple": cmd_simple,
    "homs": cmd_homs,
    "project": cmd_project,
}


def run(command: str, args: argparse.Namespace, defs: DefinitionFile) -> Report:
    return Report(args.echo, COMMANDS[command](defs, args))


# ---------------------------------------------------------------------------
# output


def _item_tree(i: Item) -> dict:
    out = {
        "name": i.name,
        "kind": i.kind,
        "verdict": "holds" if i.verdict else "fails",
        "axioms": {k: "holds" if v else "fails" for k, v in i.axioms.items()},
    }
    if i.witness is not None:
        out["witness"] = i.witness
    if i.window:
        out["window"] = True
    if i.details:
        out["details"] = {k: v for k, v in i.details.items()}
    return out


def emit_report(r: Report, fmt_name: str = "text") -> bytes:
    if fmt_name == "structured":
        tree = {"command": r.command, "items": [_item_tree(i) for i in r.items], "exit": r.exit}
        return (json.dumps(tree, indent=2, sort_keys=True) + "\n").encode("utf-8")
    lines = [f"command: {r.command}"]
    for i in r.items:
        lines.append(f"{i.name} ({i.kind}): {'holds' if i.verdict else 'fails'}")
        for k, v in i.axioms.items():
            lines.append(f"  {k}: {'holds' if v else 'fails'}")
        for k, v in i.details.items():
            lines.append(f"  {k}: {fmt(v)}")
        if i.witness is not None:
            lines.append("  witness: " + ", ".join(i.witness))
        if i.window:
            lines.append("  window: true")
    lines.append(f"exit: {r.exit}")
    return ("\n".join(lines) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# argument handling


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-f", "--file", dest="file", default=argparse.SUPPRESS, help="definition file")
    common.add_argument("--format", choices=("text", "structured"), default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="elementary-check budget")
    p = argparse.ArgumentParser(prog="setla", parents=[common], description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    s = sub.add_parser("verify", parents=[common])
    s.add_argument("name")
    s = sub.add_parser("dim", parents=[common])
    s.add_argument("name")
    s.add_argument("--mode", choices=MODES)
    s = sub.add_parser("span", parents=[common])
    s.add_argument("name")
    s.add_argument("--set", required=True)
    s.add_argument("--mode", choices=MODES)
    s = sub.add_parser("independent", parents=[common])
    s.add_argument("name")
    s.add_argument("--set", required=True)
    s = sub.add_parser("sub", parents=[common])
    s.add_argument("name")
    s.add_argument("--set", required=True)
    s.add_argument("--scalars")
    s.add_argument("--as", dest="as_family", choices=FAMILIES)
    s.add_argument("--classify", action="store_true")
    s = sub.add_parser("decompose", parents=[common])
    s.add_argument("name")
    s.add_argument("--parts", required=True)
    s.add_argument("--mode", choices=DECOMPOSITION_MODES, default="direct_sum")
    s = sub.add_parser("simple", parents=[common])
    s.add_argument("name")
    s.add_argument("--kind", choices=("simple", "pseudo_simple", "strongly_simple"), default="simple")
    s = sub.add_parser("homs", parents=[common])
    s.add_argument("source")
    s.add_argument("target")
    s = sub.add_parser("project", parents=[common])
    s.add_argument("name")
    s.add_argument("--onto", required=True)
    return p


def _echo(argv: list[str]) -> str:
    """The invocation minus file and format options, for stable reports."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok in ("-f", "--file", "--format"):
            skip = True
            continue
        if tok.startswith(("--file=", "--format=")):
            continue
        out.append(tok)
    return shlex.join(out)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = _parser().parse_args(argv)
    for key, default in (("file", None), ("format", "text"), ("budget", None)):
        if not hasattr(args, key):
            setattr(args, key, default)
    if args.file is None:
        print("setla: error: a definition file is required (-f FILE)", file=sys.stderr)
        return 2
    args.echo = _echo(argv)
    try:
        defs = parse_definition(args.file)
        report = run(args.command, args, defs)
    except OSError as exc:
        print(f"setla: error: {exc}", file=sys.stderr)
        return 2
    except SetlaError as exc:
        print(f"setla: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    sys.stdout.buffer.write(emit_report(report, args.format))
    sys.stdout.flush()
    return report.exit


if __name__ == "__main__":
    sys.exit(main())
