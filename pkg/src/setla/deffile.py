"""Definition files: ``kind name { key = value; ... }`` blocks.

Kinds are ``structure``, ``fuzzy``, ``map`` and ``multi``.  Values run to
the next ``;`` or newline outside brackets.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .carrier import (
    Carrier,
    Element,
    ScalarSet,
    element_from_value,
    explicit,
    nat_window,
    parse_value,
    zn,
    zn_matrix,
    zn_poly,
    zn_tuple,
)
from .errors import DuplicateName, ParseError, UnknownName
from .fuzzy import FuzzyMap, builtin_eta
from .lattice import LatticeSet
from .maps import LinearMap, coordinate_rule, from_function
from .multi import MultiStructure
from .structures import StructureDecl

__all__ = ["Block", "DefinitionFile", "parse_text", "parse_definition", "parse_subset", "render_definition"]

KINDS = ("structure", "fuzzy", "map", "multi")
_KEYS = {
    "structure": ("family", "carrier", "ground", "scalars", "action", "zero", "addition"),
    "fuzzy": ("structure", "rule"),
    "map": ("source", "target", "rule"),
    "multi": ("components", "scalar_mode"),
}
_REQUIRED = {
    "structure": ("family", "carrier", "scalars"),
    "fuzzy": ("structure", "rule"),
    "map": ("source", "target", "rule"),
    "multi": ("components",),
}


@dataclass
class Block:
    kind: str
    name: str
    entries: dict[str, str]
    line: int = 0
    column: int = 0


@dataclass
class DefinitionFile:
    blocks: list[Block]
    objects: dict[str, object] = field(default_factory=dict)

    def __getitem__(self, name: str):
        if name not in self.objects:
            raise UnknownName(f"no declaration named {name!r}")
        return self.objects[name]

    def kind_of(self, name: str) -> str:
        for b in self.blocks:
            if b.name == name:
                return b.kind
        raise UnknownName(f"no declaration named {name!r}")


# ---------------------------------------------------------------------------
# scanning


class _Scanner:
    def __init__(self, text: str):
        # blank out comments, keeping offsets intact
        self.text = re.sub(r"#[^\n]*", lambda m: " " * len(m.group()), text)
        self.pos = 0

    def where(self, pos: int | None = None) -> tuple[int, int]:
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg: str, pos: int | None = None) -> ParseError:
        line, col = self.where(pos)
        return ParseError(msg, line, col)

    def skip(self, seps: str = "") -> None:
        t = self.text
        while self.pos < len(t) and (t[self.pos].isspace() or t[self.pos] in seps):
            self.pos += 1

    def ident(self, what: str) -> str:
        m = re.compile(r"[A-Za-z_][A-Za-z_0-9]*").match(self.text, self.pos)
        if m is None:
            raise self.error(f"expected {what}")
        self.pos = m.end()
        return m.group()

    def expect(self, ch: str) -> None:
        if not self.text.startswith(ch, self.pos):
            found = self.text[self.pos] if self.pos < len(self.text) else "end of file"
            raise self.error(f"expected {ch!r}, found {found!r}")
        self.pos += 1

    def value(self, open_pos: int) -> str:
        t, depth, start = self.text, 0, self.pos
        pairs = {"(": ")", "[": "]", "{": "}"}
        stack = []
        while self.pos < len(t):
            ch = t[self.pos]
            if depth == 0 and ch in ";\n}":
                break
            if ch in pairs:
                stack.append(pairs[ch])
                depth += 1
            elif ch in ")]}":
                if not stack or stack.pop() != ch:
                    raise self.error(f"unbalanced {ch!r}")
                depth -= 1
            self.pos += 1
        if depth:
            raise self.error("missing closing brace", open_pos)
        val = " ".join(t[start:self.pos].split())
        if not val:
            raise self.error("empty value")
        return val


def parse_blocks(text: str) -> list[Block]:
    sc = _Scanner(text)
    blocks: list[Block] = []
    seen: set[str] = set()
    while True:
        sc.skip(";")
        if sc.pos >= len(sc.text):
            return blocks
        start = sc.pos
        line, col = sc.where()
        kind = sc.ident("a block kind")
        if kind not in KINDS:
            raise sc.error(f"unknown block kind {kind!r}", start)
        sc.skip()
        name = sc.ident("a name")
        if name in seen:
            raise DuplicateName(f"{name!r} declared twice (line {line})")
        seen.add(name)
        sc.skip()
        sc.expect("{")
        entries: dict[str, str] = {}
        while True:
            sc.skip(";")
            if sc.pos >= len(sc.text):
                raise sc.error("missing closing brace", start)
            if sc.text[sc.pos] == "}":
                sc.pos += 1
                break
            kpos = sc.pos
            key = sc.ident("a key")
            if key not in _KEYS[kind]:
                raise sc.error(f"unknown key {key!r} for {kind}", kpos)
            if key in entries:
                raise sc.error(f"key {key!r} repeated", kpos)
            sc.skip()
            sc.expect("=")
            sc.skip()
            entries[key] = sc.value(start)
        for key in _REQUIRED[kind]:
            if key not in entries:
                raise ParseError(f"{kind} {name} lacks {key!r}", line, col)
        blocks.append(Block(kind, name, entries, line, col))


def render_definition(df: DefinitionFile | list[Block]) -> str:
    blocks = df.blocks if isinstance(df, DefinitionFile) else df
    out = []
    for b in blocks:
        out.append(f"{b.kind} {b.name} {{")
        out += [f"  {k} = {v}" for k, v in b.entries.items()]
        out.append("}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# building objects


def _call(text: str):
    """Split ``name(args) rest`` into (name, raw args, rest)."""
    m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)\s*(?:\((.*?)\))?\s*(.*)", text, re.S)
    if m is None:
        raise ParseError(f"cannot read {text!r}")
    name, args, rest = m.groups()
    return name, args, rest.strip()


def _int_args(args: str | None, name: str) -> list[int]:
    if not args:
        return []
    try:
        return [int(a) for a in args.split(",")]
    except ValueError:
        raise ParseError(f"{name} takes integer arguments, got {args!r}") from None


def _elements(text: str, carrier: Carrier) -> list[Element]:
    raw = parse_value(text)
    if not (isinstance(raw, tuple) and raw[0] == "set"):
        raise ParseError(f"expected a set literal, got {text!r}")
    return [element_from_value(v, carrier) for v in raw[1]]


def _carrier(text: str, addition: bool) -> Carrier:
    name, args, rest = _call(text)
    a = _int_args(args, name)
    simple = {"zn": (zn, 1), "zn_tuple": (zn_tuple, 2), "zn_matrix": (zn_matrix, 3), "zn_poly": (zn_poly, 2)}
    if name in simple:
        fn, arity = simple[name]
        if len(a) != arity or rest:
            raise ParseError(f"{name} takes {arity} integer arguments")
        return fn(*a)
    if name == "nat_window":
        if len(a) not in (1, 2) or rest:
            raise ParseError("nat_window takes a bound and an optional width")
        return nat_window(*a)
    if name in ("explicit", "explicit_nat"):
        if len(a) != 1 or not rest:
            raise ParseError(f"{name}(n) must be followed by a set literal")
        natural = name == "explicit_nat"
        ctx = nat_window(a[0]) if natural else Carrier("explicit", (a[0],))
        els = [element_from_value(v, ctx) for v in parse_value(rest)[1]]
        return explicit(els, a[0], addition, natural)
    raise ParseError(f"unknown carrier {name!r}")


def parse_subset(text: str, carrier: Carrier):
    """``all``, ``pattern(g1, ...)`` (the additive span of the g's) or a set literal."""
    if text == "all":
        return "all"
    if text.startswith("pattern"):
        raw = parse_value(text[len("pattern"):].strip())
        gens = [element_from_value(v, carrier) for v in raw[1]]
        if carrier.layout is None:
            raise ParseError("pattern grounds need a modular carrier")
        return LatticeSet(carrier.layout, [g.coords for g in gens])
    return frozenset(_elements(text, carrier))


def _scalar_base(carrier: Carrier) -> Carrier:
    if carrier.kind == "nat_window" or carrier.natural:
        return nat_window(carrier.params[0])
    return zn(carrier.params[0])


def _table_triples(body: str, base: Carrier, sep: str) -> list[tuple]:
    out = []
    for part in re.split(r"[;,]", body):
        part = part.strip()
        if not part:
            continue
        m = re.fullmatch(rf"(.+?)\s*{re.escape(sep)}\s*(.+?)\s*=\s*(.+)", part)
        if m is None:
            raise ParseError(f"bad table entry {part!r}")
        out.append(tuple(m.groups()))
    return out


def _scalars(entries: dict[str, str], carrier: Carrier) -> ScalarSet:
    text = entries["scalars"]
    zero = entries.get("zero", "auto")
    action = entries.get("action")
    if text.startswith("table"):
        body = text[len("table"):].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ParseError("scalar table must be enclosed in braces")
        base = _scalar_base(carrier)
        lit = lambda s: element_from_value(parse_value(s), base)
        triples = [tuple(lit(x) for x in t) for t in _table_triples(body[1:-1], base, "+")]
        members = sorted({x for t in triples for x in t})
        table = triples
    else:
        name, args, rest = _call(text)
        a = _int_args(args, name)
        if name == "zn" and len(a) == 1:
            base = zn(a[0])
        elif name == "nat_window" and len(a) == 1:
            base = nat_window(a[0])
        else:
            raise ParseError(f"unknown scalar set {text!r}")
        members = _elements(rest, base) if rest else None
        table = None
    action_entries = None
    if action is not None and action.startswith("table"):
        body = action[len("table"):].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ParseError("action table must be enclosed in braces")
        action_entries = []
        for g, v, w in _table_triples(body[1:-1], base, "."):
            action_entries.append(
                (
                    element_from_value(parse_value(g), base),
                    element_from_value(parse_value(v), carrier),
                    element_from_value(parse_value(w), carrier),
                )
            )
        action = "action_table"
    if zero == "none":
        z = None
    elif zero == "auto":
        z = "auto"
    else:
        z = element_from_value(parse_value(zero), base)
    try:
        return ScalarSet.of(base, members, table=table, zero=z, action=action, action_entries=action_entries)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def _structure(b: Block) -> StructureDecl:
    e = b.entries
    addition = e.get("addition", "none")
    if addition not in ("declared", "none"):
        raise ParseError("addition must be 'declared' or 'none'")
    carrier = _carrier(e["carrier"], addition == "declared")
    ground = parse_subset(e.get("ground", "all"), carrier)
    return StructureDecl(b.name, e["family"], carrier, ground, _scalars(e, carrier))


def _list_names(text: str) -> list[str]:
    m = re.fullmatch(r"\[(.*)\]", text)
    if m is None:
        raise ParseError(f"expected [A, B, ...], got {text!r}")
    return [x.strip() for x in m.group(1).split(",") if x.strip()]


def _map(b: Block, get) -> LinearMap:
    src, tgt = get(b.entries["source"]), get(b.entries["target"])
    rule = b.entries["rule"]
    if rule == "identity":
        return from_function(src, tgt, lambda v: v, b.name)
    if rule.startswith("table"):
        body = rule[len("table"):].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ParseError("map table must be enclosed in braces")
        pairs = []
        for part in _split_top(body[1:-1]):
            if "->" not in part:
                raise ParseError(f"bad map entry {part!r}")
            v, w = part.split("->")
            pairs.append((_lit(v, src.carrier), _lit(w, tgt.carrier)))
        return LinearMap(src, tgt, tuple(pairs), b.name)
    name, args, rest = _call(rule)
    vals = _plain(parse_value("(" + (args or "") + ")"))
    if name == "linear" and len(vals) == 1 and vals[0] and isinstance(vals[0][0], list):
        vals = vals[0]
    return from_function(src, tgt, coordinate_rule(name, vals, src, tgt), b.name)


def _plain(raw):
    """Tagged raw values to nested lists of ints."""
    if isinstance(raw, int):
        return raw
    if raw[0] in ("tuple", "list"):
        return [_plain(x) for x in raw[1]]
    raise ParseError(f"map rule arguments must be integers or lists, got {raw[0]}")


def _lit(text: str, carrier: Carrier) -> Element:
    return element_from_value(parse_value(text.strip()), carrier)


def _split_top(body: str) -> list[str]:
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch in "([{":
            depth += 1
        elif ch in ")]}":
            depth -= 1
        if ch in ",;" and depth == 0:
            parts.append("".join(cur).strip())
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur).strip())
    return [p for p in parts if p]


def _fuzzy(b: Block, get) -> FuzzyMap:
    d = get(b.entries["structure"])
    rule = b.entries["rule"]
    if rule.startswith("table"):
        body = rule[len("table"):].strip()
        if not (body.startswith("{") and body.endswith("}")):
            raise ParseError("fuzzy table must be enclosed in braces")
        values = []
        for part in _split_top(body[1:-1]):
            if "->" not in part:
                raise ParseError(f"bad membership entry {part!r}")
            v, x = part.split("->")
            try:
                values.append((_lit(v, d.carrier), Fraction(x.strip())))
            except ValueError:
                raise ParseError(f"bad rational {x.strip()!r}") from None
        return FuzzyMap(d, tuple(values))
    name, args, rest = _call(rule)
    params = [Fraction(a.strip()) if "/" in a else int(a) for a in args.split(",")] if args else []
    return builtin_eta(name, *params).apply(d)


def build(blocks: list[Block]) -> DefinitionFile:
    by_name = {b.name: b for b in blocks}
    objects: dict[str, object] = {}
    active: set[str] = set()

    def get(name: str):
        if name in objects:
            return objects[name]
        if name not in by_name:
            raise UnknownName(f"no declaration named {name!r}")
        if name in active:
            raise ParseError(f"circular reference through {name!r}")
        active.add(name)
        b = by_name[name]
        try:
            if b.kind == "structure":
                obj = _structure(b)
            elif b.kind == "map":
                obj = _map(b, get)
            elif b.kind == "fuzzy":
                obj = _fuzzy(b, get)
            else:
                comps = [get(n) for n in _list_names(b.entries["components"])]
                if not all(isinstance(c, StructureDecl) for c in comps):
                    raise ParseError(f"multi {b.name}: components must be structures")
                obj = MultiStructure(b.name, tuple(comps), b.entries.get("scalar_mode", "shared"))
        except (UnknownName, ParseError) as exc:
            if isinstance(exc, ParseError) and not exc.line:
                raise ParseError(f"{b.kind} {b.name}: {exc}", b.line, b.column) from None
            raise
        active.discard(name)
        objects[name] = obj
        return obj

    for b in blocks:
        get(b.name)
    return DefinitionFile(blocks, objects)


def parse_text(text: str) -> DefinitionFile:
    return build(parse_blocks(text))


def parse_definition(path) -> DefinitionFile:
    return parse_text(Path(path).read_text(encoding="utf-8"))

