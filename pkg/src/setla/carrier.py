"""Ground-value domains: elements, carriers, scalar sets and the scalar action.

Every other module touches values only through this interface.  Elements are
immutable and totally ordered; the order is the canonical order used for
enumeration, witnesses and tie-breaking.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import (
    MissingTableEntry,
    NonAdditiveCarrier,
    ParseError,
    SetlaError,
    WindowOverflow,
)

__all__ = [
    "SHAPES",
    "Element",
    "Carrier",
    "ScalarSet",
    "UndefinedSum",
    "zn",
    "zn_tuple",
    "zn_matrix",
    "zn_poly",
    "nat_window",
    "explicit",
    "enumerate_carrier",
    "add",
    "act",
    "zero",
    "zero_like",
    "neg",
    "canonical_key",
    "sort_elements",
    "render",
    "parse_value",
    "parse_literal",
    "parse_set",
    "element_from_value",
]

SHAPES = ("scalar", "tuple", "matrix", "poly", "nat")
_RANK = {s: i for i, s in enumerate(SHAPES)}


class UndefinedSum(NonAdditiveCarrier):
    """Addition of two elements of different shapes."""


class Element:
    """A single ground value.

    ``shape`` is one of :data:`SHAPES`; ``dims`` is ``()`` for scalars,
    ``(k,)`` for tuples and polynomials (k coefficients), ``(r, c)`` for
    matrices.  ``mod`` is the modulus, or the window bound for ``nat``.
    """

    __slots__ = ("shape", "dims", "coords", "mod", "_key", "_hash")

    def __init__(self, shape: str, dims: tuple[int, ...], coords: Sequence[int], mod: int):
        coords = tuple(int(c) for c in coords)
        if shape not in _RANK:
            raise ValueError(f"unknown shape {shape!r}")
        size = 1
        for d in dims:
            size *= d
        if len(coords) != size:
            raise ValueError(f"{shape}{dims} needs {size} coordinates, got {len(coords)}")
        if shape == "nat":
            if any(c < 0 or c > mod for c in coords):
                raise ValueError(f"coordinate outside window [0, {mod}]: {coords}")
        elif any(c < 0 or c >= mod for c in coords):
            raise ValueError(f"coordinate not reduced mod {mod}: {coords}")
        key = (_RANK[shape], coords, tuple(dims), mod)
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "dims", tuple(dims))
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "mod", mod)
        object.__setattr__(self, "_key", key)
        object.__setattr__(self, "_hash", hash(key))

    def __setattr__(self, name, value):
        raise AttributeError("Element is immutable")

    def __reduce__(self):
        return (Element, (self.shape, self.dims, self.coords, self.mod))

    @property
    def sort_key(self) -> tuple:
        return self._key

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    @property
    def layout(self) -> tuple:
        """Shape, dims and modulus: everything except the coordinates."""
        return (self.shape, self.dims, self.mod)

    def with_coords(self, coords: Sequence[int]) -> "Element":
        return Element(self.shape, self.dims, coords, self.mod)

    def _derive(self, coords: tuple[int, ...]) -> "Element":
        """Same layout, new coordinates already known to be in range."""
        e = object.__new__(Element)
        key = (self._key[0], coords, self.dims, self.mod)
        setter = object.__setattr__
        setter(e, "shape", self.shape)
        setter(e, "dims", self.dims)
        setter(e, "coords", coords)
        setter(e, "mod", self.mod)
        setter(e, "_key", key)
        setter(e, "_hash", hash(key))
        return e

    def __eq__(self, other):
        return isinstance(other, Element) and self._key == other._key

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __le__(self, other):
        return self._key <= other._key

    def __gt__(self, other):
        return self._key > other._key

    def __ge__(self, other):
        return self._key >= other._key

    def __repr__(self):
        return render(self)


def canonical_key(e: Element) -> bytes:
    """Injective byte key that sorts exactly like the canonical order."""
    out = bytearray([_RANK[e.shape]])
    for c in e.coords:
        out += b"\x01" + c.to_bytes(8, "big")
    out += b"\x00"
    for d in e.dims:
        out += b"\x01" + d.to_bytes(8, "big")
    out += b"\x00" + e.mod.to_bytes(8, "big")
    return bytes(out)


def sort_elements(items: Iterable[Element]) -> tuple[Element, ...]:
    return tuple(sorted(set(items)))


def zero_like(e: Element) -> Element:
    """The zero of ``e``'s shape."""
    return Element(e.shape, e.dims, (0,) * len(e.coords), e.mod)


def neg(e: Element) -> Element:
    if e.shape == "nat":
        if e.is_zero:
            return e
        raise WindowOverflow(f"no additive inverse of {render(e)} among naturals")
    return e._derive(tuple((-c) % e.mod for c in e.coords))


# ---------------------------------------------------------------------------
# carriers


@dataclass(frozen=True)
class Carrier:
    """A finite ambient domain.

    ``kind`` is one of ``zn``, ``zn_tuple``, ``zn_matrix``, ``zn_poly``,
    ``nat_window`` or ``explicit``.  For explicit carriers ``members`` holds
    the elements, ``params`` holds the literal context ``(modulus,)`` and
    ``declared_addition`` says whether coordinatewise addition is allowed.
    """

    kind: str
    params: tuple[int, ...]
    members: tuple[Element, ...] = ()
    declared_addition: bool = False
    natural: bool = False

    def __post_init__(self):
        if self.kind == "explicit":
            ordered = tuple(sorted(self.members))
            if len(set(ordered)) != len(ordered):
                raise ValueError("explicit carrier lists an element twice")
            object.__setattr__(self, "members", ordered)

    # shape of a generic element (None for explicit carriers)
    @property
    def layout(self) -> tuple | None:
        k, p = self.kind, self.params
        if k == "zn":
            return ("scalar", (), p[0])
        if k == "zn_tuple":
            return ("tuple", (p[1],), p[0])
        if k == "zn_matrix":
            return ("matrix", (p[1], p[2]), p[0])
        if k == "zn_poly":
            return ("poly", (p[1] + 1,), p[0])
        if k == "nat_window":
            return ("nat", () if len(p) == 1 else (p[1],), p[0])
        return None

    @property
    def modulus(self) -> int:
        return self.params[0]

    @property
    def modular(self) -> bool:
        """True for the structured ``zn*`` kinds."""
        return self.kind.startswith("zn")

    @property
    def ncoords(self) -> int:
        lay = self.layout
        n = 1
        for d in lay[1]:
            n *= d
        return n

    @cached_property
    def cardinality(self) -> int:
        if self.kind == "explicit":
            return len(self.members)
        if self.kind == "nat_window":
            return (self.params[0] + 1) ** self.ncoords
        return self.params[0] ** self.ncoords

    def __len__(self) -> int:
        return self.cardinality

    @property
    def additive(self) -> bool:
        return self.kind != "explicit" or self.declared_addition

    @property
    def window_truncated(self) -> bool:
        return self.kind == "nat_window" or (self.kind == "explicit" and self.natural)

    def make(self, coords: Sequence[int]) -> Element:
        shape, dims, mod = self.layout
        return Element(shape, dims, coords, mod)

    def __contains__(self, e) -> bool:
        if not isinstance(e, Element):
            return False
        if self.kind == "explicit":
            return e in self._member_set
        return e.layout == self.layout

    @cached_property
    def _member_set(self) -> frozenset:
        return frozenset(self.members)

    def __iter__(self) -> Iterator[Element]:
        if self.kind == "explicit":
            yield from self.members
            return
        shape, dims, mod = self.layout
        top = mod + 1 if shape == "nat" else mod
        for coords in itertools.product(range(top), repeat=self.ncoords):
            yield Element(shape, dims, coords, mod)

    def zero(self) -> Element | None:
        if self.kind == "explicit":
            for e in self.members:
                if e.is_zero:
                    return e
            return None
        return self.make((0,) * self.ncoords)

    def add(self, a: Element, b: Element) -> Element:
        if not self.additive:
            raise NonAdditiveCarrier("explicit carrier has no declared addition")
        return _add(a, b)

    def describe(self) -> str:
        if self.kind == "explicit":
            return f"explicit({self.params[0]})"
        return f"{self.kind}({','.join(map(str, self.params))})"


def _add(a: Element, b: Element) -> Element:
    if a.layout != b.layout:
        raise UndefinedSum(f"no sum for {render(a)} + {render(b)}")
    if a.shape == "nat":
        coords = tuple(x + y for x, y in zip(a.coords, b.coords))
        if any(c > a.mod for c in coords):
            raise WindowOverflow(f"{render(a)} + {render(b)} leaves the window")
        return a._derive(coords)
    m = a.mod
    return a._derive(tuple((x + y) % m for x, y in zip(a.coords, b.coords)))


def zn(n: int) -> Carrier:
    return Carrier("zn", (n,))


def zn_tuple(n: int, k: int) -> Carrier:
    return Carrier("zn_tuple", (n, k))


def zn_matrix(n: int, r: int, c: int) -> Carrier:
    return Carrier("zn_matrix", (n, r, c))


def zn_poly(n: int, dmax: int) -> Carrier:
    return Carrier("zn_poly", (n, dmax))


def nat_window(bound: int, k: int | None = None) -> Carrier:
    return Carrier("nat_window", (bound,) if k is None else (bound, k))


def explicit(
    members: Iterable[Element], modulus: int = 0, additive: bool = False, natural: bool = False
) -> Carrier:
    members = tuple(members)
    if not modulus and members:
        modulus = members[0].mod
    return Carrier("explicit", (modulus,), members, additive, natural)


def enumerate_carrier(c: Carrier) -> list[Element]:
    """All elements of ``c`` in canonical order."""
    return list(c)


def add(c: Carrier, a: Element, b: Element) -> Element:
    return c.add(a, b)


def zero(c: Carrier) -> Element | None:
    return c.zero()


# ---------------------------------------------------------------------------
# scalars

ACTIONS = ("mod_mul", "nat_mul_window", "action_table")


@dataclass(frozen=True)
class ScalarSet:
    """Scalars acting on a ground set.

    ``table`` is an optional Cayley table for scalar addition, stored as
    sorted ``(a, b, a+b)`` triples; ``action_entries`` likewise stores
    ``(g, v, g.v)`` for the ``action_table`` action.
    """

    base: Carrier
    members: tuple[Element, ...]
    table: tuple[tuple[Element, Element, Element], ...] | None = None
    zero: Element | None = None
    action: str = "mod_mul"
    action_entries: tuple[tuple[Element, Element, Element], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))
        if self.action not in ACTIONS:
            raise ValueError(f"unknown action {self.action!r}")
        for g in self.members:
            if g not in self.base:
                raise ValueError(f"scalar {render(g)} not in base carrier")
        if self.table is not None:
            full = {}
            for a, b, c in self.table:
                for key in ((a, b), (b, a)):
                    if full.get(key, c) != c:
                        raise ValueError(f"inconsistent table entry for {render(a)}+{render(b)}")
                    full[key] = c
            object.__setattr__(self, "table", tuple(sorted((a, b, c) for (a, b), c in full.items())))
        if self.zero is not None and self.zero not in self.members:
            raise ValueError("zero-member must be one of the members")

    @classmethod
    def of(
        cls,
        base: Carrier,
        members: Iterable[Element] | None = None,
        *,
        table=None,
        zero: Element | None | str = "auto",
        action: str | None = None,
        action_entries=None,
    ) -> "ScalarSet":
        members = tuple(base) if members is None else tuple(members)
        if action is None:
            action = "nat_mul_window" if base.kind == "nat_window" else "mod_mul"
        if table is not None:
            table = tuple(table)
        if action_entries is not None:
            action_entries = tuple(sorted(action_entries))
        if zero == "auto":
            zero = _find_identity(members, table, base)
        return cls(base, members, table, zero, action, action_entries)

    @cached_property
    def _table(self) -> dict | None:
        if self.table is None:
            return None
        return {(a, b): c for a, b, c in self.table}

    @cached_property
    def _actions(self) -> dict | None:
        if self.action_entries is None:
            return None
        return {(g, v): w for g, v, w in self.action_entries}

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.members)

    def __contains__(self, g) -> bool:
        return g in self.member_set

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def add(self, a: Element, b: Element) -> Element:
        if self._table is not None:
            try:
                return self._table[(a, b)]
            except KeyError:
                raise MissingTableEntry(f"no table entry for {render(a)} + {render(b)}") from None
        return _add(a, b)

    @property
    def has_multiplication(self) -> bool:
        """Whether scalars can multiply each other (needed by functionals)."""
        return self.action in ("mod_mul", "nat_mul_window") and all(g.dims == () for g in self.members)

    def restrict(self, subset: Iterable[Element]) -> "ScalarSet":
        sub = frozenset(subset)
        if not sub <= self.member_set:
            raise ValueError("subscalars must be members of the scalar set")
        table = None
        if self.table is not None:
            table = tuple(t for t in self.table if t[0] in sub and t[1] in sub and t[2] in sub)
        z = self.zero if self.zero in sub else None
        return ScalarSet(self.base, tuple(sub), table, z, self.action, self.action_entries)

    def describe(self) -> str:
        body = ",".join(render(g) for g in self.members)
        return f"{self.base.describe()}{{{body}}}"


def _find_identity(members, table, base) -> Element | None:
    if table is not None:
        lookup = {}
        for a, b, c in table:
            lookup[(a, b)] = c
            lookup[(b, a)] = c
        for z in sorted(members):
            if all(lookup.get((z, s)) == s for s in members):
                return z
        return None
    if base.additive:
        for z in members:
            if z.is_zero:
                return z
    return None


def act(s: ScalarSet, g: Element, v: Element) -> Element:
    """Scalar action ``g.v``."""
    if s.action == "action_table":
        try:
            return s._actions[(g, v)]
        except (KeyError, TypeError):
            raise MissingTableEntry(f"no action entry for {render(g)}.{render(v)}") from None
    if g.dims != ():
        raise SetlaError(f"scalar {render(g)} cannot multiply")
    c = g.coords[0]
    if v.shape == "nat":
        coords = tuple(c * x for x in v.coords)
        if any(x > v.mod for x in coords):
            raise WindowOverflow(f"{render(g)}.{render(v)} leaves the window")
        return v._derive(coords)
    m = v.mod
    return v._derive(tuple((c * x) % m for x in v.coords))


# ---------------------------------------------------------------------------
# literal syntax


def render(e: Element) -> str:
    c = e.coords
    if e.shape in ("scalar", "nat") and e.dims == ():
        return str(c[0])
    if e.shape in ("tuple", "nat"):
        return "(" + ",".join(map(str, c)) + ")"
    if e.shape == "poly":
        return "poly(" + ",".join(map(str, c)) + ")"
    r, k = e.dims
    rows = ("[" + ",".join(map(str, c[i * k:(i + 1) * k])) + "]" for i in range(r))
    return "[" + ",".join(rows) + "]"


_TOKEN = re.compile(r"\s*(?:(-?\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokens(text: str) -> list[tuple[str, str]]:
    out = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        pos = m.end()
        if m.group(1) is not None:
            out.append(("int", m.group(1)))
        elif m.group(2) is not None:
            out.append(("name", m.group(2)))
        elif m.group(3) is not None and not m.group(3).isspace():
            out.append(("sym", m.group(3)))
    return out


class _Reader:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else ("end", "")

    def take(self, sym: str | None = None):
        tok = self.peek()
        if sym is not None and tok[1] != sym:
            raise ParseError(f"expected {sym!r}, found {tok[1] or 'end of input'!r} in {self.text!r}")
        self.i += 1
        return tok

    def seq(self, close: str) -> list:
        items = []
        if self.peek()[1] == close:
            self.take(close)
            return items
        while True:
            items.append(self.value())
            tok = self.take()
            if tok[1] == close:
                return items
            if tok[1] != ",":
                raise ParseError(f"expected ',' or {close!r} in {self.text!r}")

    def value(self):
        kind, tok = self.take()
        if kind == "int":
            return int(tok)
        if kind == "name":
            if tok == "poly" and self.peek()[1] == "(":
                self.take("(")
                return ("poly", self.seq(")"))
            return ("var", tok)
        if tok == "(":
            return ("tuple", self.seq(")"))
        if tok == "[":
            return ("list", self.seq("]"))
        if tok == "{":
            return ("set", self.seq("}"))
        raise ParseError(f"unexpected {tok or 'end of input'!r} in {self.text!r}")


def parse_value(text: str):
    """Parse literal text into a nested raw value.

    Integers stay ints; ``(..)``, ``[..]``, ``{..}`` and ``poly(..)`` become
    tagged pairs; bare identifiers become ``("var", name)``.
    """
    r = _Reader(text)
    v = r.value()
    if r.peek()[0] != "end":
        raise ParseError(f"trailing input after literal in {text!r}")
    return v


def _ints(items, what: str) -> list[int]:
    if not all(isinstance(x, int) for x in items):
        raise ParseError(f"{what} must contain integers only")
    return list(items)


def element_from_value(raw, carrier: Carrier) -> Element:
    """Interpret a raw parsed value inside ``carrier``'s literal context."""
    lay = carrier.layout
    if lay is not None:
        shape, dims, mod = lay
    else:
        shape, dims, mod = None, None, carrier.params[0]
    natural = carrier.kind == "nat_window" or carrier.natural

    def fix(cs: list[int]) -> tuple[int, ...]:
        if natural:
            if any(c < 0 or c > mod for c in cs):
                raise ParseError(f"value outside window [0, {mod}]")
            return tuple(cs)
        if mod <= 0:
            raise ParseError("explicit carrier needs a modulus to read literals")
        return tuple(c % mod for c in cs)

    if isinstance(raw, int):
        got = ("nat" if natural else "scalar", (), fix([raw]))
    elif raw[0] == "tuple":
        cs = _ints(raw[1], "tuple")
        got = ("nat" if natural else "tuple", (len(cs),), fix(cs))
    elif raw[0] == "poly":
        cs = _ints(raw[1], "poly")
        if shape == "poly":
            if len(cs) > dims[0]:
                if any(cs[dims[0]:]):
                    raise ParseError("polynomial degree exceeds carrier bound")
                cs = cs[: dims[0]]
            cs = cs + [0] * (dims[0] - len(cs))
        got = ("poly", (len(cs),), fix(cs))
    elif raw[0] == "list":
        rows = raw[1]
        if not rows or not all(isinstance(r, tuple) and r[0] == "list" for r in rows):
            raise ParseError("matrix literal must be a list of rows")
        widths = {len(r[1]) for r in rows}
        if len(widths) != 1:
            raise ParseError("matrix rows differ in length")
        cs = [c for r in rows for c in _ints(r[1], "matrix")]
        got = ("matrix", (len(rows), widths.pop()), fix(cs))
    else:
        raise ParseError(f"not an element literal: {raw!r}")
    e = Element(got[0], got[1], got[2], mod)
    if e not in carrier:
        if carrier.kind == "explicit":
            # explicit carriers also parse literals destined for new sets
            return e
        raise ParseError(f"{render(e)} does not belong to {carrier.describe()}")
    return e


def parse_literal(text: str, carrier: Carrier) -> Element:
    return element_from_value(parse_value(text), carrier)


def parse_set(text: str, carrier: Carrier) -> frozenset[Element]:
    raw = parse_value(text)
    if not (isinstance(raw, tuple) and raw[0] == "set"):
        raise ParseError(f"expected a set literal {{...}}, got {text!r}")
    return frozenset(element_from_value(v, carrier) for v in raw[1])
