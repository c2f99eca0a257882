"""Linear maps, functionals, annihilators, projections and Hom enumeration.

Maps are explicit tables from a source ground to a target ground; coordinate
rules are expanded to tables before anything is checked.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

from .carrier import Carrier, Element, act, render
from .errors import (
    BudgetExceeded,
    ChainMismatch,
    NotASubstructure,
    NotBijective,
    ParseError,
    PartialTable,
    ScalarMismatch,
    SetlaError,
    WindowOverflow,
    ZeroMissing,
)
from .structures import Budget, StructureDecl, _sum, as_subset, check_substructure, sorted_elements

__all__ = [
    "LinearMap",
    "MapReport",
    "ProjectionReport",
    "Functional",
    "FunctionalReport",
    "HomResult",
    "NotLinear",
    "from_function",
    "identity",
    "coordinate_rule",
    "verify_map",
    "compose",
    "invert",
    "check_projection_onto",
    "verify_functional",
    "annihilator",
    "enumerate_homs",
]


class NotLinear(SetlaError):
    pass


@dataclass(frozen=True)
class LinearMap:
    """A table map between two declared structures.

    ``partial`` marks a window-partial table: source elements whose image
    left the window are simply absent.
    """

    source: StructureDecl
    target: StructureDecl
    table: tuple[tuple[Element, Element], ...]
    name: str = "T"
    partial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(sorted(self.table)))

    @cached_property
    def mapping(self) -> dict[Element, Element]:
        return dict(self.table)

    def __call__(self, v: Element) -> Element:
        return self.mapping[v]

    @property
    def is_operator(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class MapReport:
    linear: bool
    witness: tuple | None
    injective: bool
    surjective: bool
    law: str
    window: bool = False
    idempotent: bool | None = None

    @property
    def invertible(self) -> bool:
        return self.injective and self.surjective

    def __bool__(self):
        return self.linear


@dataclass(frozen=True)
class ProjectionReport:
    projection: bool
    linear: bool
    range_inside: bool
    idempotent: bool
    witness: tuple | None = None
    window: bool = False

    def __bool__(self):
        return self.projection


def from_function(
    source: StructureDecl, target: StructureDecl, fn: Callable[[Element], Element], name: str = "T"
) -> LinearMap:
    """Tabulate ``fn`` on the source ground.  Overflowing images are dropped."""
    table, partial = [], False
    for v in sorted_elements(source.ground):
        try:
            table.append((v, fn(v)))
        except WindowOverflow:
            partial = True
    return LinearMap(source, target, tuple(table), name, partial)


def identity(d: StructureDecl) -> LinearMap:
    return LinearMap(d, d, tuple((v, v) for v in sorted_elements(d.ground)), "id")


def _layout_for(target: StructureDecl, ncoords: int, hint: tuple | None = None) -> tuple:
    lay = target.carrier.layout
    if lay is not None:
        size = 1
        for x in lay[1]:
            size *= x
        if size == ncoords:
            return lay
    options = sorted({v.layout for v in sorted_elements(target.ground) if len(v.coords) == ncoords})
    if hint in options:
        return hint
    if len(options) == 1:
        return options[0]
    raise ParseError(f"cannot tell which {ncoords}-coordinate shape of {target.name} is meant")


def coordinate_rule(kind: str, args: Sequence, source: StructureDecl, target: StructureDecl) -> Callable:
    """Build an element function for ``permute``, ``scale``, ``project`` or ``linear``.

    ``permute(i1..ik)``: output coordinate j is input coordinate i_j (1-based).
    ``project(c..)``: keep the listed coordinates, zero the rest.
    ``linear(row..)``: output coordinate j is the dot product with row j.
    """

    def out(v: Element, coords: list[int]) -> Element:
        shape, dims, mod = _layout_for(target, len(coords), v.layout)
        if shape == "nat":
            if any(c < 0 or c > mod for c in coords):
                raise WindowOverflow("image leaves the window")
            return Element(shape, dims, coords, mod)
        return Element(shape, dims, [c % mod for c in coords], mod)

    try:
        fn = _rule(kind, args, out)
    except (TypeError, ValueError):
        raise ParseError(f"bad arguments for {kind}: {args!r}") from None

    def checked(v: Element) -> Element:
        try:
            return fn(v)
        except (IndexError, ValueError):
            raise ParseError(f"{kind}{tuple(args)} does not fit {render(v)}") from None

    return checked


def _rule(kind: str, args: Sequence, out: Callable) -> Callable:
    if kind == "permute":
        idx = [int(i) - 1 for i in args]
        return lambda v: out(v, [v.coords[i] for i in idx])
    if kind == "scale":
        c = int(args[0])
        return lambda v: out(v, [c * x for x in v.coords])
    if kind == "project":
        keep = {int(i) - 1 for i in args}
        return lambda v: out(v, [x if i in keep else 0 for i, x in enumerate(v.coords)])
    if kind == "linear":
        rows = [[int(a) for a in r] for r in args]
        return lambda v: out(v, [sum(a * x for a, x in zip(r, v.coords)) for r in rows])
    raise ParseError(f"unknown map rule {kind!r}")


def _law(m: LinearMap) -> str:
    return "la" if m.source.is_algebra and m.target.is_algebra else "vs"


def _check_tables(m: LinearMap) -> None:
    if m.source.scalars != m.target.scalars:
        raise ScalarMismatch(f"{m.source.name} and {m.target.name} use different scalar sets")
    V = sorted_elements(m.source.ground)
    mp = m.mapping
    missing = [v for v in V if v not in mp]
    if missing and not m.partial:
        raise PartialTable(f"{m.name} has no image for {render(missing[0])}")
    for v, w in m.table:
        if w not in m.target.ground:
            raise PartialTable(f"{m.name}({render(v)}) = {render(w)} is outside {m.target.name}")


def _free_module_linear(m: LinearMap, s) -> bool:
    """Exact shortcut for the algebra law on a full ``zn*`` carrier.

    With 1 in S the law forces additivity, and an additive map on Z_n^k is
    determined by the images of the unit vectors.  So the law holds iff every
    image equals the combination of those images.  A False answer only means
    the exhaustive search must run (and will find the witness).
    """
    src = m.source.ground
    if m.partial or not isinstance(src, Carrier) or not src.modular or s.action != "mod_mul":
        return False
    if not any(g.dims == () and g.coords[0] == 1 for g in s.members):
        return False
    shape, dims, n = src.layout
    k = src.ncoords
    mp = m.mapping
    units = []
    for i in range(k):
        e = src.make([1 if j == i else 0 for j in range(k)])
        if e not in mp:
            return False
        units.append(mp[e])
    lay = units[0].layout
    if lay[0] == "nat" or lay[2] != n or any(u.layout != lay for u in units):
        return False
    cols = [u.coords for u in units]
    width = len(cols[0])
    for v, w in m.table:
        if w.layout != lay:
            return False
        for j in range(width):
            if sum(c * col[j] for c, col in zip(v.coords, cols)) % n != w.coords[j]:
                return False
    return True


def verify_map(m: LinearMap, budget: int | None = None) -> MapReport:
    """Exhaustive linearity check plus injectivity/surjectivity by inspection."""
    _check_tables(m)
    s = m.source.scalars
    V = sorted_elements(m.source.ground)
    inV = m.source.ground.__contains__
    mp = m.mapping
    law = _law(m)
    b = Budget(budget)
    window = m.partial or m.source.carrier.window_truncated or m.target.carrier.window_truncated
    witness = None
    if law == "vs":
        b.spend(len(V) * len(s))
        for v in V:
            if v not in mp:
                continue
            for g in s.members:
                try:
                    sv = act(s, g, v)
                    right = act(s, g, mp[v])
                except WindowOverflow:
                    window = True
                    continue
                if not inV(sv):
                    continue
                if sv not in mp:
                    window = True
                    continue
                if mp[sv] != right:
                    witness = (g, v, mp[sv], right)
                    break
            if witness:
                break
    elif _free_module_linear(m, s):
        b.spend(len(V))
    else:
        b.spend(len(V) * len(V) * len(s))
        for g in s.members:
            for a in V:
                if a not in mp:
                    continue
                try:
                    ga = act(s, g, a)
                    gta = act(s, g, mp[a])
                except WindowOverflow:
                    window = True
                    continue
                for c in V:
                    if c not in mp:
                        continue
                    x = _sum(ga, c)
                    if x is None:
                        window = True
                        continue
                    if x == "undefined" or not inV(x):
                        continue
                    if x not in mp:
                        window = True
                        continue
                    right = _sum(gta, mp[c])
                    if right is None:
                        window = True
                        continue
                    if mp[x] != right:
                        witness = (g, a, c, mp[x], None if right == "undefined" else right)
                        break
                if witness:
                    break
            if witness:
                break
    images = [w for _, w in m.table]
    injective = len(set(images)) == len(images) and not m.partial
    surjective = set(images) == set(sorted_elements(m.target.ground))
    idem = None
    if m.is_operator:
        idem = all(mp.get(w, w) == w for w in images if w in mp) and all(w in mp for w in images)
    return MapReport(witness is None, witness, injective, surjective, law, window, idem)


def compose(m1: LinearMap, m2: LinearMap) -> LinearMap:
    """``m1 . m2``: apply m2 first."""
    if m2.target != m1.source:
        raise ChainMismatch(f"{m2.name} lands in {m2.target.name}, {m1.name} starts at {m1.source.name}")
    mp1 = m1.mapping
    table, partial = [], m1.partial or m2.partial
    for v, w in m2.table:
        if w in mp1:
            table.append((v, mp1[w]))
        else:
            partial = True
    return LinearMap(m2.source, m1.target, tuple(table), f"{m1.name}.{m2.name}", partial)


def invert(m: LinearMap) -> LinearMap:
    rep = verify_map(m)
    if not rep.linear:
        raise NotLinear(f"{m.name} is not linear")
    if not rep.invertible:
        raise NotBijective(f"{m.name} is not a bijection")
    inv = LinearMap(m.target, m.source, tuple((w, v) for v, w in m.table), f"{m.name}^-1")
    # the inverse of a bijective linear map is linear; executed, not assumed
    assert verify_map(inv).linear, "inverse of a linear bijection failed the law"
    return inv


def check_projection_onto(m: LinearMap, W) -> ProjectionReport:
    if not m.is_operator:
        raise ChainMismatch(f"{m.name} is not an operator")
    W = as_subset(W)
    try:
        sub = check_substructure(m.source, W)
    except SetlaError as exc:
        raise NotASubstructure(str(exc)) from None
    if not sub.holds:
        raise NotASubstructure(f"W fails {sub.failing().axiom}")
    rep = verify_map(m)
    outside = [(v, w) for v, w in m.table if w not in W]
    witness = rep.witness if not rep.linear else (("outside",) + outside[0] if outside else None)
    mp = m.mapping
    idem = all(w in mp and mp[w] == w for _, w in m.table)
    return ProjectionReport(rep.linear and not outside, rep.linear, not outside, idem, witness, rep.window)


# ---------------------------------------------------------------------------
# functionals


@dataclass(frozen=True)
class Functional:
    structure: StructureDecl
    table: tuple[tuple[Element, Element], ...]
    partial: bool = False

    def __post_init__(self):
        object.__setattr__(self, "table", tuple(sorted(self.table)))

    @cached_property
    def mapping(self) -> dict[Element, Element]:
        return dict(self.table)

    def __call__(self, v: Element) -> Element:
        return self.mapping[v]

    @classmethod
    def from_function(cls, d: StructureDecl, fn: Callable[[Element], Element]) -> "Functional":
        table, partial = [], False
        for v in sorted_elements(d.ground):
            try:
                table.append((v, fn(v)))
            except WindowOverflow:
                partial = True
        return cls(d, tuple(table), partial)


@dataclass(frozen=True)
class FunctionalReport:
    linear: bool
    witness: tuple | None = None
    window: bool = False

    def __bool__(self):
        return self.linear


def verify_functional(f: Functional) -> FunctionalReport:
    """Check f(c.a) = c.f(a), scalars acting on functional values by multiplication."""
    d = f.structure
    s = d.scalars
    if not s.has_multiplication:
        raise ScalarMismatch("the scalar set has no multiplication to act on functional values")
    mp = f.mapping
    V = sorted_elements(d.ground)
    missing = [v for v in V if v not in mp]
    if missing and not f.partial:
        raise PartialTable(f"functional has no value at {render(missing[0])}")
    window = f.partial or d.carrier.window_truncated or s.base.window_truncated
    for v in V:
        if v not in mp:
            continue
        for c in s.members:
            try:
                cv = act(s, c, v)
                right = act(s, c, mp[v])
            except WindowOverflow:
                window = True
                continue
            if cv not in d.ground:
                continue
            if cv not in mp:
                window = True
                continue
            if mp[cv] != right:
                return FunctionalReport(False, (c, v, mp[cv], right), window)
    return FunctionalReport(True, None, window)


def _law_instances(d: StructureDecl, V: list[Element], la: bool):
    """Law instances as (output index, inputs) grouped by the largest index used.

    vs law: T(g.v) = g.T(v).  la law: T(g.a + c) = g.T(a) + T(c).
    """
    s = d.scalars
    index = {v: i for i, v in enumerate(V)}
    by_last = [[] for _ in V]
    for i, v in enumerate(V):
        for g in s.members:
            try:
                gv = act(s, g, v)
            except WindowOverflow:
                continue
            if not la:
                j = index.get(gv)
                if j is not None:
                    by_last[max(i, j)].append(("vs", g, i, j))
                continue
            for k, c in enumerate(V):
                x = _sum(gv, c)
                if not isinstance(x, Element):
                    continue
                j = index.get(x)
                if j is not None:
                    by_last[max(i, j, k)].append(("la", g, i, k, j))
    return by_last


def _holds(inst, vals, s, scalar_values: bool) -> bool:
    try:
        if inst[0] == "vs":
            _, g, i, j = inst
            return vals[j] == act(s, g, vals[i])
        _, g, i, k, j = inst
        right = _sum(act(s, g, vals[i]), vals[k])
        return right is None or vals[j] == right
    except WindowOverflow:
        return True


def _backtrack(V, options, by_last, s, budget: Budget, fixed: dict[int, Element] | None = None):
    vals: list = [None] * len(V)
    out = []
    fixed = fixed or {}

    def rec(i: int):
        if i == len(V):
            out.append(tuple(vals))
            return
        choices = [fixed[i]] if i in fixed else options
        for w in choices:
            budget.spend()
            vals[i] = w
            if all(_holds(inst, vals, s, False) for inst in by_last[i]):
                rec(i + 1)
        vals[i] = None

    rec(0)
    return out


def annihilator(d: StructureDecl, A, budget: int | None = None) -> list[Functional]:
    """All linear functionals vanishing on A."""
    s = d.scalars
    V = list(sorted_elements(d.ground))
    zeros = [v for v in V if v.is_zero]
    if not zeros or s.zero is None or not s.zero.is_zero:
        raise ZeroMissing("annihilators need 0 in the ground and in the scalars")
    if not s.has_multiplication:
        raise ScalarMismatch("the scalar set has no multiplication to act on functional values")
    A = set(A)
    index = {v: i for i, v in enumerate(V)}
    fixed = {index[a]: s.zero for a in A}
    by_last = _law_instances(d, V, False)
    tables = _backtrack(V, list(s.members), by_last, s, Budget(budget), fixed)
    return [Functional(d, tuple(zip(V, t))) for t in tables]


@dataclass(frozen=True)
class HomResult:
    maps: tuple[LinearMap, ...]
    closed: bool
    witness: tuple | None = None
    window: bool = False

    def __len__(self):
        return len(self.maps)


def enumerate_homs(V: StructureDecl, W: StructureDecl, budget: int | None = None) -> HomResult:
    """Every linear map V -> W, plus whether pointwise scalar multiples stay linear."""
    if V.scalars != W.scalars:
        raise ScalarMismatch(f"{V.name} and {W.name} use different scalar sets")
    s = V.scalars
    src = list(sorted_elements(V.ground))
    dst = list(sorted_elements(W.ground))
    la = V.is_algebra and W.is_algebra
    by_last = _law_instances(V, src, la)
    tables = _backtrack(src, dst, by_last, s, Budget(budget))
    maps = tuple(LinearMap(V, W, tuple(zip(src, t)), f"T{i + 1}") for i, t in enumerate(tables))
    known = set(tables)
    window = V.carrier.window_truncated or W.carrier.window_truncated
    for i, t in enumerate(tables):
        for g in s.members:
            try:
                scaled = tuple(act(s, g, w) for w in t)
            except WindowOverflow:
                window = True
                continue
            if scaled not in known:
                return HomResult(maps, False, (g, maps[i].name), window)
    return HomResult(maps, True, None, window)
