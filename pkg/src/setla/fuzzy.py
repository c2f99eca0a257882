"""Exact-rational fuzzy membership overlays and their family laws."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable

from .carrier import Element, act, neg, render
from .errors import (
    NotASubstructure,
    ParamOutOfRange,
    PartialTable,
    SetlaError,
    ValueOutOfUnit,
    WindowOverflow,
    ZeroMissing,
)
from .structures import (
    AxiomEntry,
    AxiomReport,
    StructureDecl,
    _sum,
    as_subset,
    check_substructure,
    sorted_elements,
)

__all__ = [
    "FuzzyMap",
    "EtaRule",
    "builtin_eta",
    "fuzzy_laws",
    "verify_fuzzy",
    "restrict_fuzzy",
    "pointwise_min",
]


@dataclass(frozen=True)
class FuzzyMap:
    structure: StructureDecl
    values: tuple[tuple[Element, Fraction], ...]

    def __post_init__(self):
        vals = tuple(sorted((v, Fraction(x)) for v, x in self.values))
        object.__setattr__(self, "values", vals)

    @cached_property
    def mapping(self) -> dict[Element, Fraction]:
        return dict(self.values)

    def __call__(self, v: Element) -> Fraction:
        return self.mapping[v]

    @classmethod
    def from_function(cls, d: StructureDecl, fn: Callable[[Element], Fraction]) -> "FuzzyMap":
        return cls(d, tuple((v, Fraction(fn(v))) for v in sorted_elements(d.ground)))


def _magnitude(v: Element) -> int:
    if v.shape == "nat":
        return sum(v.coords)
    return sum(min(c, v.mod - c) for c in v.coords)


def _degree(v: Element) -> int:
    for i in range(len(v.coords) - 1, -1, -1):
        if v.coords[i]:
            return i
    return 0


@dataclass(frozen=True)
class EtaRule:
    """A named membership rule; ``apply`` tabulates it on a structure."""

    kind: str
    params: tuple

    def value(self, v: Element) -> Fraction:
        k, p = self.kind, self.params
        if k == "coord_sum_over":
            total = sum(v.coords)
            if len(p) > 1 and p[1] is not None:
                total %= p[1]
            return Fraction(total, p[0])
        if k == "reciprocal_sum":
            total = sum(v.coords)
            return Fraction(p[0]) if total == 0 else Fraction(1, total)
        if k == "reciprocal_degree":
            if v.shape != "poly":
                raise ParamOutOfRange("reciprocal_degree needs polynomial elements")
            deg = _degree(v)
            return Fraction(p[0]) if deg == 0 else Fraction(1, deg)
        if k == "one_minus_reciprocal":
            m = _magnitude(v)
            return Fraction(1) if m == 0 else 1 - Fraction(1, m)
        if k == "constant":
            return Fraction(p[0])
        raise ParamOutOfRange(f"unknown rule {k!r}")

    def apply(self, d: StructureDecl) -> FuzzyMap:
        values = []
        for v in sorted_elements(d.ground):
            x = self.value(v)
            if not 0 <= x <= 1:
                raise ParamOutOfRange(f"{self.kind}{self.params} gives {x} at {render(v)}, outside [0,1]")
            values.append((v, x))
        return FuzzyMap(d, tuple(values))


def builtin_eta(kind: str, *params) -> EtaRule:
    """``coord_sum_over(K[, n])``, ``reciprocal_sum(z)``, ``reciprocal_degree(c)``,
    ``one_minus_reciprocal()`` or ``constant(x)``."""
    if kind == "coord_sum_over":
        if not params or params[0] <= 0:
            raise ParamOutOfRange("coord_sum_over needs a positive K")
        if len(params) > 1 and params[1] is not None and params[1] <= 0:
            raise ParamOutOfRange("reduction modulus must be positive")
    elif kind in ("reciprocal_sum", "reciprocal_degree", "constant"):
        if len(params) != 1 or not 0 <= Fraction(params[0]) <= 1:
            raise ParamOutOfRange(f"{kind} needs one declared value in [0,1]")
    elif kind == "one_minus_reciprocal":
        if params:
            raise ParamOutOfRange("one_minus_reciprocal takes no parameters")
    else:
        raise ParamOutOfRange(f"unknown rule {kind!r}")
    return EtaRule(kind, tuple(params))


def fuzzy_laws(family: str, subspace: bool = False) -> tuple[str, ...]:
    if family == "group_la":
        return ("fuzzy_min", "fuzzy_negation", "fuzzy_zero", "fuzzy_action")
    if family in ("set_la", "semigroup_la"):
        return ("fuzzy_action", "fuzzy_min")
    if family == "semigroup_vs" and subspace:
        return ("fuzzy_action", "fuzzy_min")
    return ("fuzzy_action",)


def verify_fuzzy(f: FuzzyMap, subspace: bool = False) -> AxiomReport:
    """Check the family's fuzzy laws exhaustively with exact comparisons."""
    d = f.structure
    eta = f.mapping
    V = sorted_elements(d.ground)
    for v in V:
        if v not in eta:
            raise PartialTable(f"no membership value at {render(v)}")
    for v, x in f.values:
        if not 0 <= x <= 1:
            raise ValueOutOfUnit(f"membership {x} at {render(v)}")
    laws = fuzzy_laws(d.family, subspace)
    if d.family.startswith("group") and "fuzzy_zero" in laws and not any(v.is_zero for v in V):
        raise ZeroMissing("group fuzzy laws need 0 in the ground")
    s = d.scalars
    entries = []
    window = d.carrier.window_truncated
    for law in laws:
        wit, skipped = None, 0
        if law == "fuzzy_action":
            for a in V:
                for r in s.members:
                    try:
                        ra = act(s, r, a)
                    except WindowOverflow:
                        skipped += 1
                        continue
                    if ra not in eta:
                        skipped += 1
                        continue
                    if eta[ra] < eta[a]:
                        wit = (r, a, eta[ra], eta[a])
                        break
                if wit:
                    break
        elif law == "fuzzy_min":
            for i, a in enumerate(V):
                for b in V[i:]:
                    ab = _sum(a, b)
                    if not isinstance(ab, Element) or ab not in eta:
                        skipped += ab is None
                        continue
                    if eta[ab] < min(eta[a], eta[b]):
                        wit = (a, b, eta[ab], min(eta[a], eta[b]))
                        break
                if wit:
                    break
        elif law == "fuzzy_negation":
            for a in V:
                try:
                    na = neg(a)
                except WindowOverflow:
                    skipped += 1
                    continue
                if na not in eta or eta[na] != eta[a]:
                    wit = (a, na, eta.get(na), eta[a])
                    break
        elif law == "fuzzy_zero":
            for a in V:
                if a.is_zero and eta[a] != 1:
                    wit = (a, eta[a])
                    break
        window = window or skipped > 0
        entries.append(AxiomEntry(law, wit is None, wit, "exhaustive", skipped))
    return AxiomReport(f"eta[{d.name}]", tuple(entries), window)


def restrict_fuzzy(f: FuzzyMap, W) -> FuzzyMap:
    """eta restricted to a substructure W of the underlying structure."""
    d = f.structure
    W = as_subset(W)
    try:
        rep = check_substructure(d, W)
    except SetlaError as exc:
        raise NotASubstructure(str(exc)) from None
    if not rep.holds:
        raise NotASubstructure(f"W fails {rep.failing().axiom}")
    sub = StructureDecl(f"{d.name}|W", d.family, d.carrier, W, d.scalars)
    eta = f.mapping
    return FuzzyMap(sub, tuple((v, eta[v]) for v in sorted_elements(W)))


def pointwise_min(f: FuzzyMap, g: FuzzyMap) -> FuzzyMap:
    if f.structure != g.structure:
        raise SetlaError("pointwise minimum needs one underlying structure")
    return FuzzyMap(f.structure, tuple((v, min(x, g.mapping[v])) for v, x in f.values))
