"""n-fold structures: ordered unions of components, their maps and overlays."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .analysis import MinGenerating, min_generating
from .errors import FamilyMismatch, RoutingInvalid, StructureInvalid
from .fuzzy import FuzzyMap, verify_fuzzy
from .maps import LinearMap, MapReport, ProjectionReport, check_projection_onto, verify_map
from .structures import (
    AxiomEntry,
    AxiomReport,
    StructureDecl,
    _is_subset,
    check_substructure,
    enumerate_subscalars,
    scalar_kind,
    verify_structure,
)

__all__ = [
    "SCALAR_MODES",
    "MultiStructure",
    "verify_multi",
    "MultiDimension",
    "n_dimension",
    "MultiMap",
    "MultiMapReport",
    "routing_kind",
    "verify_multi_map",
    "MultiProjectionReport",
    "check_multi_projection",
    "MultiFuzzy",
    "MultiFuzzyReport",
    "verify_multi_fuzzy",
    "MultiSubReport",
    "check_multi_substructure",
]

SCALAR_MODES = ("shared", "per_component", "mixed")


@dataclass(frozen=True)
class MultiStructure:
    name: str
    components: tuple[StructureDecl, ...]
    scalar_mode: str = "shared"

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) < 2:
            raise StructureInvalid(f"{self.name}: an n-structure needs at least two components")
        if self.scalar_mode not in SCALAR_MODES:
            raise StructureInvalid(f"unknown scalar mode {self.scalar_mode!r}")

    @property
    def n(self) -> int:
        return len(self.components)

    @property
    def family(self) -> str:
        fams = {c.family for c in self.components}
        return fams.pop() if len(fams) == 1 else "mixed"


def verify_multi(m: MultiStructure) -> AxiomReport:
    """Pairwise distinctness, non-containment and each component's axioms."""
    fams = [c.family for c in m.components]
    if m.scalar_mode != "mixed" and len(set(fams)) > 1:
        raise FamilyMismatch(f"{m.name}: components mix families {sorted(set(fams))}")
    entries = []
    C = m.components
    if m.scalar_mode == "shared":
        odd = next((i for i, c in enumerate(C) if c.scalars != C[0].scalars), None)
        entries.append(AxiomEntry("shared_scalars", odd is None, None if odd is None else (0, odd)))
    dup, contained = None, None
    for i in range(len(C)):
        for j in range(len(C)):
            if i == j:
                continue
            if _is_subset(C[i].ground, C[j].ground):
                if _is_subset(C[j].ground, C[i].ground):
                    dup = dup or (min(i, j), max(i, j))
                else:
                    contained = contained or (i, j)
    entries.append(AxiomEntry("distinct", dup is None, dup))
    entries.append(AxiomEntry("non_containment", contained is None and dup is None, contained or dup))
    window = False
    for i, c in enumerate(C):
        rep = verify_structure(c)
        bad = rep.failing()
        entries.append(AxiomEntry(f"component_{i}", rep.holds, None if bad is None else (bad.axiom, bad.witness)))
        window = window or rep.window
    return AxiomReport(m.name, tuple(entries), window)


@dataclass(frozen=True)
class MultiDimension:
    dims: tuple[int, ...]
    results: tuple[MinGenerating, ...]


def n_dimension(m: MultiStructure, mode: str | None = None, budget: int | None = None) -> MultiDimension:
    rep = verify_multi(m)
    if not rep.holds:
        raise StructureInvalid(f"{m.name} fails {rep.failing().axiom}")
    results = tuple(min_generating(c, mode, budget) for c in m.components)
    return MultiDimension(tuple(r.cardinality for r in results), results)


# ---------------------------------------------------------------------------
# n-maps


@dataclass(frozen=True)
class MultiMap:
    """Component maps T_i : V_i -> W_{routing[i]}, zero-based routing."""

    source: MultiStructure
    target: MultiStructure
    maps: tuple[LinearMap, ...]
    routing: tuple[int, ...] | None = None
    name: str = "T"

    def __post_init__(self):
        object.__setattr__(self, "maps", tuple(self.maps))
        r = tuple(range(len(self.maps))) if self.routing is None else tuple(self.routing)
        object.__setattr__(self, "routing", r)
        if len(self.maps) != self.source.n or len(r) != self.source.n:
            raise RoutingInvalid(f"{self.name}: need one map and one route per source component")
        for i, (t, k) in enumerate(zip(self.maps, r)):
            if not 0 <= k < self.target.n:
                raise RoutingInvalid(f"{self.name}: route {i} -> {k} has no target component")
            if t.source != self.source.components[i] or t.target != self.target.components[k]:
                raise RoutingInvalid(f"{self.name}: map {i} does not run from V{i} to W{k}")

    @property
    def kind(self) -> str:
        return routing_kind(self.routing)


def routing_kind(r: Sequence[int]) -> str:
    """plain, quasi (no fixed point), semi_quasi (some fixed points) or pseudo_quasi (many-to-one)."""
    if len(set(r)) < len(r):
        return "pseudo_quasi"
    fixed = sum(1 for i, k in enumerate(r) if i == k)
    if fixed == len(r):
        return "plain"
    return "quasi" if fixed == 0 else "semi_quasi"


@dataclass(frozen=True)
class MultiMapReport:
    kind: str
    reports: tuple[MapReport, ...]

    @property
    def linear(self) -> bool:
        return all(r.linear for r in self.reports)

    def __bool__(self):
        return self.linear


def verify_multi_map(t: MultiMap, budget: int | None = None) -> MultiMapReport:
    return MultiMapReport(t.kind, tuple(verify_map(m, budget) for m in t.maps))


@dataclass(frozen=True)
class MultiProjectionReport:
    reports: tuple[ProjectionReport, ...]

    @property
    def projection(self) -> bool:
        return all(r.projection for r in self.reports)

    @property
    def idempotent(self) -> bool:
        return all(r.idempotent for r in self.reports)

    def __bool__(self):
        return self.projection


def check_multi_projection(t: MultiMap, parts: Sequence) -> MultiProjectionReport:
    if t.kind != "plain" or t.source != t.target:
        raise RoutingInvalid(f"{t.name}: n-projections need a plain operator")
    if len(parts) != t.source.n:
        raise RoutingInvalid(f"{t.name}: need one part per component")
    return MultiProjectionReport(tuple(check_projection_onto(m, W) for m, W in zip(t.maps, parts)))


# ---------------------------------------------------------------------------
# fuzzy n-overlays


@dataclass(frozen=True)
class MultiFuzzy:
    structure: MultiStructure
    components: tuple[FuzzyMap, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.structure.n:
            raise FamilyMismatch("one membership map per component is required")
        for i, (f, c) in enumerate(zip(self.components, self.structure.components)):
            if f.structure != c:
                raise FamilyMismatch(f"membership map {i} is not defined on component {i}")


@dataclass(frozen=True)
class MultiFuzzyReport:
    reports: tuple[AxiomReport, ...]

    @property
    def holds(self) -> bool:
        return all(r.holds for r in self.reports)

    @property
    def failing_component(self) -> int | None:
        return next((i for i, r in enumerate(self.reports) if not r.holds), None)

    def __bool__(self):
        return self.holds


def verify_multi_fuzzy(mf: MultiFuzzy, subspace: bool = False) -> MultiFuzzyReport:
    return MultiFuzzyReport(tuple(verify_fuzzy(f, subspace) for f in mf.components))


# ---------------------------------------------------------------------------
# n-substructures


@dataclass(frozen=True)
class MultiSubReport:
    reports: tuple[tuple[AxiomReport, ...], ...]
    subscalars: tuple[tuple[frozenset, ...], ...] = field(default=())
    scalar_simple: bool = False

    @property
    def holds(self) -> bool:
        if self.scalar_simple:
            return False
        return all(r.holds for comp in self.reports for r in comp)

    def __bool__(self):
        return self.holds


def check_multi_substructure(
    m: MultiStructure,
    parts: Sequence,
    target_family: str | None = None,
    subscalars=None,
    strong: bool = False,
) -> MultiSubReport:
    """Componentwise substructure check.

    In ``strong`` mode every proper closed scalar subset of the right kind must
    work; with none available the result is flagged ``scalar_simple``.
    """
    if len(parts) != m.n:
        raise RoutingInvalid("need one part per component")
    if not strong:
        reps = tuple((check_substructure(c, W, target_family, subscalars),) for c, W in zip(m.components, parts))
        return MultiSubReport(reps)
    reports, used, simple = [], [], False
    for c, W in zip(m.components, parts):
        kind = scalar_kind(target_family or c.family)
        if kind == "subset":
            kind = "subsemigroup"
        subs = enumerate_subscalars(c.scalars, kind)
        if not subs:
            simple = True
        used.append(tuple(subs))
        reports.append(tuple(check_substructure(c, W, target_family, T) for T in subs))
    return MultiSubReport(tuple(reports), tuple(used), simple)
