"""Structure declarations, axiom verification and substructure classification."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .carrier import (
    Carrier,
    Element,
    ScalarSet,
    UndefinedSum,
    act,
    neg,
    render,
    zero_like,
)
from .errors import (
    BudgetExceeded,
    MissingTableEntry,
    NotASubset,
    StructureInvalid,
    SubscalarsNotClosed,
    WindowOverflow,
)
from .lattice import LatticeSet

__all__ = [
    "FAMILIES",
    "DEFAULT_BUDGET",
    "default_budget",
    "Budget",
    "StructureDecl",
    "AxiomEntry",
    "AxiomReport",
    "as_subset",
    "sorted_elements",
    "lattice_view",
    "family_axioms",
    "weaker_families",
    "verify_structure",
    "check_substructure",
    "classify_substructure",
    "enumerate_subscalars",
    "scalar_kind",
    "valid_subscalars",
]

FAMILIES = ("set_vs", "set_la", "semigroup_vs", "semigroup_la", "group_vs", "group_la")

DEFAULT_BUDGET = 10**7
# above this many instances, modular lattice grounds are verified structurally
EXHAUSTIVE_BOUND = 250_000
# scalar sets larger than this are not searched for subscalar sets
SUBSCALAR_BOUND = 64
SUBSET_SEARCH_BOUND = 12


def default_budget() -> int:
    raw = os.environ.get("SETLA_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


class Budget:
    """Counter of elementary checks; raises once the limit is passed."""

    def __init__(self, limit: int | None = None):
        self.limit = default_budget() if limit is None else limit
        self.used = 0

    def spend(self, n: int = 1) -> None:
        self.used += n
        if self.used > self.limit:
            raise BudgetExceeded(f"more than {self.limit} elementary checks")

    @property
    def left(self) -> int:
        return self.limit - self.used


Subset = "Carrier | LatticeSet | frozenset[Element]"


def as_subset(w) -> Carrier | LatticeSet | frozenset:
    if isinstance(w, (Carrier, LatticeSet, frozenset)):
        return w
    return frozenset(w)


def sorted_elements(w) -> tuple[Element, ...]:
    """Elements of a subset in canonical order."""
    if isinstance(w, Carrier):
        return tuple(w)
    if isinstance(w, LatticeSet):
        return w.elements()
    return tuple(sorted(w))


def lattice_view(w) -> LatticeSet | None:
    """The subset as a lattice, when it is a full modular carrier or already one."""
    if isinstance(w, LatticeSet):
        return w
    if isinstance(w, Carrier) and w.modular:
        return LatticeSet.full(w.layout)
    return None


def _is_subset(w, ground) -> bool:
    if isinstance(ground, Carrier):
        if isinstance(w, Carrier):
            return w == ground or all(e in ground for e in w)
        if isinstance(w, LatticeSet):
            return ground.modular and w.layout == ground.layout
        return all(e in ground for e in w)
    if isinstance(ground, LatticeSet):
        if isinstance(w, LatticeSet):
            return w <= ground
        if isinstance(w, Carrier):
            lat = lattice_view(w)
            return lat is not None and lat <= ground
        return all(e in ground for e in w)
    if isinstance(w, frozenset):
        return w <= ground
    if len(w) > len(ground):
        return False
    return all(e in ground for e in w)


@dataclass(frozen=True)
class StructureDecl:
    """A family tag, a ground subset of a carrier, and its scalars.

    ``ground`` may be ``"all"`` (the carrier itself), a :class:`LatticeSet`
    or any iterable of elements.
    """

    name: str
    family: str
    carrier: Carrier
    ground: object
    scalars: ScalarSet

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise StructureInvalid(f"unknown family {self.family!r}")
        ground = self.carrier if isinstance(self.ground, str) and self.ground == "all" else as_subset(self.ground)
        object.__setattr__(self, "ground", ground)
        if len(ground) == 0:
            raise StructureInvalid(f"{self.name}: ground set is empty")
        if not _is_subset(ground, self.carrier):
            raise StructureInvalid(f"{self.name}: ground is not inside {self.carrier.describe()}")

    @property
    def is_algebra(self) -> bool:
        return self.family.endswith("_la")

    @property
    def kind(self) -> str:
        return self.family.split("_")[0]

    def elements(self) -> tuple[Element, ...]:
        return sorted_elements(self.ground)

    def with_(self, **changes) -> "StructureDecl":
        data = dict(name=self.name, family=self.family, carrier=self.carrier, ground=self.ground, scalars=self.scalars)
        data.update(changes)
        return StructureDecl(**data)


@dataclass(frozen=True)
class AxiomEntry:
    axiom: str
    holds: bool
    witness: tuple | None = None
    method: str = "exhaustive"
    skipped: int = 0


@dataclass(frozen=True)
class AxiomReport:
    name: str
    entries: tuple[AxiomEntry, ...]
    window: bool = False
    notes: tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return all(e.holds for e in self.entries)

    verdict = holds

    def failing(self) -> AxiomEntry | None:
        for e in self.entries:
            if not e.holds:
                return e
        return None

    def entry(self, axiom: str) -> AxiomEntry:
        for e in self.entries:
            if e.axiom == axiom:
                return e
        raise KeyError(axiom)

    def __bool__(self) -> bool:
        return self.holds


_SCALAR_SEMIGROUP = ("scalar_closure", "scalar_associativity", "scalar_zero")
_SCALAR_GROUP = ("scalar_closure", "scalar_associativity", "scalar_commutativity", "scalar_zero", "scalar_inverses")

_AXIOMS = {
    "set_vs": ("action_closure",),
    "set_la": ("action_closure", "add_closure", "distributivity"),
    "semigroup_vs": _SCALAR_SEMIGROUP + ("action_closure", "zero_action", "scalar_distributivity"),
    "semigroup_la": _SCALAR_SEMIGROUP
    + ("action_closure", "zero_action", "scalar_distributivity", "add_closure", "distributivity"),
    "group_vs": _SCALAR_GROUP + ("action_closure", "zero_action"),
    "group_la": _SCALAR_GROUP
    + ("action_closure", "zero_action", "add_closure", "add_identity", "add_inverses", "distributivity"),
}

# strictly weaker families, strongest first
_WEAKER = {
    "set_vs": (),
    "set_la": ("set_vs",),
    "semigroup_vs": ("set_vs",),
    "semigroup_la": ("semigroup_vs", "set_la", "set_vs"),
    "group_vs": ("semigroup_vs", "set_vs"),
    "group_la": ("group_vs", "semigroup_la", "semigroup_vs", "set_la", "set_vs"),
}


def family_axioms(family: str) -> tuple[str, ...]:
    return _AXIOMS[family]


def weaker_families(family: str) -> tuple[str, ...]:
    return _WEAKER[family]


def scalar_kind(family: str) -> str:
    """Which kind of scalar subset a family accepts."""
    return {"set": "subset", "semigroup": "subsemigroup", "group": "subgroup"}[family.split("_")[0]]


# ---------------------------------------------------------------------------
# scalar-side checks


def _scalar_sum(s: ScalarSet, a: Element, b: Element) -> Element | None:
    try:
        return s.add(a, b)
    except (MissingTableEntry, UndefinedSum, WindowOverflow):
        return None


def _scalar_checks(s: ScalarSet, axioms: Sequence[str]) -> dict[str, AxiomEntry]:
    out = {}
    members = s.members
    mset = s.member_set
    if "scalar_closure" in axioms:
        wit = None
        for a in members:
            for b in members:
                c = _scalar_sum(s, a, b)
                if c is None or c not in mset:
                    wit = (a, b, c)
                    break
            if wit:
                break
        out["scalar_closure"] = AxiomEntry("scalar_closure", wit is None, wit)
    if "scalar_associativity" in axioms:
        wit = None
        for a, b, c in itertools.product(members, repeat=3):
            ab = _scalar_sum(s, a, b)
            bc = _scalar_sum(s, b, c)
            if ab is None or bc is None or ab not in mset or bc not in mset:
                continue
            left, right = _scalar_sum(s, ab, c), _scalar_sum(s, a, bc)
            if left != right:
                wit = (a, b, c, left, right)
                break
        out["scalar_associativity"] = AxiomEntry("scalar_associativity", wit is None, wit)
    if "scalar_commutativity" in axioms:
        wit = None
        for a, b in itertools.combinations(members, 2):
            if _scalar_sum(s, a, b) != _scalar_sum(s, b, a):
                wit = (a, b)
                break
        out["scalar_commutativity"] = AxiomEntry("scalar_commutativity", wit is None, wit)
    z = s.zero
    if "scalar_zero" in axioms:
        wit = None
        if z is None:
            wit = ()
        else:
            for a in members:
                if _scalar_sum(s, z, a) != a:
                    wit = (z, a)
                    break
        out["scalar_zero"] = AxiomEntry("scalar_zero", wit is None, wit)
    if "scalar_inverses" in axioms:
        wit = None
        if z is not None:
            for a in members:
                if not any(_scalar_sum(s, a, b) == z for b in members):
                    wit = (a,)
                    break
        else:
            wit = ()
        out["scalar_inverses"] = AxiomEntry("scalar_inverses", wit is None, wit)
    return out


# ---------------------------------------------------------------------------
# verification


def _try(f, *args):
    """Run an arithmetic step; None on a window overflow."""
    try:
        return f(*args)
    except WindowOverflow:
        return None


def _sum(a: Element, b: Element):
    """Coordinatewise sum, ``"undefined"`` for mixed shapes, None on overflow."""
    if a.layout != b.layout:
        return "undefined"
    if a.shape == "nat":
        coords = tuple(x + y for x, y in zip(a.coords, b.coords))
        if any(c > a.mod for c in coords):
            return None
        return a._derive(coords)
    m = a.mod
    return a._derive(tuple((x + y) % m for x, y in zip(a.coords, b.coords)))


def _construction_ok(d: StructureDecl) -> bool:
    return (
        lattice_view(d.ground) is not None
        and d.scalars.action == "mod_mul"
        and all(g.dims == () for g in d.scalars.members)
    )


def _instance_count(d: StructureDecl, axioms: Sequence[str]) -> int:
    v, s = len(d.ground), len(d.scalars)
    total = 0
    if "action_closure" in axioms:
        total += v * s
    if "zero_action" in axioms:
        total += v
    if "scalar_distributivity" in axioms:
        total += v * s * s
    if "add_closure" in axioms:
        total += v * (v + 1) // 2
    if "add_inverses" in axioms:
        total += v
    if "distributivity" in axioms:
        total += v * (v + 1) // 2 * s
    return total


def _structural(d: StructureDecl, axioms: Sequence[str]) -> list[AxiomEntry]:
    """Verify ground-side axioms on a modular lattice ground via its generators.

    A lattice is closed under sums, negation and integer multiples, so every
    ground-side axiom either holds outright or is linear in v and is decided
    on the generators.
    """
    lat = lattice_view(d.ground)
    gens = lat.generators()
    s = d.scalars
    out = []
    for ax in axioms:
        if ax in ("action_closure", "add_closure", "add_identity", "add_inverses", "distributivity"):
            out.append(AxiomEntry(ax, True, None, "construction"))
        elif ax == "zero_action":
            z = s.zero
            wit = None
            if z is None:
                wit = ()
            else:
                for g in gens:
                    w = act(s, z, g)
                    if not w.is_zero:
                        wit = (g, w)
                        break
            out.append(AxiomEntry(ax, wit is None, wit, "construction"))
        elif ax == "scalar_distributivity":
            wit = None
            for g in gens:
                for a in s.members:
                    for b in s.members:
                        c = _scalar_sum(s, a, b)
                        if c is None:
                            continue
                        left = act(s, c, g)
                        right = _sum(act(s, a, g), act(s, b, g))
                        if left != right:
                            wit = (a, b, g, left, right)
                            break
                    if wit:
                        break
                if wit:
                    break
            out.append(AxiomEntry(ax, wit is None, wit, "construction"))
    return out


def _exhaustive(d: StructureDecl, axioms: Sequence[str]) -> tuple[list[AxiomEntry], bool]:
    V = d.elements()
    inV = d.ground.__contains__
    s = d.scalars
    S = s.members
    out = []
    window = False

    def entry(name, wit, skipped):
        nonlocal window
        window = window or skipped > 0
        out.append(AxiomEntry(name, wit is None, wit, "exhaustive", skipped))

    for ax in axioms:
        wit, skipped = None, 0
        if ax == "action_closure":
            for v in V:
                for g in S:
                    w = _try(act, s, g, v)
                    if w is None:
                        skipped += 1
                    elif not inV(w):
                        wit = (g, v, w)
                        break
                if wit:
                    break
        elif ax == "zero_action":
            z = s.zero
            if z is None:
                wit = ()
            else:
                for v in V:
                    w = _try(act, s, z, v)
                    if w is None:
                        skipped += 1
                    elif w != zero_like(v) or not inV(w):
                        wit = (z, v, w)
                        break
        elif ax == "scalar_distributivity":
            for v in V:
                for a in S:
                    for b in S:
                        c = _scalar_sum(s, a, b)
                        if c is None:
                            continue
                        left = _try(act, s, c, v)
                        av, bv = _try(act, s, a, v), _try(act, s, b, v)
                        right = None if av is None or bv is None else _sum(av, bv)
                        if left is None or right is None:
                            skipped += 1
                        elif left != right:
                            wit = (a, b, v, left, right)
                            break
                    if wit:
                        break
                if wit:
                    break
        elif ax == "add_closure":
            for i, a in enumerate(V):
                for b in V[i:]:
                    w = _sum(a, b)
                    if w is None:
                        skipped += 1
                    elif w == "undefined" or not inV(w):
                        wit = (a, b, None if w == "undefined" else w)
                        break
                if wit:
                    break
        elif ax == "add_identity":
            layouts = sorted({v.layout for v in V})
            for v in V:
                if v.layout in layouts:
                    layouts.remove(v.layout)
                    z = zero_like(v)
                    if not inV(z):
                        wit = (z,)
                        break
        elif ax == "add_inverses":
            for v in V:
                w = _try(neg, v)
                if w is None or not inV(w):
                    wit = (v, w)
                    break
        elif ax == "distributivity":
            for i, a in enumerate(V):
                for b in V[i:]:
                    ab = _sum(a, b)
                    if ab is None or ab == "undefined":
                        continue
                    for g in S:
                        left = _try(act, s, g, ab)
                        ga, gb = _try(act, s, g, a), _try(act, s, g, b)
                        right = None if ga is None or gb is None else _sum(ga, gb)
                        if left is None or right is None:
                            skipped += 1
                        elif left != right:
                            wit = (g, a, b, left, right)
                            break
                    if wit:
                        break
                if wit:
                    break
        else:
            continue
        entry(ax, wit, skipped)
    return out, window


def verify_structure(d: StructureDecl, budget: int | None = None) -> AxiomReport:
    """Check exactly the axioms of ``d.family``; witnesses are canonical-first."""
    axioms = family_axioms(d.family)
    scalar_part = _scalar_checks(d.scalars, axioms)
    ground_axioms = [a for a in axioms if a not in scalar_part]
    limit = default_budget() if budget is None else budget
    count = _instance_count(d, ground_axioms)
    notes = []
    if count > EXHAUSTIVE_BOUND and _construction_ok(d):
        ground_entries = _structural(d, ground_axioms)
        window = False
        notes.append("ground axioms decided on lattice generators")
    else:
        if count > limit:
            raise BudgetExceeded(f"{d.name}: {count} instances exceed budget {limit}")
        ground_entries, window = _exhaustive(d, ground_axioms)
    by_name = dict(scalar_part)
    by_name.update({e.axiom: e for e in ground_entries})
    entries = tuple(by_name[a] for a in axioms)
    window = window or d.carrier.window_truncated
    return AxiomReport(d.name, entries, window, tuple(notes))


# ---------------------------------------------------------------------------
# substructures


def valid_subscalars(s: ScalarSet, subset: frozenset, kind: str) -> bool:
    """Whether ``subset`` is a subsemigroup-with-zero or subgroup as required."""
    if kind == "subset":
        return len(subset) > 0
    if s.zero is None or s.zero not in subset:
        return False
    for a in subset:
        for b in subset:
            c = _scalar_sum(s, a, b)
            if c is None or c not in subset:
                return False
    if kind == "subgroup":
        return all(any(_scalar_sum(s, a, b) == s.zero for b in subset) for a in subset)
    return True


def _induced(d: StructureDecl, W, family: str, subscalars) -> StructureDecl:
    scalars = d.scalars if subscalars is None else d.scalars.restrict(subscalars)
    return StructureDecl(f"{d.name}[sub]", family, d.carrier, W, scalars)


def check_substructure(
    d: StructureDecl, W, target_family: str | None = None, subscalars=None, budget: int | None = None
) -> AxiomReport:
    """Verify W (over the subscalars, or all scalars) as a ``target_family`` structure."""
    family = target_family or d.family
    W = as_subset(W)
    if len(W) == 0:
        raise NotASubset("empty subset")
    if not _is_subset(W, d.ground):
        raise NotASubset(f"subset is not inside the ground of {d.name}")
    if subscalars is not None:
        subscalars = frozenset(subscalars)
        if not subscalars <= d.scalars.member_set:
            raise NotASubset("subscalars are not members of the scalar set")
        kind = scalar_kind(family)
        if not valid_subscalars(d.scalars, subscalars, kind):
            raise SubscalarsNotClosed(f"subscalars do not form a {kind}")
    return verify_structure(_induced(d, W, family, subscalars), budget)


def enumerate_subscalars(s: ScalarSet, kind: str = "subgroup", bound: int = SUBSCALAR_BOUND) -> list[frozenset]:
    """All proper, nontrivial closed scalar subsets of the requested kind.

    ``subset`` lists every nonempty proper subset other than ``{zero}``.
    """
    members = s.members
    if kind == "subset":
        if len(members) > SUBSET_SEARCH_BOUND:
            raise BudgetExceeded(f"{len(members)} scalars are too many for a subset search")
        out = []
        for r in range(1, len(members)):
            for combo in itertools.combinations(members, r):
                sub = frozenset(combo)
                if s.zero is not None and sub == {s.zero}:
                    continue
                out.append(sub)
        return sorted(out, key=lambda x: (len(x), sorted(x)))
    if len(members) > bound:
        raise BudgetExceeded(f"{len(members)} scalars exceed the enumeration bound {bound}")
    if s.zero is None:
        return []

    def closure(gen: Iterable[Element]) -> frozenset | None:
        cur = set(gen) | {s.zero}
        frontier = list(cur)
        while frontier:
            new = []
            for a in frontier:
                for b in list(cur):
                    c = _scalar_sum(s, a, b)
                    if c is None or c not in s.member_set:
                        return None
                    if c not in cur:
                        cur.add(c)
                        new.append(c)
            frontier = new
        return frozenset(cur)

    seen = set()
    start = closure(())
    if start is None:
        return []
    stack = [start]
    seen.add(start)
    while stack:
        c = stack.pop()
        for x in members:
            if x in c:
                continue
            nxt = closure(c | {x})
            if nxt is not None and nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    full = s.member_set
    out = [c for c in seen if c != full and c != frozenset({s.zero}) and valid_subscalars(s, c, kind)]
    return sorted(out, key=lambda x: (len(x), sorted(x)))


_NOUN = {
    "set_vs": ("set_vector_subspace", "subset_vector_subspace"),
    "set_la": ("set_linear_subalgebra", "subset_linear_subalgebra"),
    "semigroup_vs": ("semigroup_vector_subspace", "subsemigroup_vector_subspace"),
    "semigroup_la": ("semigroup_linear_subalgebra", "subsemigroup_linear_subalgebra"),
    "group_vs": ("group_vector_subspace", "subgroup_vector_subspace"),
    "group_la": ("group_linear_subalgebra", "subgroup_linear_subalgebra"),
}


def _holds(d, W, family, T) -> bool:
    kind = scalar_kind(family)
    if T is not None and not valid_subscalars(d.scalars, T, kind):
        return False
    if T is None and kind != "subset" and not valid_subscalars(d.scalars, d.scalars.member_set, kind):
        return False
    return verify_structure(_induced(d, W, family, T)).holds


def classify_substructure(d: StructureDecl, W, subscalars=None, sections=None) -> list[str]:
    """Every substructure label that holds for W.

    Scalar sets tried are the full set plus either the given ``subscalars`` or
    every proper subgroup / subsemigroup / subset (the last only for small
    scalar sets).  A pseudo label means a strictly weaker family holds over a
    scalar set where ``d.family`` itself does not.  ``sections`` is an optional
    list of ``(W_i, T_i)`` pairs witnessing a sectional subspace.
    """
    W = as_subset(W)
    if len(W) == 0 or not _is_subset(W, d.ground):
        raise NotASubset(f"subset is not inside the ground of {d.name}")
    family = d.family
    if subscalars is not None:
        proper = [frozenset(subscalars)]
    else:
        proper = []
        for kind in ("subgroup", "subsemigroup", "subset"):
            try:
                proper += enumerate_subscalars(d.scalars, kind)
            except BudgetExceeded:
                pass
        proper = sorted(set(proper), key=lambda x: (len(x), sorted(x)))
    proper = [T for T in proper if T != d.scalars.member_set]
    labels = []
    own_full = _holds(d, W, family, None)
    if own_full:
        labels.append(_NOUN[family][0])
    own_sub = [T for T in proper if _holds(d, W, family, T)]
    if own_sub:
        labels.append(_NOUN[family][1])
    if family.startswith("group") and own_full and own_sub:
        labels.append("duo")
    for weaker in weaker_families(family):
        if not own_full and _holds(d, W, weaker, None):
            labels.append("pseudo_" + _NOUN[weaker][0])
        if any(_holds(d, W, weaker, T) and not _holds(d, W, family, T) for T in proper):
            labels.append("pseudo_" + _NOUN[weaker][1])
    if sections:
        if _sectional(d, W, sections):
            labels.append("sectional")
            common = frozenset.intersection(*(frozenset(T) for _, T in sections))
            if verify_structure(_induced(d, W, "set_vs", common)).holds and "subset_vector_subspace" not in labels:
                labels.append("subset_vector_subspace")
    return labels


def _sectional(d: StructureDecl, W, sections) -> bool:
    if len(sections) < 2:
        return False
    sets = [frozenset(sorted_elements(as_subset(Wi))) for Wi, _ in sections]
    scal = [frozenset(T) for _, T in sections]
    common = frozenset.intersection(*scal)
    inter = frozenset.intersection(*sets)
    if not common or not inter or inter != frozenset(sorted_elements(W)):
        return False
    for Wi, Ti in zip(sets, scal):
        if Ti == d.scalars.member_set:
            return False
        if not verify_structure(_induced(d, Wi, "set_vs", Ti)).holds:
            return False
    return True
