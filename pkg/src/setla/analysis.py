"""Generation, independence, dimension, substructure search, simplicity and decompositions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .carrier import Carrier, Element, ScalarSet, act, zero_like
from .errors import (
    BudgetExceeded,
    ModeUnsupported,
    PartNotSubstructure,
    SetlaError,
    StructureInvalid,
    WindowOverflow,
)
from .lattice import LatticeSet
from .structures import (
    Budget,
    StructureDecl,
    _construction_ok,
    _is_subset,
    _sum,
    as_subset,
    check_substructure,
    enumerate_subscalars,
    family_axioms,
    lattice_view,
    scalar_kind,
    sorted_elements,
    valid_subscalars,
    verify_structure,
)

__all__ = [
    "GenerationResult",
    "Independence",
    "MinGenerating",
    "Simplicity",
    "DecompositionReport",
    "span",
    "span_with_flag",
    "is_generating",
    "is_independent",
    "min_generating",
    "enumerate_substructures",
    "is_simple",
    "check_decomposition",
]

MODES = ("single_step", "iterated")
ENUMERATION_LIMIT = 2_000_000
UNCOVERED_CAP = 1000


@dataclass(frozen=True)
class GenerationResult:
    generating: bool
    uncovered: tuple[Element, ...]
    mode: str
    certificate: str | None = None
    window: bool = False
    truncated: bool = False

    def __bool__(self):
        return self.generating


@dataclass(frozen=True)
class Independence:
    independent: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.independent


@dataclass(frozen=True)
class MinGenerating:
    elements: tuple[Element, ...]
    certificate: str
    mode: str
    window: bool = False
    lower_bound: int = 0

    @property
    def cardinality(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Simplicity:
    simple: bool | None
    witness: tuple | None = None
    kind: str = "simple"
    exhausted: bool = False

    def __bool__(self):
        return bool(self.simple)


@dataclass(frozen=True)
class DecompositionReport:
    mode: str
    covers: bool
    pairwise: tuple[tuple[str, ...], ...]
    distinct: bool
    verdict: bool
    witness: tuple | None = None

    def __bool__(self):
        return self.verdict


# ---------------------------------------------------------------------------
# spans


def _mode(d: StructureDecl, mode: str | None) -> str:
    if mode is None:
        return "iterated" if d.is_algebra else "single_step"
    if mode not in MODES:
        raise ModeUnsupported(f"unknown mode {mode!r}")
    if d.is_algebra and mode == "single_step":
        raise ModeUnsupported("algebra families generate by sums; single_step does not apply")
    return mode


def _lattice_ok(d: StructureDecl, B: Sequence[Element]) -> bool:
    if d.scalars.action != "mod_mul" or any(g.dims != () for g in d.scalars.members):
        return False
    layouts = {b.layout for b in B}
    return len(layouts) == 1 and next(iter(layouts))[0] != "nat"


def _zero_of(d: StructureDecl) -> Element:
    z = d.carrier.zero()
    if z is None:
        z = zero_like(sorted_elements(d.ground)[0])
    return z


def _closure(d: StructureDecl, B: Iterable[Element], scalars: ScalarSet, sums: bool, budget: Budget | None = None):
    """Least superset of B closed under the action (and + when ``sums``)."""
    s = scalars
    seen = set(B)
    order = list(seen)
    window = False
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        new = []
        for g in s.members:
            try:
                y = act(s, g, x)
            except WindowOverflow:
                window = True
                continue
            new.append(y)
        if sums:
            for y in order[: i]:
                w = _sum(x, y)
                if w is None:
                    window = True
                elif w != "undefined":
                    new.append(w)
        if budget is not None:
            budget.spend(len(new))
        for y in new:
            if y not in seen:
                seen.add(y)
                order.append(y)
    return frozenset(seen), window


def span_with_flag(d: StructureDecl, B, mode: str | None = None, budget: Budget | None = None):
    """Span of B together with the window flag."""
    mode = _mode(d, mode)
    B = sorted(set(B))
    if not _is_subset(frozenset(B), d.ground):
        raise StructureInvalid("generating candidates must lie in the ground")
    if d.is_algebra:
        if not B:
            return frozenset({_zero_of(d)}), False
        if _lattice_ok(d, B):
            return LatticeSet.span_of(B), False
        return _closure(d, B, d.scalars, True, budget)
    if mode == "iterated":
        return _closure(d, B, d.scalars, False, budget)
    out = set(B)
    window = False
    for b in B:
        for g in d.scalars.members:
            try:
                out.add(act(d.scalars, g, b))
            except WindowOverflow:
                window = True
    return frozenset(out), window


def span(d: StructureDecl, B, mode: str | None = None):
    return span_with_flag(d, B, mode)[0]


def _missing(ground, covered, cap: int = UNCOVERED_CAP) -> tuple[tuple[Element, ...], bool]:
    glat = lattice_view(ground)
    if glat is not None and isinstance(covered, LatticeSet):
        if glat <= covered:
            return (), False
        if glat.cardinality > ENUMERATION_LIMIT:
            gens = [g for g in glat.generators() if g not in covered]
            return tuple(gens[:cap]), True
    out = []
    source = iter(ground) if isinstance(ground, Carrier) else sorted_elements(ground)
    for v in source:
        if v not in covered:
            out.append(v)
            if len(out) >= cap:
                return tuple(out), True
    return tuple(out), False


def is_generating(d: StructureDecl, B, mode: str | None = None) -> GenerationResult:
    mode_used = _mode(d, mode)
    sp, window = span_with_flag(d, B, mode)
    miss, truncated = _missing(d.ground, sp)
    return GenerationResult(not miss, miss, mode_used, None, window or d.carrier.window_truncated, truncated)


# ---------------------------------------------------------------------------
# independence


def is_independent(d: StructureDecl, B, budget: int | None = None) -> Independence:
    """Family-specific independence test with a canonical-first witness."""
    B = sorted(set(B))
    s = d.scalars
    if d.family == "group_la":
        return _group_combination(d, B, Budget(budget))
    for x in B:
        for y in B:
            if x == y:
                continue
            for g in s.members:
                try:
                    if act(s, g, y) == x:
                        return Independence(False, (x, g, y))
                except WindowOverflow:
                    continue
    if d.family == "semigroup_la":
        return _other_combination(d, B, Budget(budget))
    return Independence(True)


def _combine(s: ScalarSet, coeffs, vecs):
    total = None
    for a, v in zip(coeffs, vecs):
        term = act(s, a, v)
        total = term if total is None else _sum(total, term)
        if total is None or total == "undefined":
            return None
    return total


def _group_combination(d, B, budget: Budget) -> Independence:
    s = d.scalars
    z = s.zero
    if not B:
        return Independence(True)
    if _lattice_ok(d, B):
        n = B[0].mod
        full = {g.coords[0] for g in s.members} == set(range(n)) and all(g.mod == n for g in s.members)
        if full and LatticeSet.span_of(B).cardinality == n ** len(B):
            return Independence(True)
    for coeffs in itertools.product(s.members, repeat=len(B)):
        budget.spend(len(B))
        if all(c == z for c in coeffs):
            continue
        try:
            total = _combine(s, coeffs, B)
        except WindowOverflow:
            continue
        if total is not None and total.is_zero:
            return Independence(False, tuple(zip(coeffs, B)))
    return Independence(True)


def _other_combination(d, B, budget: Budget) -> Independence:
    s = d.scalars
    for k, target in enumerate(B):
        others = B[:k] + B[k + 1:]
        for r in range(1, len(others) + 1):
            for sub in itertools.combinations(others, r):
                for coeffs in itertools.product(s.members, repeat=r):
                    budget.spend(r)
                    try:
                        total = _combine(s, coeffs, sub)
                    except WindowOverflow:
                        continue
                    if total == target:
                        return Independence(False, (target,) + tuple(zip(coeffs, sub)))
    return Independence(True)


# ---------------------------------------------------------------------------
# minimum generating sets


def min_generating(d: StructureDecl, mode: str | None = None, budget: int | None = None) -> MinGenerating:
    """A minimum-cardinality generating set with a minimality certificate."""
    mode = _mode(d, mode)
    report = verify_structure(d)
    if not report.holds:
        raise StructureInvalid(f"{d.name} fails {report.failing().axiom}")
    b = Budget(budget)
    if d.is_algebra:
        return _min_algebra(d, b)
    if mode == "iterated":
        return _min_iterated(d)
    return _min_cover(d, b)


def _min_algebra(d: StructureDecl, budget: Budget) -> MinGenerating:
    ground = d.ground
    if len(ground) == 1 and next(iter(ground)).is_zero:
        return MinGenerating((), "exhaustive", "iterated")
    glat = lattice_view(ground)
    if glat is None and isinstance(ground, frozenset):
        layouts = {v.layout for v in ground}
        if len(layouts) == 1 and _lattice_ok(d, list(ground)):
            cand = LatticeSet.span_of(ground)
            if cand.cardinality == len(ground):
                glat = cand
    if glat is not None and _lattice_ok(d, glat.generators() or [_zero_of(d)]):
        return _min_lattice(d, glat, budget)
    return _min_generic_algebra(d, budget)


def _min_lattice(d: StructureDecl, L: LatticeSet, budget: Budget) -> MinGenerating:
    lb = L.min_generators_bound()
    enumerable = len(d.ground) <= ENUMERATION_LIMIT
    if isinstance(d.ground, frozenset):
        candidates = sorted(d.ground)
    else:
        candidates = L.generators()
    chosen: list[Element] = []
    cur = LatticeSet(L.layout, [])
    for c in candidates:
        if cur == L:
            break
        if c not in cur:
            chosen.append(c)
            cur = cur.plus(LatticeSet.span_of([c]))
    for c in list(chosen):
        rest = [x for x in chosen if x != c]
        if rest and LatticeSet.span_of(rest) == L:
            chosen = rest
    chosen = sorted(chosen)
    if len(chosen) == lb:
        return MinGenerating(tuple(chosen), "counting_bound", "iterated", False, lb)
    if not enumerable:
        return MinGenerating(tuple(chosen), "budget_exhausted", "iterated", False, lb)
    pool = sorted_elements(d.ground)
    pool = [v for v in pool if not v.is_zero]
    try:
        for size in range(lb, len(chosen)):
            for combo in itertools.combinations(pool, size):
                budget.spend(size)
                if LatticeSet.span_of(combo) == L:
                    return MinGenerating(tuple(combo), "exhaustive", "iterated", False, lb)
    except BudgetExceeded:
        return MinGenerating(tuple(chosen), "budget_exhausted", "iterated", False, lb)
    return MinGenerating(tuple(chosen), "exhaustive", "iterated", False, lb)


def _min_generic_algebra(d: StructureDecl, budget: Budget) -> MinGenerating:
    V = sorted_elements(d.ground)
    target = frozenset(V)
    window = d.carrier.window_truncated

    def generates(B) -> bool:
        nonlocal window
        sp, w = span_with_flag(d, B, None, budget)
        window = window or w
        return target <= sp

    chosen: list[Element] = []
    covered = span(d, [])
    for v in V:
        if v not in covered:
            chosen.append(v)
            covered, w = span_with_flag(d, chosen, None)
            window = window or w
    for c in list(chosen):
        rest = [x for x in chosen if x != c]
        if generates(rest):
            chosen = rest
    try:
        for size in range(0, len(chosen)):
            for combo in itertools.combinations(V, size):
                if generates(combo):
                    return MinGenerating(tuple(combo), "exhaustive", "iterated", window)
    except BudgetExceeded:
        return MinGenerating(tuple(sorted(chosen)), "budget_exhausted", "iterated", window)
    return MinGenerating(tuple(sorted(chosen)), "exhaustive", "iterated", window)


def _min_cover(d: StructureDecl, budget: Budget) -> MinGenerating:
    """Exact set cover: each candidate b covers {s.b} together with b."""
    V = sorted_elements(d.ground)
    index = {v: i for i, v in enumerate(V)}
    s = d.scalars
    window = d.carrier.window_truncated
    covers = []
    for b in V:
        mask = 1 << index[b]
        for g in s.members:
            try:
                w = act(s, g, b)
            except WindowOverflow:
                window = True
                continue
            if w in index:
                mask |= 1 << index[w]
        covers.append(mask)
    full = (1 << len(V)) - 1
    biggest = max(bin(m).count("1") for m in covers)
    lb = -(-len(V) // biggest)

    by_element = [[i for i in range(len(V)) if covers[i] >> e & 1] for e in range(len(V))]
    packing = _packing_bound(by_element)

    # greedy upper bound
    left, greedy = full, []
    while left:
        best = max(range(len(V)), key=lambda i: (bin(covers[i] & left).count("1"), -i))
        greedy.append(best)
        left &= ~covers[best]
    if len(greedy) == lb:
        return MinGenerating(tuple(sorted(V[i] for i in greedy)), "counting_bound", "single_step", window, lb)
    if len(greedy) == packing:
        # every smaller candidate set misses one of the packed elements
        return MinGenerating(tuple(sorted(V[i] for i in greedy)), "exhaustive", "single_step", window, packing)
    lb = max(lb, packing)
    best = [sorted(greedy)]
    exhausted = False

    def search(left: int, chosen: list[int]):
        budget.spend()
        if not left:
            if len(chosen) < len(best[0]):
                best[0] = sorted(chosen)
            return
        need = -(-bin(left).count("1") // biggest)
        if len(chosen) + need >= len(best[0]):
            return
        # branch on the uncovered element with the fewest covering candidates
        pick, options = None, None
        rest = left
        while rest:
            low = rest & -rest
            e = low.bit_length() - 1
            rest ^= low
            opts = by_element[e]
            if options is None or len(opts) < len(options):
                pick, options = e, opts
                if len(opts) == 1:
                    break
        for i in options:
            chosen.append(i)
            search(left & ~covers[i], chosen)
            chosen.pop()

    try:
        search(full, [])
    except BudgetExceeded:
        exhausted = True
    cert = "budget_exhausted" if exhausted else "exhaustive"
    return MinGenerating(tuple(sorted(V[i] for i in best[0])), cert, "single_step", window, lb)


def _packing_bound(by_element: list[list[int]]) -> int:
    """Elements whose candidate generators are pairwise disjoint each need their own."""
    used, count = set(), 0
    for e in sorted(range(len(by_element)), key=lambda e: (len(by_element[e]), e)):
        opts = by_element[e]
        if used.isdisjoint(opts):
            used.update(opts)
            count += 1
    return count


def _min_iterated(d: StructureDecl) -> MinGenerating:
    """One canonical-least element per source component of the action graph."""
    V = sorted_elements(d.ground)
    index = {v: i for i, v in enumerate(V)}
    s = d.scalars
    window = d.carrier.window_truncated
    edges = [[] for _ in V]
    for i, v in enumerate(V):
        for g in s.members:
            try:
                w = act(s, g, v)
            except WindowOverflow:
                window = True
                continue
            j = index.get(w)
            if j is not None and j != i:
                edges[i].append(j)
    comp = _scc(edges)
    has_in = set()
    for i, outs in enumerate(edges):
        for j in outs:
            if comp[i] != comp[j]:
                has_in.add(comp[j])
    reps = {}
    for i in range(len(V)):
        c = comp[i]
        if c not in has_in and c not in reps:
            reps[c] = V[i]
    return MinGenerating(tuple(sorted(reps.values())), "exhaustive", "iterated", window, len(reps))


def _scc(edges: list[list[int]]) -> list[int]:
    """Tarjan's algorithm, iterative; returns a component id per vertex."""
    n = len(edges)
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    comp = [-1] * n
    stack, counter, ncomp = [], 0, 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        while work:
            v, pi = work.pop()
            if pi == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on[v] = True
            recurse = False
            for k in range(pi, len(edges[v])):
                w = edges[v][k]
                if index[w] == -1:
                    work.append((v, k + 1))
                    work.append((w, 0))
                    recurse = True
                    break
                if on[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return comp


# ---------------------------------------------------------------------------
# substructure search


def _is_trivial(W) -> bool:
    return all(v.is_zero for v in W)


def enumerate_substructures(
    d: StructureDecl, target_family: str | None = None, size_bound: int | None = None, budget: int | None = None
) -> list[frozenset]:
    """All proper, nontrivial substructures of size <= size_bound, canonical order.

    Candidates are the closed sets reachable by repeatedly adding an element
    and closing; every substructure is closed, so none is missed.
    """
    family = target_family or d.family
    V = sorted_elements(d.ground)
    if len(V) > ENUMERATION_LIMIT:
        raise BudgetExceeded("ground too large to enumerate substructures")
    bound = len(V) if size_bound is None else size_bound
    sums = family.endswith("_la")
    b = Budget(budget)
    ground = frozenset(V)
    found: set[frozenset] = set()
    seen: set[frozenset] = set()
    start = frozenset()
    stack = [start]
    partial = False
    cache: dict[Element, frozenset] = {}

    def close(C: frozenset, v: Element) -> frozenset:
        if not sums:
            if v not in cache:
                cache[v] = _closure(d, [v], d.scalars, False)[0] & ground
            return C | cache[v]
        return _closure(d, list(C | {v}), d.scalars, True, b)[0] & ground

    try:
        while stack:
            C = stack.pop()
            for v in V:
                if v in C:
                    continue
                b.spend()
                nxt = close(C, v)
                if nxt in seen or len(nxt) > bound:
                    continue
                seen.add(nxt)
                stack.append(nxt)
                if nxt != ground and not _is_trivial(nxt):
                    if check_substructure(d, nxt, family).holds:
                        found.add(nxt)
    except BudgetExceeded as exc:
        partial = True
        result = sorted(found, key=lambda W: (len(W), sorted(W)))
        raise BudgetExceeded(str(exc), partial=result) from None
    return sorted(found, key=lambda W: (len(W), sorted(W)))


# ---------------------------------------------------------------------------
# simplicity

_PSEUDO_WEAKER = {
    "group_vs": "semigroup_vs",
    "group_la": "semigroup_la",
    "semigroup_la": "semigroup_vs",
    "semigroup_vs": "set_vs",
    "set_la": "set_vs",
}


def is_simple(d: StructureDecl, kind: str = "simple", budget: int | None = None) -> Simplicity:
    """Simplicity checks; ``simple`` is None when a search ran out of budget."""
    if kind == "simple":
        return _simple(d)
    if kind == "pseudo_simple":
        return _pseudo_simple(d, Budget(budget))
    if kind == "strongly_simple":
        base = _simple(d)
        if not base.simple:
            return Simplicity(False, base.witness, kind)
        return _strongly_simple(d, Budget(budget))
    raise ModeUnsupported(f"unknown simplicity kind {kind!r}")


def _simple(d: StructureDecl) -> Simplicity:
    V = sorted_elements(d.ground)
    ground = frozenset(V)
    sums = d.is_algebra
    for H in enumerate_subscalars(d.scalars, scalar_kind(d.family)):
        sub = d.scalars.restrict(H)
        for v in V:
            if v.is_zero:
                continue
            W = _closure(d, [v, zero_like(v)], sub, sums)[0]
            if W == ground or not W <= ground or _is_trivial(W):
                continue
            if check_substructure(d, W, d.family, H).holds:
                return Simplicity(False, (tuple(sorted(W)), tuple(sorted(H))), "simple")
    return Simplicity(True, None, "simple")


def _pseudo_simple(d: StructureDecl, budget: Budget) -> Simplicity:
    weaker = _PSEUDO_WEAKER.get(d.family)
    if weaker is None:
        raise ModeUnsupported(f"pseudo simplicity is not defined for {d.family}")
    V = sorted_elements(d.ground)
    ground = frozenset(V)
    own_ground = set(family_axioms(d.family)) - set(family_axioms(weaker))
    own_ground -= {"add_identity", "add_inverses"}
    own_ground = {a for a in own_ground if not a.startswith("scalar_")}
    modular = all(v.shape != "nat" for v in V)
    subsets = enumerate_subscalars(d.scalars, "subsemigroup")
    sums = weaker.endswith("_la")
    for T in subsets:
        # when T already satisfies the stronger scalar kind and the stronger
        # family adds no ground axiom, a pseudo substructure cannot exist
        if modular and not own_ground and valid_subscalars(d.scalars, T, scalar_kind(d.family)):
            continue
        sub = d.scalars.restrict(T)
        seen = set()
        stack = [frozenset()]
        try:
            while stack:
                C = stack.pop()
                for v in V:
                    if v in C:
                        continue
                    budget.spend()
                    nxt = _closure(d, list(C | {v, zero_like(v)}), sub, sums)[0] & ground
                    if nxt in seen:
                        continue
                    seen.add(nxt)
                    stack.append(nxt)
                    if nxt == ground or _is_trivial(nxt):
                        continue
                    if check_substructure(d, nxt, weaker, T).holds:
                        strong = valid_subscalars(d.scalars, T, scalar_kind(d.family)) and check_substructure(
                            d, nxt, d.family, T
                        ).holds
                        if not strong:
                            return Simplicity(False, (tuple(sorted(nxt)), tuple(sorted(T))), "pseudo_simple")
        except BudgetExceeded:
            return Simplicity(None, None, "pseudo_simple", True)
    return Simplicity(True, None, "pseudo_simple")


def _strongly_simple(d: StructureDecl, budget: Budget) -> Simplicity:
    try:
        subs = enumerate_substructures(d, d.family, None, budget.left)
    except BudgetExceeded:
        return Simplicity(None, None, "strongly_simple", True)
    for W1, W2 in itertools.combinations(subs, 2):
        budget.spend(len(W1) * len(W2))
        rep = check_decomposition(d, [W1, W2], "direct_sum" if d.is_algebra else "direct_union")
        if rep.verdict:
            return Simplicity(False, (tuple(sorted(W1)), tuple(sorted(W2))), "strongly_simple")
    return Simplicity(True, None, "strongly_simple")


# ---------------------------------------------------------------------------
# decompositions

DECOMPOSITION_MODES = ("direct_sum", "pseudo_direct_sum", "direct_union", "pseudo_direct_union")


def _setwise_sum(parts: list) -> frozenset:
    total = frozenset(sorted_elements(parts[0]))
    for P in parts[1:]:
        elems = sorted_elements(P)
        nxt = set()
        for a in total:
            for b in elems:
                w = _sum(a, b)
                if isinstance(w, Element):
                    nxt.add(w)
        total = frozenset(nxt)
    return total


def _intersection_kind(A, B) -> tuple[str, Element | None]:
    la, lb = lattice_view(A), lattice_view(B)
    if la is not None and lb is not None and la.layout == lb.layout:
        size = la.cardinality * lb.cardinality // la.plus(lb).cardinality
        if size == 1:
            return "zero", None
        if la.cardinality <= ENUMERATION_LIMIT:
            common = [v for v in la.elements() if v in lb and not v.is_zero]
            return "nonzero", common[0] if common else None
        return "nonzero", None
    common = sorted(set(sorted_elements(A)) & set(sorted_elements(B)))
    if not common:
        return "empty", None
    nz = [v for v in common if not v.is_zero]
    return ("nonzero", nz[0]) if nz else ("zero", None)


def _contained(A, B) -> bool:
    return _is_subset(A, B)


def check_decomposition(d: StructureDecl, parts: Sequence, mode: str = "direct_sum") -> DecompositionReport:
    """Check a direct or pseudo-direct sum/union decomposition of ``d``."""
    if mode not in DECOMPOSITION_MODES:
        raise ModeUnsupported(f"unknown decomposition mode {mode!r}")
    parts = [as_subset(P) for P in parts]
    for i, P in enumerate(parts):
        try:
            ok = check_substructure(d, P, d.family).holds
        except SetlaError as exc:
            raise PartNotSubstructure(f"part {i + 1}: {exc}") from None
        if not ok:
            raise PartNotSubstructure(f"part {i + 1} is not a {d.family} substructure")
    summing = mode.endswith("sum")
    witness = None
    lats = [lattice_view(P) for P in parts]
    glat = lattice_view(d.ground)
    if summing and glat is not None and all(L is not None and L.layout == glat.layout for L in lats):
        total = lats[0]
        for L in lats[1:]:
            total = total.plus(L)
        covers = glat <= total
        if not covers:
            witness = ("uncovered", next(g for g in glat.generators() if g not in total))
    else:
        covered = _setwise_sum(parts) if summing else frozenset().union(*(sorted_elements(P) for P in parts))
        miss = [v for v in sorted_elements(d.ground) if v not in covered]
        covers = not miss
        if miss:
            witness = ("uncovered", miss[0])
    n = len(parts)
    grid = [["self"] * n for _ in range(n)]
    first_overlap = None
    for i, j in itertools.combinations(range(n), 2):
        kind, elem = _intersection_kind(parts[i], parts[j])
        grid[i][j] = grid[j][i] = kind
        if kind == "nonzero" and first_overlap is None:
            first_overlap = ("overlap", i + 1, j + 1, elem)
    distinct = True
    for i, j in itertools.combinations(range(n), 2):
        if _contained(parts[i], parts[j]) or _contained(parts[j], parts[i]):
            distinct = False
            if witness is None and mode.startswith("pseudo"):
                witness = ("containment", i + 1, j + 1)
            break
    kinds = [grid[i][j] for i, j in itertools.combinations(range(n), 2)]
    if mode == "direct_sum":
        verdict = covers and all(k in ("zero", "empty") for k in kinds)
    elif mode == "direct_union":
        verdict = covers and all(k in ("zero", "empty") for k in kinds)
    else:
        verdict = covers and "nonzero" in kinds and distinct
    if not verdict and witness is None:
        if not mode.startswith("pseudo") and first_overlap is not None:
            witness = first_overlap
        elif mode.startswith("pseudo") and "nonzero" not in kinds:
            witness = ("no_overlap",)
    return DecompositionReport(mode, covers, tuple(tuple(r) for r in grid), distinct, verdict, witness)
