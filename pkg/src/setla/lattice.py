"""Submodules of Z_n^k, kept as Hermite normal forms.

A subgroup of Z_n^k is the image of an integer lattice L with nZ^k <= L <= Z^k.
Storing the reduced HNF of L gives exact membership, cardinality, sums and
p-ranks without enumerating the subgroup, which is what makes spans over
carriers like Z_12[x] (12^11 elements) tractable.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .carrier import Element

__all__ = ["hnf", "LatticeSet", "prime_factors"]


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def hnf(vectors: Iterable[Sequence[int]], n: int, k: int) -> tuple[tuple[int, ...], ...]:
    """Reduced upper-triangular HNF of span(vectors) + nZ^k.

    Row i has pivot column i with a positive pivot dividing n; entries above
    each pivot are reduced into [0, pivot).
    """
    rows = [[c % n for c in v] for v in vectors]
    out = []
    for col in range(k):
        pivot = None
        rest = []
        # n*e_col joins only now, so earlier columns may reduce later entries mod n
        for r in rows + [[n if j == col else 0 for j in range(k)]]:
            if r[col] == 0:
                rest.append(r)
            elif pivot is None:
                pivot = r
            else:
                a, b = pivot[col], r[col]
                g, x, y = _egcd(a, b)
                new_p = [x * p + y * q for p, q in zip(pivot, r)]
                new_r = [(b // g) * p - (a // g) * q for p, q in zip(pivot, r)]
                pivot = new_p
                rest.append(new_r)
        if pivot[col] < 0:
            pivot = [-c for c in pivot]
        pivot = pivot[: col + 1] + [c % n for c in pivot[col + 1:]]
        rows = [r[: col + 1] + [c % n for c in r[col + 1:]] for r in rest]
        rows = [r for r in rows if any(r)]
        out.append(pivot)
    for i in range(k):
        for j in range(i):
            q = out[j][i] // out[i][i]
            if q:
                out[j] = [a - q * b for a, b in zip(out[j], out[i])]
    return tuple(tuple(r) for r in out)


def prime_factors(n: int) -> list[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class LatticeSet:
    """An additive subgroup of a single modular layout (shape, dims, n).

    Behaves like a read-only set of :class:`Element`: supports ``in``,
    ``len`` and iteration in canonical order.
    """

    def __init__(self, layout: tuple, vectors: Iterable[Sequence[int]]):
        self.layout = layout
        shape, dims, n = layout
        if shape == "nat":
            raise ValueError("lattices live on modular layouts only")
        self.n = n
        self.k = 1
        for d in dims:
            self.k *= d
        self.basis = hnf(vectors, n, self.k)

    @classmethod
    def span_of(cls, elements: Iterable[Element], layout: tuple | None = None) -> "LatticeSet":
        elements = list(elements)
        if layout is None:
            layout = elements[0].layout
        if any(e.layout != layout for e in elements):
            raise ValueError("all elements must share one layout")
        return cls(layout, [e.coords for e in elements])

    @classmethod
    def full(cls, layout: tuple) -> "LatticeSet":
        shape, dims, n = layout
        k = 1
        for d in dims:
            k *= d
        return cls(layout, [[1 if i == j else 0 for j in range(k)] for i in range(k)])

    @property
    def diag(self) -> tuple[int, ...]:
        return tuple(self.basis[i][i] for i in range(self.k))

    @cached_property
    def cardinality(self) -> int:
        size = 1
        for d in self.diag:
            size *= self.n // d
        return size

    def __len__(self) -> int:
        return self.cardinality

    def __eq__(self, other) -> bool:
        return isinstance(other, LatticeSet) and self.layout == other.layout and self.basis == other.basis

    def __hash__(self) -> int:
        return hash((self.layout, self.basis))

    def make(self, coords: Sequence[int]) -> Element:
        shape, dims, n = self.layout
        return Element(shape, dims, coords, n)

    def contains_vector(self, v: Sequence[int]) -> bool:
        v = [c % self.n for c in v]
        for i, row in enumerate(self.basis):
            if v[i] % row[i]:
                return False
            q = v[i] // row[i]
            if q:
                v = [(a - q * b) % self.n for a, b in zip(v, row)]
        return not any(v)

    def __contains__(self, e) -> bool:
        return isinstance(e, Element) and e.layout == self.layout and self.contains_vector(e.coords)

    def __le__(self, other: "LatticeSet") -> bool:
        return self.layout == other.layout and all(other.contains_vector(r) for r in self.basis)

    def generators(self) -> list[Element]:
        """Nonzero HNF rows reduced mod n, as elements in canonical order."""
        gens = {self.make([c % self.n for c in r]) for r in self.basis}
        return sorted(g for g in gens if not g.is_zero)

    def __iter__(self) -> Iterator[Element]:
        return iter(self.elements())

    def elements(self) -> tuple[Element, ...]:
        n = self.n
        ranges = [range(n // d) for d in self.diag]
        out = set()
        for cs in itertools.product(*ranges):
            v = [0] * self.k
            for c, row in zip(cs, self.basis):
                if c:
                    v = [a + c * b for a, b in zip(v, row)]
            out.add(self.make([a % n for a in v]))
        return tuple(sorted(out))

    def plus(self, other: "LatticeSet") -> "LatticeSet":
        return LatticeSet(self.layout, list(self.basis) + list(other.basis))

    def scaled(self, p: int) -> "LatticeSet":
        return LatticeSet(self.layout, [[p * c for c in r] for r in self.basis])

    def rank_p(self, p: int) -> int:
        """dim over F_p of M/pM; a lower bound on any generating set."""
        quotient = self.cardinality // self.scaled(p).cardinality
        r = 0
        while quotient > 1:
            quotient //= p
            r += 1
        return r

    def min_generators_bound(self) -> int:
        """Largest p-rank over the primes dividing n (exact for finite abelian groups)."""
        return max((self.rank_p(p) for p in prime_factors(self.n)), default=0)

    def __repr__(self) -> str:
        return f"LatticeSet({self.layout!r}, size={self.cardinality})"
