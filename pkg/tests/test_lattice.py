import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from setla.carrier import zn_tuple
from setla.lattice import LatticeSet, prime_factors


def closure(vectors, n, k):
    """Brute-force additive closure (oracle)."""
    seen = {tuple([0] * k)}
    frontier = list(seen)
    gens = [tuple(c % n for c in v) for v in vectors]
    while frontier:
        nxt = []
        for v in frontier:
            for g in gens:
                w = tuple((a + b) % n for a, b in zip(v, g))
                if w not in seen:
                    seen.add(w)
                    nxt.append(w)
        frontier = nxt
    return seen


def min_generators(vectors, n, k):
    """Smallest generating subset of the subgroup, by exhaustive search (oracle)."""
    target = closure(vectors, n, k)
    elems = sorted(target)
    for r in range(0, len(elems) + 1):
        for combo in itertools.combinations(elems, r):
            if closure(combo, n, k) == target:
                return r


cases = st.integers(2, 6).flatmap(
    lambda n: st.integers(1, 3).flatmap(
        lambda k: st.tuples(
            st.just(n),
            st.just(k),
            st.lists(st.lists(st.integers(0, n - 1), min_size=k, max_size=k), max_size=3),
        )
    )
)


@settings(max_examples=200, deadline=None)
@given(cases)
def test_membership_matches_closure(case):
    n, k, vecs = case
    L = LatticeSet(zn_tuple(n, k).layout, vecs)
    want = closure(vecs, n, k)
    assert {e.coords for e in L} == want
    assert len(L) == len(want)
    for v in itertools.product(range(n), repeat=k):
        assert L.contains_vector(v) == (v in want)


@settings(max_examples=60, deadline=None)
@given(cases.filter(lambda c: c[0] ** c[1] <= 27))
def test_generator_bound_is_exact(case):
    n, k, vecs = case
    L = LatticeSet(zn_tuple(n, k).layout, vecs)
    assert L.min_generators_bound() == min_generators(vecs, n, k)


def test_full_and_order():
    lay = zn_tuple(6, 2).layout
    full = LatticeSet.full(lay)
    assert len(full) == 36
    half = LatticeSet(lay, [[2, 0], [0, 3]])
    assert len(half) == 6
    assert half <= full and not full <= half
    assert half.plus(LatticeSet(lay, [[1, 0]])) == LatticeSet(lay, [[1, 0], [0, 3]])


def test_prime_factors():
    assert prime_factors(12) == [2, 3]
    assert prime_factors(7) == [7]
