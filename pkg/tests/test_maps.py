import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import corpus as C
from setla.carrier import ScalarSet, act, nat_window, parse_literal, parse_set, zn, zn_tuple
from setla.errors import ChainMismatch, NotBijective, PartialTable, ScalarMismatch
from setla.maps import (
    Functional,
    LinearMap,
    NotLinear,
    annihilator,
    check_projection_onto,
    compose,
    coordinate_rule,
    enumerate_homs,
    from_function,
    identity,
    invert,
    verify_functional,
    verify_map,
)
from setla.structures import StructureDecl, _sum, sorted_elements


def law_holds(m):
    """Exhaustive oracle for T(g.a + c) = g.T(a) + T(c)."""
    s, mp = m.source.scalars, m.mapping
    V = sorted_elements(m.source.ground)
    for g, a, c in itertools.product(s.members, V, V):
        x = _sum(act(s, g, a), c)
        if mp[x] != _sum(act(s, g, mp[a]), mp[c]):
            return False
    return True


def test_doubling_on_windows_is_linear():
    c = nat_window(16)
    S = C.nat_scalars(16, [0, 1, 2, 4, 8, 16])
    V = StructureDecl("N", "set_vs", c, "all", S)
    W = StructureDecl("E", "set_vs", c, [c.make([x]) for x in range(0, 17, 2)], S)
    T = from_function(V, W, coordinate_rule("scale", [2], V, W))
    assert T.partial
    rep = verify_map(T)
    assert rep.linear and rep.window


def test_reversal_linear_and_invertible():
    V = C.reversal_space()
    T = from_function(V, V, lambda v: V.carrier.make(v.coords[::-1]))
    rep = verify_map(T)
    assert rep.linear and rep.invertible
    assert invert(T).mapping == T.mapping


def test_identity_and_composition():
    for build in (C.z2cube, C.z12_even, C.seven_element):
        d = build()
        I = identity(d)
        rep = verify_map(I)
        assert rep.linear and rep.invertible
    V = C.reversal_space()
    T = from_function(V, V, lambda v: V.carrier.make(v.coords[::-1]))
    assert compose(T, identity(V)).mapping == T.mapping
    assert compose(T, invert(T)).mapping == identity(V).mapping


def test_compose_matches_table_lookup():
    c = zn(3)
    d = StructureDecl("Z3", "group_vs", c, "all", C.z(3))
    rng = random.Random(7)
    V = sorted_elements(d.ground)
    for _ in range(20):
        t1 = {v: rng.choice(V) for v in V}
        t2 = {v: rng.choice(V) for v in V}
        m1 = LinearMap(d, d, tuple(t1.items()))
        m2 = LinearMap(d, d, tuple(t2.items()))
        assert compose(m1, m2).mapping == {v: t1[t2[v]] for v in V}


def test_compose_chain_mismatch():
    a, b = C.z2cube(), C.z6_cube()
    with pytest.raises(ChainMismatch):
        compose(identity(a), identity(b))


def test_non_surjective_doubling_not_invertible():
    c = zn(4)
    d = StructureDecl("Z4", "group_vs", c, "all", C.z(4))
    T = from_function(d, d, lambda v: c.make([2 * v.coords[0] % 4]))
    with pytest.raises(NotBijective):
        invert(T)


def test_nonlinear_bijection_rejected():
    c = zn(5)
    d = StructureDecl("Z5", "group_la", c, "all", C.z(5))
    T = from_function(d, d, lambda v: c.make([(v.coords[0] + 1) % 5]))
    assert not verify_map(T).linear
    with pytest.raises(NotLinear):
        invert(T)


def test_scalar_mismatch():
    V = StructureDecl("A", "group_vs", zn(6), "all", C.z(6))
    W = StructureDecl("B", "set_vs", zn(6), "all", C.z(6, "{0,2,4}"))
    with pytest.raises(ScalarMismatch):
        verify_map(LinearMap(V, W, tuple((v, v) for v in zn(6))))


def test_missing_image_is_partial_table():
    d = C.z2cube()
    with pytest.raises(PartialTable):
        verify_map(LinearMap(d, d, ((parse_literal("(0,0,0)", d.carrier),) * 2,)))


def test_doubling_projection_not_idempotent():
    _, W, T = C.doubling_projection()
    r = check_projection_onto(T, W)
    assert r.projection and not r.idempotent


def test_identity_projection_is_idempotent():
    d = C.z2cube()
    r = check_projection_onto(identity(d), d.ground)
    assert r.projection and r.idempotent


def test_coordinate_rules():
    d = C.z2cube()
    f = coordinate_rule("permute", [3, 1, 2], d, d)
    assert f(parse_literal("(1,0,0)", d.carrier)).coords == (0, 1, 0)
    g = coordinate_rule("project", [1], d, d)
    assert g(parse_literal("(1,1,1)", d.carrier)).coords == (1, 0, 0)
    h = coordinate_rule("linear", [[1, 1, 0], [0, 1, 1], [0, 0, 1]], d, d)
    assert h(parse_literal("(1,1,1)", d.carrier)).coords == (0, 0, 1)
    assert verify_map(from_function(d, d, h)).linear


def test_sum_functional_on_triples():
    c = nat_window(4, 3)
    S = C.nat_scalars(12, range(13))
    d = StructureDecl("T3", "set_vs", c, "all", S)
    f = Functional.from_function(d, lambda v: S.base.make([sum(v.coords)]))
    rep = verify_functional(f)
    assert rep.linear and rep.window


def test_zero_functional():
    d = C.z6_cube()
    z = d.scalars.zero
    assert verify_functional(Functional.from_function(d, lambda v: z)).linear


def test_shifted_functional_fails():
    c = zn(5)
    d = StructureDecl("Z5", "group_vs", c, "all", C.z(5))
    r = verify_functional(Functional.from_function(d, lambda v: c.make([(v.coords[0] + 1) % 5])))
    assert not r.linear
    assert r.witness[0].coords[0] in (0, 2)


def all_linear_functionals(d):
    """Brute-force filter over every table ground -> scalars (oracle)."""
    V = sorted_elements(d.ground)
    out = []
    for vals in itertools.product(d.scalars.members, repeat=len(V)):
        f = Functional(d, tuple(zip(V, vals)))
        if verify_functional(f).linear:
            out.append(f.mapping)
    return out


def test_annihilator_matches_brute_force():
    d = StructureDecl("P", "group_vs", zn_tuple(3, 2), "all", C.z(3))
    A = parse_set("{(0,0),(1,0)}", d.carrier)
    want = [m for m in all_linear_functionals(d) if all(m[a].is_zero for a in A)]
    got = [f.mapping for f in annihilator(d, A)]
    assert sorted(map(sorted_items, got)) == sorted(map(sorted_items, want))


def sorted_items(m):
    return tuple(sorted(m.items()))


def test_annihilator_trivial_cases():
    d = StructureDecl("Z3", "group_vs", zn(3), "all", C.z(3))
    assert len(annihilator(d, [d.carrier.zero()])) == len(all_linear_functionals(d))
    only = annihilator(d, sorted_elements(d.ground))
    assert len(only) == 1 and all(x.is_zero for x in only[0].mapping.values())


def test_homs_on_two_element_space():
    c = zn(2)
    d = StructureDecl("B", "group_vs", c, "all", C.z(2))
    V = sorted_elements(d.ground)
    want = []
    for vals in itertools.product(V, repeat=2):
        m = LinearMap(d, d, tuple(zip(V, vals)))
        if verify_map(m).linear:
            want.append(m.mapping)
    res = enumerate_homs(d, d)
    assert [m.mapping for m in res.maps] == want
    assert identity(d).mapping in want
    assert res.closed


# randomized checks of the exact algebra-law shortcut and of inverse linearity


@st.composite
def tables(draw):
    n = draw(st.sampled_from([2, 3]))
    k = 2
    c = zn_tuple(n, k)
    d = StructureDecl("D", "group_la", c, "all", ScalarSet.of(zn(n)))
    V = sorted_elements(d.ground)
    if draw(st.booleans()):
        M = [draw(st.lists(st.integers(0, n - 1), min_size=k, max_size=k)) for _ in range(k)]
        img = {v: c.make([sum(r[j] * v.coords[j] for j in range(k)) % n for r in M]) for v in V}
        if draw(st.booleans()):
            v = draw(st.sampled_from(V))
            img[v] = draw(st.sampled_from(V))
    else:
        img = {v: draw(st.sampled_from(V)) for v in V}
    return LinearMap(d, d, tuple(img.items()))


@settings(max_examples=200, deadline=None)
@given(tables())
def test_algebra_law_matches_exhaustive_oracle(m):
    assert verify_map(m).linear == law_holds(m)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from([2, 3]), st.data())
def test_inverse_of_linear_bijection_is_linear(n, data):
    k = 2 if n == 3 else 4
    c = zn_tuple(n, k)
    d = StructureDecl("D", "group_vs", c, "all", ScalarSet.of(zn(n)))
    perm = data.draw(st.permutations(range(k)))
    scale = data.draw(st.lists(st.integers(1, n - 1), min_size=k, max_size=k))
    m = from_function(d, d, lambda v: c.make([scale[i] * v.coords[perm[i]] % n for i in range(k)]))
    rep = verify_map(m)
    assert rep.linear and rep.invertible
    assert verify_map(invert(m)).linear
