import itertools

import pytest

import corpus as C
from setla.analysis import (
    check_decomposition,
    enumerate_substructures,
    is_generating,
    is_independent,
    is_simple,
    min_generating,
    span,
)
from setla.carrier import ScalarSet, act, parse_literal, parse_set, zn, zn_tuple
from setla.errors import ModeUnsupported, PartNotSubstructure
from setla.structures import StructureDecl, check_substructure, sorted_elements


def coords(S):
    return sorted(e.coords for e in sorted_elements(S))


def test_unit_vectors_span_z2_cube():
    d = C.z2cube()
    B = parse_set("{(1,0,0),(0,1,0),(0,0,1)}", d.carrier)
    assert len(span(d, B)) == 8


def test_empty_span_for_vector_space_family():
    d = C.z12_even()
    assert len(span(d, [])) == 0


def test_generation_mode_dependence():
    d = C.three_chain()
    B = parse_set("{0,3}", d.carrier)
    assert coords(span(d, B, "single_step")) == [(0,), (3,), (9,)]
    assert coords(span(d, B, "iterated")) == [(0,), (3,), (9,), (27,), (81,)]


def test_single_step_rejected_for_algebras():
    with pytest.raises(ModeUnsupported):
        span(C.z2cube(), [], "single_step")


def test_nonzero_elements_generate_seven_element_space():
    d = C.seven_element()
    T = [v for v in sorted_elements(d.ground) if not v.is_zero]
    assert len(T) == 5
    assert is_generating(d, T).generating


def test_ground_generates_with_identity_scalar():
    for build in (C.z12_even, C.seven_element, C.z6_cube):
        d = build()
        assert is_generating(d, sorted_elements(d.ground)).generating


def test_two_generates_even_window():
    d = C.evens_window()
    r = is_generating(d, [parse_literal("2", d.carrier)])
    assert r.generating and r.window


def test_uncovered_elements_reported():
    d = C.evens_window()
    r = is_generating(d, [parse_literal("4", d.carrier)])
    assert not r.generating
    assert r.uncovered[0].coords == (2,)


def test_dependence_witness():
    d = C.positive_window()
    r = is_independent(d, parse_set("{2,6,12}", d.carrier))
    assert not r.independent
    x, g, y = r.witness
    assert (x.coords, g.coords, y.coords) == ((12,), (6,), (2,))


def test_independent_pairs():
    d = C.positive_window()
    assert is_independent(d, parse_set("{1,3}", d.carrier)).independent
    assert is_independent(d, parse_set("{5}", d.carrier)).independent


def test_group_algebra_independence():
    d = C.z2cube()
    assert is_independent(d, parse_set("{(1,0,0),(0,1,0)}", d.carrier)).independent
    r = is_independent(d, parse_set("{(1,0,0),(0,1,0),(1,1,0)}", d.carrier))
    assert not r.independent


@pytest.mark.parametrize(
    "build, size",
    [(C.z2cube, 3), (C.z6_matrices, 4), (C.seven_element, 5), (C.z14_cube, 3), (C.reversal_space, 4)],
)
def test_dimensions(build, size):
    r = min_generating(build())
    assert r.cardinality == size
    assert r.certificate in ("exhaustive", "counting_bound")


def test_zero_ground_has_dimension_zero():
    c = zn_tuple(3, 2)
    d = StructureDecl("Z", "group_la", c, [c.zero()], C.z(3))
    assert min_generating(d).cardinality == 0
    assert coords(span(d, [])) == [(0, 0)]


def test_substructures_match_orbit_oracle():
    c = zn_tuple(7, 2)
    s = ScalarSet.of(zn(7))
    d = StructureDecl("P", "group_vs", c, "all", s)
    orbits = {frozenset(act(s, g, v) for g in s.members) for v in c if not v.is_zero}
    want = set()
    for r in range(1, len(orbits) + 1):
        for combo in itertools.combinations(sorted(orbits, key=sorted), r):
            W = frozenset().union(*combo)
            if len(W) <= 7 and check_substructure(d, W).holds:
                want.add(W)
    got = set(enumerate_substructures(d, size_bound=7))
    assert got == want and len(got) == 8


def test_listed_subspaces_found():
    d = C.five_tuples()
    subs = set(enumerate_substructures(d))
    assert parse_set("{(1,1,0,0,1),(0,0,0,0,0)}", d.carrier) in subs
    assert parse_set("{(0,0,0),(1,1,1)}", d.carrier) in subs
    assert parse_set("{(1,1,1),(1,1,0,0)}", d.carrier) not in subs


def test_simple_structures_have_no_substructures():
    d = C.z7_cube()
    assert is_simple(d).simple
    c = zn_tuple(7, 1)
    assert enumerate_substructures(StructureDecl("Z7", "group_vs", c, "all", C.z(7))) == []


def test_non_simple_witness_is_a_substructure():
    d = C.z6_cube()
    r = is_simple(d)
    W, H = r.witness
    assert check_substructure(d, frozenset(W), "group_vs", frozenset(H)).holds


def test_zero_ground_is_simple():
    c = zn_tuple(6, 2)
    assert is_simple(StructureDecl("Z", "group_vs", c, [c.zero()], C.z(6))).simple


def test_coordinate_axes_direct_sum():
    d = C.z14_cube()
    rep = check_decomposition(d, [C.axes(d.carrier, [i]) for i in range(3)])
    assert rep.verdict and rep.covers
    assert all(k in ("self", "zero") for row in rep.pairwise for k in row)


def test_single_summand():
    d = C.z2cube()
    assert check_decomposition(d, [d.ground]).verdict


def test_pseudo_direct_sum_on_2x3_matrices():
    d = C.matrices_2x3()
    c = d.carrier
    W = [C.axes(c, [0, 1, 3]), C.axes(c, [1, 2]), C.axes(c, [0, 2, 3, 5]), C.axes(c, [0, 1, 4, 5])]
    assert check_decomposition(d, W, "pseudo_direct_sum").verdict
    assert not check_decomposition(d, W, "direct_sum").verdict


def test_partial_cover_rejected():
    d = C.matrices_2x2()
    c = d.carrier
    rep = check_decomposition(d, [C.axes(c, [0, 1]), C.axes(c, [2])])
    assert not rep.covers and rep.witness[0] == "uncovered"


def test_non_substructure_part():
    d = C.z2cube()
    with pytest.raises(PartNotSubstructure):
        check_decomposition(d, [parse_set("{(1,0,0)}", d.carrier), d.ground])


def brute_min(d):
    """Smallest generating subset by trying every subset in size order (oracle)."""
    V = sorted_elements(d.ground)
    for r in range(len(V) + 1):
        for B in itertools.combinations(V, r):
            if is_generating(d, B).generating:
                return r


@pytest.mark.parametrize("n", [4, 5, 6, 8, 9, 10, 12])
def test_min_cover_matches_brute_force(n):
    import random

    rng = random.Random(n)
    for _ in range(4):
        members = rng.sample(range(n), rng.randint(1, n))
        S = ScalarSet.of(zn(n), [zn(n).make([m]) for m in members])
        d = StructureDecl("R", "set_vs", zn(n), "all", S)
        if not d.scalars.members or not is_generating(d, sorted_elements(d.ground)).generating:
            continue
        r = min_generating(d)
        assert r.cardinality == brute_min(d)
        assert r.certificate in ("exhaustive", "counting_bound")
