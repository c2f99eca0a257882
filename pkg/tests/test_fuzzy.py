from fractions import Fraction

import pytest

import corpus as C
from setla.carrier import parse_literal, parse_set, zn_poly, zn_tuple
from setla.errors import NotASubstructure, ParamOutOfRange, PartialTable, ValueOutOfUnit, ZeroMissing
from setla.fuzzy import (
    FuzzyMap,
    builtin_eta,
    fuzzy_laws,
    pointwise_min,
    restrict_fuzzy,
    verify_fuzzy,
)
from setla.structures import FAMILIES, StructureDecl


def parity(d):
    return FuzzyMap.from_function(d, lambda v: Fraction(sum(v.coords) % 2, 9))


def test_parity_values():
    d = C.parity_triples()
    eta = parity(d)
    got = {p: eta(parse_literal(p, d.carrier)) for p in ("(1,1,1)", "(1,0,1)", "(0,1,1)", "(0,0,0)")}
    assert got == {"(1,1,1)": Fraction(1, 9), "(1,0,1)": 0, "(0,1,1)": 0, "(0,0,0)": 0}


def test_parity_action_law_as_stated():
    # the stated verdict; the zero scalar sends (1,1,1) to a point of lower membership
    assert verify_fuzzy(parity(C.parity_triples())).holds


def test_parity_restriction_as_stated():
    d = C.parity_triples()
    r = restrict_fuzzy(parity(d), C.parity_sub(d))
    assert sorted(r.mapping.values()) == [0, 0, Fraction(1, 9)]
    assert verify_fuzzy(r).holds


def test_parity_action_witness():
    rep = verify_fuzzy(parity(C.parity_triples()))
    r, a, low, high = rep.entry("fuzzy_action").witness
    assert r.coords == (0,) and a.coords == (1, 0, 0)
    assert low < high


def test_constant_one_is_lawful_everywhere():
    for build in (C.z2cube, C.z6_cube, C.z12_even, C.seven_element, C.parity_triples):
        d = build()
        rep = verify_fuzzy(builtin_eta("constant", 1).apply(d))
        assert rep.holds, d.name


def test_min_law_violation():
    c = zn_tuple(2, 2)
    d = StructureDecl("P", "set_la", c, "all", C.z(2))
    vals = {"(0,0)": 1, "(0,1)": 1, "(1,0)": 0, "(1,1)": 1}
    eta = FuzzyMap(d, tuple((parse_literal(k, c), Fraction(x)) for k, x in vals.items()))
    rep = verify_fuzzy(eta)
    assert rep.entry("fuzzy_action").holds
    a, b, s, m = rep.entry("fuzzy_min").witness
    assert (a.coords, b.coords, s, m) == ((0, 1), (1, 1), 0, 1)


def test_coord_sum_over():
    d = C.seven_triples()
    eta = builtin_eta("coord_sum_over", 50).apply(d)
    assert eta(parse_literal("(1,3,5)", d.carrier)) == Fraction(9, 50)


def test_reciprocal_degree():
    c = zn_poly(3, 4)
    d = StructureDecl("P", "set_vs", c, [c.make([1, 0, 0, 0, 1]), c.make([2, 0, 0, 0, 0])], C.z(3, "{1}"))
    eta = builtin_eta("reciprocal_degree", 1).apply(d)
    assert eta(c.make([1, 0, 0, 0, 1])) == Fraction(1, 4)
    assert eta(c.make([2, 0, 0, 0, 0])) == 1


def test_one_minus_reciprocal_at_zero():
    d = C.z6_cube()
    eta = builtin_eta("one_minus_reciprocal").apply(d)
    assert eta(d.carrier.zero()) == 1
    assert eta(parse_literal("(1,0,0)", d.carrier)) == 0


def test_rule_parameter_errors():
    with pytest.raises(ParamOutOfRange):
        builtin_eta("coord_sum_over", 0)
    with pytest.raises(ParamOutOfRange):
        builtin_eta("constant", 2)
    with pytest.raises(ParamOutOfRange):
        builtin_eta("coord_sum_over", 1).apply(C.z2cube())


def test_table_errors():
    d = C.z2cube()
    one = parse_literal("(1,1,1)", d.carrier)
    with pytest.raises(PartialTable):
        verify_fuzzy(FuzzyMap(d, ((one, Fraction(1)),)))
    with pytest.raises(ValueOutOfUnit):
        verify_fuzzy(FuzzyMap.from_function(d, lambda v: Fraction(3, 2)))
    g = StructureDecl("G", "group_la", zn_tuple(2, 3), [one], C.z(2))
    with pytest.raises(ZeroMissing):
        verify_fuzzy(FuzzyMap(g, ((one, Fraction(1)),)))


def test_restriction_to_zero_and_non_substructure():
    d = C.parity_triples()
    eta = parity(d)
    z = restrict_fuzzy(eta, parse_set("{(0,0,0)}", d.carrier))
    assert len(z.values) == 1 and verify_fuzzy(z).holds
    with pytest.raises(NotASubstructure):
        restrict_fuzzy(eta, parse_set("{(1,0,0)}", d.carrier))


def test_laws_by_family():
    assert fuzzy_laws("set_vs") == ("fuzzy_action",)
    assert set(fuzzy_laws("group_la")) == {"fuzzy_action", "fuzzy_min", "fuzzy_negation", "fuzzy_zero"}
    assert "fuzzy_min" in fuzzy_laws("semigroup_vs", subspace=True)
    for fam in FAMILIES:
        assert "fuzzy_action" in fuzzy_laws(fam)


def test_group_law_map_passes_set_law():
    d = C.z6_cube()
    eta = builtin_eta("constant", Fraction(1, 2)).apply(d)
    lawful = FuzzyMap(d, tuple((v, Fraction(1) if v.is_zero else x) for v, x in eta.values))
    assert verify_fuzzy(lawful).holds
    assert verify_fuzzy(FuzzyMap(d.with_(family="set_vs"), lawful.values)).holds


def test_pointwise_min_values():
    d = C.z2cube()
    f = builtin_eta("constant", Fraction(1, 3)).apply(d)
    g = builtin_eta("coord_sum_over", 3).apply(d)
    h = pointwise_min(f, g)
    assert h(d.carrier.zero()) == 0
    assert h(parse_literal("(1,1,1)", d.carrier)) == Fraction(1, 3)
