from pathlib import Path

import pytest

from setla.carrier import parse_literal
from setla.deffile import parse_blocks, parse_definition, parse_subset, parse_text, render_definition
from setla.errors import DuplicateName, ParseError, UnknownName
from setla.fuzzy import FuzzyMap
from setla.lattice import LatticeSet
from setla.maps import LinearMap, verify_map
from setla.multi import MultiStructure
from setla.structures import StructureDecl, verify_structure

DATA = Path(__file__).parent / "data"

BASIC = "structure V { family = group_la; carrier = zn_tuple(2,3); ground = all; scalars = zn(2) }\n"


def test_basic_structure_parses():
    df = parse_text(BASIC)
    d = df["V"]
    assert isinstance(d, StructureDecl)
    assert d.family == "group_la" and len(d.ground) == 8
    assert verify_structure(d).holds


def test_table_scalars_are_idempotent():
    d = parse_definition(DATA / "z2cube.def")["Idem"]
    s = d.scalars
    one = parse_literal("1", s.base)
    assert s.add(one, one) == one


def test_missing_closing_brace_has_location():
    text = "\n\nstructure V {\n  family = set_vs\n  carrier = zn(3)\n"
    with pytest.raises(ParseError) as exc:
        parse_text(text)
    assert exc.value.line == 3
    assert str(exc.value).startswith("3:")


def test_unknown_key_location():
    with pytest.raises(ParseError) as exc:
        parse_text("structure V {\n  colour = red\n}\n")
    assert exc.value.line == 2


def test_duplicate_and_unknown_names():
    with pytest.raises(DuplicateName):
        parse_text(BASIC + BASIC)
    with pytest.raises(UnknownName):
        parse_text(BASIC)["W"]
    with pytest.raises(UnknownName):
        parse_text("multi M { components = [A, B] }")


def test_comments_ignored():
    text = "# heading\nstructure V {\n  family = group_la # tag\n  carrier = zn_tuple(2,3)\n  ground = all\n  scalars = zn(2)\n}\n"
    df = parse_text(text)
    assert len(df["V"].ground) == 8


def test_render_round_trip():
    for name in ("z2cube.def", "bivector.def", "corpus.def"):
        text = (DATA / name).read_text()
        blocks = parse_blocks(text)
        again = parse_blocks(render_definition(blocks))
        assert [(b.kind, b.name, b.entries) for b in again] == [(b.kind, b.name, b.entries) for b in blocks]
        assert render_definition(again) == render_definition(blocks)


def test_every_kind_builds():
    df = parse_definition(DATA / "corpus.def")
    assert isinstance(df["Rev"], LinearMap)
    assert isinstance(df["EtaPar"], FuzzyMap)
    assert isinstance(df["Pair"], MultiStructure)
    assert df.kind_of("Flip") == "map"
    assert verify_map(df["Rev"]).invertible


def test_patterns_and_windows():
    df = parse_definition(DATA / "bivector.def")
    assert isinstance(df["V2"].ground, LatticeSet) and len(df["V2"].ground) == 12
    ev = parse_definition(DATA / "corpus.def")["Evens"]
    assert ev.carrier.window_truncated
    W = parse_subset("pattern((1,0,0))", parse_text(BASIC)["V"].carrier)
    assert len(W) == 2


def test_bad_literal_reports_block_line():
    text = BASIC + "structure W {\n  family = set_vs\n  carrier = zn(3)\n  ground = {(1,2)}\n  scalars = zn(3)\n}\n"
    with pytest.raises(ParseError) as exc:
        parse_text(text)
    assert exc.value.line == 2


def test_cycle_detected():
    text = "map A { source = B; target = B; rule = identity }\nmap B { source = A; target = A; rule = identity }\n"
    with pytest.raises(ParseError):
        parse_text(text)
