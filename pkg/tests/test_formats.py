import math
from fractions import Fraction

import pytest

from delzant_corners.errors import NotSmooth, ParseError, Unbounded
from delzant_corners.formats import (
    dump_polytope,
    load_polytope,
    parse_curve_spec,
    parse_polytope,
    parse_rational,
    parse_real,
    parse_real_vector,
)


def test_load_catalog_files(polytope_dir):
    names = {p.stem: load_polytope(p) for p in polytope_dir.glob("*.json")
             if p.stem not in ("bad", "halfplane")}
    assert {n: len(p.vertices) for n, p in names.items()} == {
        "cp2": 3, "square": 4, "f1": 4, "cp3": 4}


def test_invalid_files(polytope_dir):
    with pytest.raises(NotSmooth, match="det 2"):
        load_polytope(polytope_dir / "bad.json")
    with pytest.raises(Unbounded):
        load_polytope(polytope_dir / "halfplane.json")


def test_rational_forms():
    assert parse_rational(3) == 3
    assert parse_rational("-3/2") == Fraction(-3, 2)
    assert parse_rational("0.25") == Fraction(1, 4)
    with pytest.raises(ParseError):
        parse_rational("0.1234567890123")
    with pytest.raises(ParseError):
        parse_rational("1/0")
    with pytest.raises(ParseError):
        parse_rational(True)


def test_decimal_offsets_are_exact():
    text = '{"dim": 2, "facets": [{"normal": [1, 0], "offset": 0}, ' \
           '{"normal": [0, 1], "offset": 0}, {"normal": [-1, -1], "offset": -1.5}]}'
    p = parse_polytope(text)
    assert p.facets[2].offset == Fraction(-3, 2)


def test_parse_error_names_field_and_line():
    text = """{
  "dim": 2,
  "facets": [
    {"normal": [1, 0], "offset": 0},
    {"normal": [0, 1], "offset": "x"},
    {"normal": [-1, -1], "offset": -2}
  ]
}"""
    with pytest.raises(ParseError) as exc:
        parse_polytope(text)
    assert exc.value.field == "facets[1].offset"
    assert exc.value.line == 5
    bad_normal = text.replace('"x"', "0").replace("[0, 1]", "[0, 1.5]")
    with pytest.raises(ParseError) as exc:
        parse_polytope(bad_normal)
    assert exc.value.field == "facets[1].normal" and exc.value.line == 5
    with pytest.raises(ParseError) as exc:
        parse_polytope('{"dim": 2,\n "facets": [}')
    assert exc.value.line == 2


def test_round_trip_dump(polytope_dir):
    p = load_polytope(polytope_dir / "cp2.json")
    q = parse_polytope(dump_polytope(p))
    assert q.vertices == p.vertices and q.name == p.name


def test_real_syntax():
    assert parse_real("log:2") == pytest.approx(math.log(2))
    assert parse_real("-log:2") == pytest.approx(-math.log(2))
    assert parse_real("1/4") == 0.25
    assert parse_real_vector("log:2,0") == (math.log(2), 0.0)
    with pytest.raises(ParseError):
        parse_real("log:-1")
    with pytest.raises(ParseError):
        parse_real("abc")


def test_curve_spec():
    assert parse_curve_spec("slope=1,1;anchor=log:2,0") == ((1, 1), (math.log(2), 0.0))
    assert parse_curve_spec("slope=1,0") == ((1, 0), None)
    with pytest.raises(ParseError):
        parse_curve_spec("anchor=0,0")
    with pytest.raises(ParseError):
        parse_curve_spec("slope=1,0;color=red")
