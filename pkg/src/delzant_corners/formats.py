"""Polytope JSON files and the small text syntaxes used on the command line.

Polytope file::

    {"name": "CP2", "dim": 2,
     "facets": [{"normal": [1, 0], "offset": 0},
                {"normal": [0, 1], "offset": "0"},
                {"normal": [-1, -1], "offset": "-2"}]}

A facet is the halfspace ``<normal, xi> >= offset``. Offsets may be integers,
decimals with at most 12 significant digits, or strings ``"p/q"``.
"""

from __future__ import annotations

import json
import math
import re
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from .errors import ParseError
from .polytope import DelzantPolytope, validate

MAX_SIGNIFICANT = 12


def _line_of(text: str, key: str, occurrence: int = 0) -> int | None:
    """1-based line of the ``occurrence``-th ``"key"`` in the raw text."""
    hits = [m.start() for m in re.finditer(rf'"{re.escape(key)}"\s*:', text)]
    if occurrence < len(hits):
        return text.count("\n", 0, hits[occurrence]) + 1
    return None


def parse_rational(value, field: str = "offset", line: int | None = None) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(f"expected a number, got {value!r}", field, line)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return _decimal_fraction(value, field, line)
    if isinstance(value, float):
        return _decimal_fraction(Decimal(repr(value)), field, line)
    if isinstance(value, str):
        s = value.strip()
        if re.fullmatch(r"[+-]?\d+\s*/\s*\d+", s):
            num, den = (int(x) for x in s.split("/"))
            if den == 0:
                raise ParseError(f"zero denominator in {value!r}", field, line)
            return Fraction(num, den)
        try:
            return _decimal_fraction(Decimal(s), field, line)
        except ArithmeticError:
            raise ParseError(f"cannot read {value!r} as a rational number", field, line) from None
    raise ParseError(f"expected a number, got {type(value).__name__}", field, line)


def _decimal_fraction(d: Decimal, field, line) -> Fraction:
    if not d.is_finite():
        raise ParseError(f"non-finite value {d}", field, line)
    digits = len(d.as_tuple().digits)
    if digits > MAX_SIGNIFICANT and d != d.to_integral_value():
        raise ParseError(
            f"decimal {d} has more than {MAX_SIGNIFICANT} significant digits; use p/q",
            field, line)
    return Fraction(d)


def parse_polytope(text: str, source: str = "<string>") -> DelzantPolytope:
    """Read and validate a polytope. Raises ParseError or an InvalidPolytope."""
    try:
        data = json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: invalid JSON: {exc.msg}", line=exc.lineno) from None
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object", line=1)
    facets = data.get("facets")
    if not isinstance(facets, list) or not facets:
        raise ParseError(f"{source}: 'facets' must be a nonempty list", "facets",
                         _line_of(text, "facets"))
    dim = data.get("dim")
    if dim is not None and (isinstance(dim, bool) or not isinstance(dim, int)):
        raise ParseError(f"{source}: 'dim' must be an integer", "dim", _line_of(text, "dim"))
    raw = []
    for i, f in enumerate(facets):
        where = f"facets[{i}]"
        if not isinstance(f, dict) or "normal" not in f or "offset" not in f:
            raise ParseError(f"{source}: {where} needs 'normal' and 'offset'", where,
                             _line_of(text, "facets"))
        nline = _line_of(text, "normal", i)
        normal = f["normal"]
        if (not isinstance(normal, list) or not normal
                or any(isinstance(x, bool) or not isinstance(x, int) for x in normal)):
            raise ParseError(f"{source}: {where}.normal must be a list of integers",
                             f"{where}.normal", nline)
        if dim is not None and len(normal) != dim:
            raise ParseError(f"{source}: {where}.normal has length {len(normal)}, dim is {dim}",
                             f"{where}.normal", nline)
        offset = parse_rational(f["offset"], f"{where}.offset", _line_of(text, "offset", i))
        raw.append((tuple(normal), offset))
    name = data.get("name") or Path(source).stem
    return validate(raw, dim=dim, name=str(name))


def load_polytope(path) -> DelzantPolytope:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None
    return parse_polytope(text, str(path))


def dump_polytope(poly: DelzantPolytope) -> str:
    data = {"name": poly.name, **poly.to_dict()}
    return json.dumps(data, indent=2) + "\n"


def parse_int_vector(text: str, field: str = "slope") -> tuple[int, ...]:
    try:
        out = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise ParseError(f"{field} must be comma-separated integers, got {text!r}", field) from None
    return out


def parse_real(token: str, field: str = "anchor") -> float:
    """A real number, or ``log:x`` meaning the natural log of x."""
    t = token.strip()
    try:
        if t.startswith("log:"):
            x = float(Fraction(t[4:].strip()))
            if x <= 0:
                raise ParseError(f"log argument must be positive in {token!r}", field)
            return math.log(x)
        if t.startswith("-log:"):
            return -parse_real(t[1:], field)
        return float(Fraction(t)) if "/" in t else float(t)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"cannot read {token!r} as a real number", field) from None


def parse_real_vector(text: str, field: str = "anchor") -> tuple[float, ...]:
    return tuple(parse_real(t, field) for t in text.split(","))


def parse_curve_spec(text: str) -> tuple[tuple[int, ...], tuple[float, ...] | None]:
    """``"slope=1,0;anchor=log:2,0"`` to (slope, anchor)."""
    slope = anchor = None
    for part in filter(None, (p.strip() for p in text.split(";"))):
        key, sep, value = part.partition("=")
        if not sep:
            raise ParseError(f"expected key=value in curve spec {text!r}", "curve")
        key = key.strip()
        if key == "slope":
            slope = parse_int_vector(value, "curve.slope")
        elif key == "anchor":
            anchor = parse_real_vector(value, "curve.anchor")
        else:
            raise ParseError(f"unknown key {key!r} in curve spec", "curve")
    if slope is None:
        raise ParseError(f"curve spec {text!r} has no slope", "curve")
    return slope, anchor
