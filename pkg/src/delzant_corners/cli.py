"""Command-line interface.

Exit status: 0 on success (and a true verdict for ``check``), 1 when ``check``
finds the closure is not an embedded toric manifold, 2 on bad input.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

from . import __version__
from .classify import classify_codim1, local_model_member
from .errors import DelzantCornersError
from .formats import (
    load_polytope,
    parse_curve_spec,
    parse_int_vector,
    parse_real_vector,
)
from .geometry import (
    affine_intersection,
    intersect_curves,
    legendre_inverse,
    legendre_residual,
    potential_grad,
    trace_curve,
)
from .polytope import transition
from .smoothness import analyze_vertex, is_embedded_toric
from .subspace import COMPLEX, AffineSubspace
from .svg import render_scene

EXIT_OK = 0
EXIT_FALSE = 1
EXIT_INPUT = 2

POLYTOPE_HELP = (
    "polytope JSON file: {\"dim\": n, \"facets\": [{\"normal\": [ints], \"offset\": q}, ...]}, "
    "each facet the halfspace <normal, xi> >= offset; offsets are integers, decimals or \"p/q\""
)
SLOPE_HELP = ("integer direction vector p, comma separated (repeat for k > 1), e.g. 1,1; "
              "write --slope=-1,2 when the first entry is negative")
ANCHOR_HELP = ("anchor point a of V = span(p) + a, comma separated reals; "
               "log:x means ln(x), e.g. log:2,0")


def _fmt(x: float) -> str:
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    s = f"{x:.12g}"
    return "0" if s == "-0" else s


def _fmt_vec(v) -> str:
    return "(" + ", ".join(_fmt(float(x)) for x in v) + ")"


def _int_vec(v) -> str:
    return "(" + ",".join(str(x) for x in v) + ")"


def _emit_json(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _subspace(slopes, anchor) -> AffineSubspace:
    dirs = [parse_int_vector(s) for s in slopes]
    a = parse_real_vector(anchor) if anchor else None
    return AffineSubspace(dirs, a)


# subcommands

def cmd_validate(args) -> int:
    poly = load_polytope(args.polytope)
    if args.report == "json":
        _emit_json({
            "valid": True,
            "name": poly.name,
            "dim": poly.dim,
            "vertices": [[str(x) for x in v] for v in poly.vertices],
            "incidence": [list(i) for i in poly.incidence],
        })
        return EXIT_OK
    print(f"valid Delzant polytope {poly.name}: dim {poly.dim}, "
          f"{poly.n_facets} facets, {len(poly.vertices)} vertices")
    for i, v in enumerate(poly.vertices):
        print(f"  vertex {i}: {_int_vec(v) if all(x.denominator == 1 for x in v) else v}"
              f"  facets {list(poly.incidence[i])}")
    return EXIT_OK


def cmd_charts(args) -> int:
    poly = load_polytope(args.polytope)
    charts = poly.charts
    if args.report == "json":
        out = {"charts": [{
            "vertex": c.vertex,
            "position": [str(x) for x in c.position],
            "facets": list(c.facets),
            "U": [list(r) for r in c.U],
            "Q": [list(r) for r in c.Q],
            "offsets": [str(x) for x in c.offsets],
        } for c in charts]}
        if args.transitions:
            out["transitions"] = {
                f"{a.vertex}->{b.vertex}": [list(r) for r in transition(poly, a.vertex, b.vertex)]
                for a in charts for b in charts if a.vertex != b.vertex}
        _emit_json(out)
        return EXIT_OK
    for c in charts:
        print(f"vertex {c.vertex} at {_int_vec(c.position)}: facets {list(c.facets)}")
        print(f"  U (normals as columns) = {[list(r) for r in c.U]}")
        print(f"  Q (edges as columns)   = {[list(r) for r in c.Q]}")
    if args.transitions:
        for a in charts:
            for b in charts:
                if a.vertex != b.vertex:
                    m = transition(poly, a.vertex, b.vertex)
                    print(f"D[{a.vertex}->{b.vertex}] = {[list(r) for r in m]}")
    return EXIT_OK


def cmd_check(args) -> int:
    poly = load_polytope(args.polytope)
    V = _subspace(args.slope, args.anchor)
    if V.dim != poly.dim:
        raise ValueError(f"slopes have length {V.dim}, polytope has dimension {poly.dim}")
    verdict = is_embedded_toric(poly, V, samples=args.samples, seed=args.seed,
                                check_complex=args.side == "both")
    overall = verdict.overall
    f_side = None
    if args.side == "f":
        f_side = {c.vertex: analyze_vertex(c, V, side=COMPLEX, samples=args.samples,
                                           seed=args.seed) for c in poly.charts}
        overall = all(r.verdict != "deficient" for reps in f_side.values() for r in reps)
    reports = f_side if f_side is not None else verdict.reports
    if args.report == "json":
        out = verdict.to_dict()
        out["side"] = args.side
        out["embedded_toric"] = overall
        out["vertices"] = {str(v): [r.to_dict() for r in reps]
                           for v, reps in sorted(reports.items())}
        _emit_json(out)
    else:
        print(f"embedded toric manifold: {'true' if overall else 'false'}")
        print("subspace: span{" + ", ".join(_int_vec(p) for p in V.directions)
              + "} + " + _fmt_vec(V.anchor))
        for v, reps in sorted(reports.items()):
            print(f"vertex {v} at {_int_vec(poly.vertices[v])}:")
            for r in reps:
                s = "{" + ",".join(str(i + 1) for i in r.stratum) + "}"
                ranks = "" if r.min_rank is None else f"  rank {r.min_rank}..{r.max_rank}"
                print(f"  stratum {s:<9} {r.status:<20} {r.verdict}{ranks}")
        if args.side == "both":
            print(f"complex/polytope rank agreement: {'true' if verdict.rank_agreement else 'false'}")
        if verdict.witness is not None and args.side != "f":
            w = verdict.witness
            print(f"witness: vertex {w.vertex}, stratum "
                  f"{{{','.join(str(i + 1) for i in w.stratum)}}}, "
                  f"facet values {_fmt_vec(w.point)}, rank {w.rank}")
    return EXIT_OK if overall else EXIT_FALSE


def cmd_classify(args) -> int:
    poly = load_polytope(args.polytope)
    if args.codim != 1:
        raise ValueError("only codimension 1 can be classified; use check with an explicit "
                         "anchor for higher codimension")
    result = classify_codim1(poly, args.box)
    if args.report == "json":
        _emit_json(result.to_dict(per_vertex=args.per_vertex))
        return EXIT_OK
    kind = "directions" if poly.dim == 2 else "normals"
    print(f"{poly.name}: {len(result.members)} codimension-1 slopes within box "
          f"{args.box} ({kind}, up to sign)")
    for s in result.members:
        print(f"  {s}")
    if args.per_vertex:
        for v, ss in sorted(result.per_vertex.items()):
            print(f"vertex {v} at {_int_vec(poly.vertices[v])}: {len(ss)} slopes")
            print("  " + " ".join(str(s) for s in ss))
    return EXIT_OK


def cmd_local_model(args) -> int:
    n, k = args.n, args.k
    if args.normal:
        if k != n - 1:
            raise ValueError("--normal describes a hyperplane, so k must be n-1")
        q = parse_int_vector(args.normal, "normal")
        if len(q) != n:
            raise ValueError(f"normal has length {len(q)}, expected {n}")
        V = AffineSubspace.hyperplane(q)
    else:
        if not args.slope:
            raise ValueError("give --slope (k times) or --normal")
        if k < n - 1 and not args.anchor:
            raise ValueError("an explicit --anchor is required when k < n-1")
        V = _subspace(args.slope, args.anchor)
    member = local_model_member(n, k, V)
    if args.report == "json":
        _emit_json({"n": n, "k": k, "slopes": [list(p) for p in V.directions],
                    "anchor": list(V.anchor), "member": member})
    else:
        print(f"standard local model n={n} k={k}: {'member' if member else 'not a member'}")
    return EXIT_OK


def _curve_rows(poly, curve):
    for s, x, y, loc in curve.rows(poly):
        yield f"{_fmt(s)},{_fmt(x)},{_fmt(y)},{loc}"


def cmd_curve(args) -> int:
    poly = load_polytope(args.polytope)
    V = _subspace([args.slope], args.anchor)
    curve = trace_curve(poly, V, args.samples)
    lines = ["s,xi1,xi2,location", *_curve_rows(poly, curve)]
    if args.out and args.out.endswith(".svg"):
        pts = [r[1:3] for r in curve.rows(poly)]
        text = render_scene(poly, [(pts, f"D(V) slope {_int_vec(V.directions[0])}")],
                            [(e.position, e.kind) for e in curve.endpoints])
        Path(args.out).write_text(text)
        print(f"wrote {args.out}: {len(pts)} points")
    elif args.out:
        Path(args.out).write_text("\n".join(lines) + "\n")
        print(f"wrote {args.out}: {len(lines) - 1} points")
    else:
        print("\n".join(lines))
    return EXIT_OK


def cmd_intersect(args) -> int:
    poly = load_polytope(args.polytope)
    specs = [parse_curve_spec(c) for c in args.curve]
    if len(specs) < 2:
        raise ValueError("give at least two --curve options")
    subs = [AffineSubspace([s], a) for s, a in specs]
    pairs = []
    for i in range(len(subs)):
        for j in range(i + 1, len(subs)):
            pts = intersect_curves(poly, subs[i], subs[j], seed=args.seed, pair=(i, j))
            affine = affine_intersection(subs[i], subs[j])
            pairs.append((i, j, pts, affine))
    if args.svg:
        curves = []
        for i, V in enumerate(subs):
            c = trace_curve(poly, V, args.samples)
            curves.append(([r[1:3] for r in c.rows(poly)], f"V{i + 1}"))
        marks = [(p.position, f"V{i + 1} x V{j + 1}: {p.location}")
                 for i, j, pts, _ in pairs for p in pts]
        Path(args.svg).write_text(render_scene(poly, curves, marks))
    if args.report == "json":
        out = []
        for i, j, pts, affine in pairs:
            if isinstance(affine, str):
                aff = affine
            else:
                aff = None if affine is None else [float(x) for x in affine]
            out.append({"pair": [i, j], "affine": aff, "points": [p.to_dict() for p in pts]})
        _emit_json({"pairs": out})
        return EXIT_OK
    for i, j, pts, affine in pairs:
        if isinstance(affine, str):
            aff = "coincident"
        else:
            aff = "parallel, none" if affine is None else _fmt_vec(affine)
        n_int = sum(p.location == "interior" for p in pts)
        print(f"V{i + 1} x V{j + 1}: {n_int} interior, {len(pts) - n_int} boundary; "
              f"affine intersection {aff}")
        for p in pts:
            extra = f" vertex {p.vertex}" if p.vertex is not None else (
                f" facets {list(p.facets)}" if p.facets else "")
            print(f"  {p.location:<8} {_fmt_vec(p.position)}{extra}")
    if args.svg:
        print(f"wrote {args.svg}")
    return EXIT_OK


def cmd_legendre(args) -> int:
    poly = load_polytope(args.polytope)
    point = parse_real_vector(args.point, "point")
    if len(point) != poly.dim:
        raise ValueError(f"point has length {len(point)}, expected {poly.dim}")
    if args.inverse:
        xi = legendre_inverse(poly, point)
        res = legendre_residual(poly, xi, point)
        result = {"x": list(point), "xi": [float(v) for v in xi], "residual": res}
        text = f"xi = {_fmt_vec(xi)}  (gradient residual {res:.2e})"
    else:
        x = potential_grad(poly, point)
        result = {"xi": list(point), "x": [float(v) for v in x]}
        text = f"x = {_fmt_vec(x)}"
    if args.report == "json":
        _emit_json(result)
    else:
        print(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="delzant-corners",
        description="Delzant polytopes, embedded toric submanifolds and their "
                    "images as submanifolds with corners.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, func, help_text, polytope=True):
        p = sub.add_parser(name, help=help_text, description=help_text)
        if polytope:
            p.add_argument("polytope", help=POLYTOPE_HELP)
        p.add_argument("--report", choices=("text", "json"), default="text",
                       help="output format on stdout (default: text)")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for sampling and jittered seeds (default: 0)")
        p.set_defaults(func=func)
        return p

    add("validate", cmd_validate,
        "check the Delzant conditions and list vertices with incident facets")

    p = add("charts", cmd_charts, "print the vertex charts: normal matrix U and edge matrix Q")
    p.add_argument("--transitions", action="store_true",
                   help="also print transition matrices between charts")

    p = add("check", cmd_check,
            "decide whether the closure of C(V) is an embedded toric manifold, i.e. whether "
            "the closure of D(V) is a submanifold with corners; exit 1 when it is not")
    p.add_argument("--slope", action="append", required=True, help=SLOPE_HELP)
    p.add_argument("--anchor", help=ANCHOR_HELP + " (default: origin)")
    p.add_argument("--side", choices=("f", "g", "both"), default="both",
                   help="system used for the verdict: f complex side, g polytope side, "
                        "both = g verdict plus pointwise rank agreement with f (default)")
    p.add_argument("--samples", type=int, default=8,
                   help="sample points per positive-dimensional stratum (default: 8)")

    p = add("classify", cmd_classify,
            "list codimension-1 slopes through the origin that pass at every vertex; "
            "in the plane slopes are directions, otherwise normals, listed up to sign")
    p.add_argument("--codim", type=int, default=1, help="codimension, only 1 (default: 1)")
    p.add_argument("--box", type=int, default=10,
                   help="search slopes with max-norm at most BOX (default: 10)")
    p.add_argument("--per-vertex", action="store_true", help="also list the per-vertex sets")

    p = add("local-model", cmd_local_model,
            "test membership in the standard orthant model", polytope=False)
    p.add_argument("--n", type=int, required=True, help="ambient dimension")
    p.add_argument("--k", type=int, required=True, help="dimension of V")
    p.add_argument("--slope", action="append", help=SLOPE_HELP)
    p.add_argument("--normal", help="integer normal vector of a hyperplane V (k = n-1); "
                        "write --normal=-1,2,3 when the first entry is negative")
    p.add_argument("--anchor", help=ANCHOR_HELP + " (required when k < n-1)")

    p = add("curve", cmd_curve, "sample the curve D(V) in a polygon with its closure endpoints")
    p.add_argument("--slope", required=True, help="integer direction of the line V")
    p.add_argument("--anchor", help=ANCHOR_HELP + " (default: origin)")
    p.add_argument("--samples", type=int, default=512,
                   help="resolution: consecutive points are closer than diameter/SAMPLES")
    p.add_argument("--out", help="write CSV (s,xi1,xi2,location) or, for *.svg, a picture; "
                                 "default: CSV on stdout")

    p = add("intersect", cmd_intersect,
            "intersect the closures of D(V) for every pair of the given lines")
    p.add_argument("--curve", action="append", required=True,
                   help='line spec "slope=1,0;anchor=log:2,0" (repeat at least twice)')
    p.add_argument("--svg", help="also draw the polygon, curves and intersection points")
    p.add_argument("--samples", type=int, default=256, help="curve resolution for --svg")

    p = add("legendre", cmd_legendre,
            "evaluate the gradient map of the potential at an interior point, or its inverse")
    p.add_argument("--point", required=True,
                   help="comma separated coordinates (xi, or x with --inverse); log:x allowed")
    p.add_argument("--inverse", action="store_true", help="solve grad G(xi) = point for xi")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (DelzantCornersError, ValueError) as exc:
        if getattr(args, "report", "text") == "json":
            _emit_json({"error": type(exc).__name__, "message": str(exc)})
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
