"""Exception types raised across the package."""

from __future__ import annotations


class DelzantCornersError(Exception):
    """Base class for every error raised by this package."""


# lattice

class ZeroVector(DelzantCornersError, ValueError):
    pass


class NotUnimodular(DelzantCornersError, ValueError):
    def __init__(self, det):
        self.det = det
        super().__init__(f"NotUnimodular: determinant {det}")


# polytope validation

class InvalidPolytope(DelzantCornersError, ValueError):
    pass


class NotSimple(InvalidPolytope):
    def __init__(self, vertex, n_facets):
        self.vertex = vertex
        self.n_facets = n_facets
        super().__init__(
            f"NotSimple at vertex {_fmt_point(vertex)}: lies on {n_facets} facets"
        )


class NotSmooth(InvalidPolytope):
    def __init__(self, vertex, det):
        self.vertex = vertex
        self.det = det
        super().__init__(f"NotSmooth at vertex {_fmt_point(vertex)}: det {det}")


class Unbounded(InvalidPolytope):
    def __init__(self, detail="recession cone is nontrivial"):
        super().__init__(f"Unbounded: {detail}")


class EmptyPolytope(InvalidPolytope):
    def __init__(self, detail="no feasible vertex"):
        super().__init__(f"Empty: {detail}")


class DegenerateFacets(InvalidPolytope):
    pass


# numerics

class PoleAtBoundary(DelzantCornersError, ArithmeticError):
    pass


class NotInterior(DelzantCornersError, ValueError):
    pass


class OnExcludedFacet(DelzantCornersError, ValueError):
    pass


class NoConvergence(DelzantCornersError, RuntimeError):
    def __init__(self, iterations, residual):
        self.iterations = iterations
        self.residual = residual
        super().__init__(
            f"NoConvergence({iterations}): residual {residual:.3e}"
        )


class ParseError(DelzantCornersError, ValueError):
    """Malformed input file or command-line value.

    ``field`` names the offending field; ``line`` is the 1-based line in the
    source text when it could be located.
    """

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field {field!r}")
        if line is not None:
            where.append(f"line {line}")
        suffix = f" ({', '.join(where)})" if where else ""
        super().__init__(message + suffix)


def _fmt_point(p):
    return "(" + ",".join(_fmt_num(x) for x in p) + ")"


def _fmt_num(x):
    # Fractions print as ints when integral, "p/q" otherwise
    if getattr(x, "denominator", None) == 1:
        return str(x.numerator)
    return str(x)
