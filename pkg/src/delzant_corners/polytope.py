"""Delzant polytopes in H-representation, vertex charts and facet functions."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

import numpy as np

from . import lattice
from .errors import (
    DegenerateFacets,
    EmptyPolytope,
    NotSimple,
    NotSmooth,
    Unbounded,
)
from .lattice import IntMatrix, IntVec

MAX_DIM = 6


@dataclass(frozen=True)
class Halfspace:
    """The closed halfspace ``<xi, normal> - offset >= 0``."""

    normal: IntVec
    offset: Fraction

    def __post_init__(self):
        object.__setattr__(self, "normal", lattice.as_int_vector(self.normal))
        object.__setattr__(self, "offset", Fraction(self.offset))

    def value(self, xi):
        return lattice.dot(self.normal, xi) - self.offset


@dataclass(frozen=True)
class VertexChart:
    """Local data at one vertex.

    ``normals[i]`` is the inward normal u_i of the i-th incident facet and
    ``directions[i]`` the primitive edge direction v_i, so that
    ``<u_i, v_j> = delta_ij`` and ``det Q = +1`` with Q = [v_1 ... v_n].
    """

    vertex: int
    position: tuple[Fraction, ...]
    facets: tuple[int, ...]
    normals: tuple[IntVec, ...]
    directions: tuple[IntVec, ...]
    offsets: tuple[Fraction, ...]

    @property
    def dim(self) -> int:
        return len(self.normals)

    @property
    def U(self) -> IntMatrix:
        """Matrix whose columns are the incident normals."""
        return lattice.transpose(self.normals)

    @property
    def Q(self) -> IntMatrix:
        """Matrix whose columns are the edge directions."""
        return lattice.transpose(self.directions)

    @property
    def transport(self) -> IntMatrix:
        """``(Q^T)^{-1}``, which equals ``U``."""
        return self.U

    def local_values(self, xi) -> np.ndarray:
        """Incident facet values ``L_i(xi)`` in chart order."""
        xi = np.asarray(xi, dtype=float)
        return np.array([np.dot(u, xi) for u in self.normals]) - np.array(
            [float(k) for k in self.offsets])


@dataclass(frozen=True)
class Location:
    kind: str  # interior | facet | edge | face | vertex | outside
    facets: tuple[int, ...] = ()
    vertex: int | None = None


@dataclass(frozen=True, eq=False)
class DelzantPolytope:
    dim: int
    facets: tuple[Halfspace, ...]
    vertices: tuple[tuple[Fraction, ...], ...]
    incidence: tuple[tuple[int, ...], ...]
    name: str = ""
    _charts: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def n_facets(self) -> int:
        return len(self.facets)

    @cached_property
    def normals_array(self) -> np.ndarray:
        return np.array([f.normal for f in self.facets], dtype=float)

    @cached_property
    def offsets_array(self) -> np.ndarray:
        return np.array([float(f.offset) for f in self.facets])

    @cached_property
    def vertices_array(self) -> np.ndarray:
        return np.array([[float(x) for x in v] for v in self.vertices])

    @cached_property
    def diameter(self) -> float:
        v = self.vertices_array
        return float(max(np.linalg.norm(a - b) for a in v for b in v))

    def chart(self, vertex: int) -> VertexChart:
        if vertex not in self._charts:
            self._charts[vertex] = vertex_chart(self, vertex)
        return self._charts[vertex]

    @property
    def charts(self) -> list[VertexChart]:
        return [self.chart(i) for i in range(len(self.vertices))]

    def vertex_index(self, point) -> int:
        target = tuple(Fraction(x) for x in point)
        return self.vertices.index(target)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "facets": [
                {"normal": list(f.normal), "offset": _fraction_str(f.offset)}
                for f in self.facets
            ],
        }


def _fraction_str(x: Fraction):
    return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _solve_rational(rows: Sequence[Sequence[int]], rhs: Sequence[Fraction]):
    """Solve a square rational system; None when singular."""
    n = len(rows)
    a = [[Fraction(x) for x in r] + [Fraction(b)] for r, b in zip(rows, rhs)]
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return None
        a[c], a[p] = a[p], a[c]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return tuple(a[i][n] / a[i][i] for i in range(n))


def validate(raw: Iterable, dim: int | None = None, name: str = "") -> DelzantPolytope:
    """Check that halfspaces cut out a Delzant polytope and enumerate vertices.

    ``raw`` holds :class:`Halfspace` objects or ``(normal, offset)`` pairs.
    Raises ``Unbounded``, ``EmptyPolytope``, ``NotSimple``, ``NotSmooth`` or
    ``DegenerateFacets``.
    """
    facets = tuple(h if isinstance(h, Halfspace) else Halfspace(*h) for h in raw)
    if not facets:
        raise Unbounded("no facets")
    n = dim if dim is not None else len(facets[0].normal)
    if n < 1 or n > MAX_DIM:
        raise ValueError(f"dimension {n} outside the supported range 1..{MAX_DIM}")
    for j, f in enumerate(facets):
        if len(f.normal) != n:
            raise DegenerateFacets(f"facet {j}: normal has length {len(f.normal)}, expected {n}")
        if not any(f.normal):
            raise DegenerateFacets(f"facet {j}: zero normal")
        if not lattice.is_primitive(f.normal):
            raise DegenerateFacets(f"facet {j}: normal {f.normal} is not primitive")
    seen = {}
    for j, f in enumerate(facets):
        if f.normal in seen:
            raise DegenerateFacets(
                f"facets {seen[f.normal]} and {j} share the normal {f.normal}")
        seen[f.normal] = j

    d = len(facets)
    if d <= n or lattice.rank([f.normal for f in facets]) < n:
        raise Unbounded("normals do not positively span the space")

    found: dict[tuple[Fraction, ...], None] = {}
    for subset in combinations(range(d), n):
        rows = [facets[j].normal for j in subset]
        xi = _solve_rational(rows, [facets[j].offset for j in subset])
        if xi is None:
            continue
        if all(f.value(xi) >= 0 for f in facets):
            found[xi] = None
    if not found:
        raise EmptyPolytope()
    vertices = tuple(sorted(found))
    incidence = []
    for xi in vertices:
        on = tuple(j for j, f in enumerate(facets) if f.value(xi) == 0)
        if len(on) > n:
            raise NotSimple(xi, len(on))
        incidence.append(on)

    # a pointed polyhedron is unbounded iff some vertex has an unbounded edge
    for xi, on in zip(vertices, incidence):
        normals = [facets[j].normal for j in on]
        for i in range(n):
            e = [Fraction(int(r == i)) for r in range(n)]
            v = _solve_rational(normals, e)
            if not any(lattice.dot(facets[j].normal, v) < 0
                       for j in range(d) if j not in on):
                raise Unbounded(f"edge from vertex {_fmt(xi)} is a ray")

    centroid = tuple(sum(c) / len(vertices) for c in zip(*vertices))
    if any(f.value(centroid) <= 0 for f in facets):
        raise EmptyPolytope("polytope is not full-dimensional")

    for xi, on in zip(vertices, incidence):
        dt = lattice.det([facets[j].normal for j in on])
        if abs(dt) != 1:
            raise NotSmooth(xi, abs(dt))

    touched = {j for on in incidence for j in on}
    missing = sorted(set(range(d)) - touched)
    if missing:
        raise DegenerateFacets(f"facet {missing[0]} is redundant")

    return DelzantPolytope(n, facets, vertices, tuple(incidence), name=name)


def _fmt(xi):
    return "(" + ",".join(str(x) for x in xi) + ")"


def vertex_chart(poly: DelzantPolytope, vertex: int) -> VertexChart:
    """Assemble U, Q and offsets at a vertex, reordered so that det Q = +1."""
    if not 0 <= vertex < len(poly.vertices):
        raise IndexError(f"no vertex {vertex}")
    order = list(poly.incidence[vertex])
    normals = [poly.facets[j].normal for j in order]
    if lattice.det(normals) < 0:
        # det Q = 1 / det U, so swapping two facets fixes the sign
        order[0], order[1] = order[1], order[0]
        normals[0], normals[1] = normals[1], normals[0]
    q = lattice.unimodular_inverse(normals)  # inverse of U^T
    directions = lattice.transpose(q)
    return VertexChart(
        vertex=vertex,
        position=poly.vertices[vertex],
        facets=tuple(order),
        normals=tuple(normals),
        directions=directions,
        offsets=tuple(poly.facets[j].offset for j in order),
    )


def transition(poly: DelzantPolytope, lam: int, mu: int) -> IntMatrix:
    """``D^{lam mu} = (Q^lam)^{-1} Q^mu``; note ``(Q^lam)^{-1} = U_lam^T``."""
    a, b = poly.chart(lam), poly.chart(mu)
    return lattice.matmul(a.normals, b.Q)


def facet_values(poly: DelzantPolytope, xi) -> np.ndarray:
    xi = np.asarray(xi, dtype=float)
    return poly.normals_array @ xi - poly.offsets_array


def locate(poly: DelzantPolytope, xi, tol: float = 1e-8) -> Location:
    """Classify a point by the zero pattern of its facet values."""
    vals = facet_values(poly, xi)
    if np.any(vals < -tol):
        return Location("outside", tuple(int(j) for j in np.flatnonzero(vals < -tol)))
    zeros = tuple(int(j) for j in np.flatnonzero(np.abs(vals) <= tol))
    n = poly.dim
    if not zeros:
        return Location("interior")
    if len(zeros) >= n:
        for i, inc in enumerate(poly.incidence):
            if set(inc) <= set(zeros):
                return Location("vertex", zeros, vertex=i)
    if len(zeros) == 1:
        return Location("facet", zeros)
    if len(zeros) == n - 1:
        return Location("edge", zeros)
    return Location("face", zeros)


def nearest_vertex(poly: DelzantPolytope, xi) -> int:
    d = np.linalg.norm(poly.vertices_array - np.asarray(xi, dtype=float), axis=1)
    return int(np.argmin(d))
