"""Standard local models and the codimension-one classification.

A hyperplane ``V`` passes at a vertex when its pullback to the orthant model
passes there. The pullback sends a direction ``p`` to ``(<v_i, p>)_i`` and a
normal ``q`` to ``(<u_i, q>)_i``. A slope is classified when it passes at
every vertex.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from . import lattice
from .lattice import IntVec
from .polytope import DelzantPolytope, VertexChart
from .smoothness import DEFICIENT, analyze_vertex
from .subspace import AffineSubspace, orthant_chart, ortho_basis


class ClosedFormDisagreement(AssertionError):
    pass


@dataclass(frozen=True, order=True)
class SlopeClass:
    """A codimension-one subspace through the origin, up to sign.

    In the plane it is reported by its direction, in higher dimension by its
    normal vector.
    """

    representative: IntVec

    def __post_init__(self):
        object.__setattr__(self, "representative", lattice.primitive_part(self.representative))

    @property
    def dim(self) -> int:
        return len(self.representative)

    @property
    def normal(self) -> IntVec:
        if self.dim == 2:
            a, b = self.representative
            return lattice.canonical_sign((-b, a))
        return self.representative

    def subspace(self, anchor=None) -> AffineSubspace:
        if self.dim == 2:
            return AffineSubspace([self.representative], anchor)
        return AffineSubspace.hyperplane(self.representative, anchor)

    @classmethod
    def from_normal(cls, q) -> "SlopeClass":
        q = lattice.primitive_part(q)
        if len(q) == 2:
            return cls((-q[1], q[0]))
        return cls(q)

    def __str__(self):
        return "(" + ",".join(str(x) for x in self.representative) + ")"


@dataclass
class ClassificationSet:
    polytope: str
    codim: int
    box: int
    members: list[SlopeClass]
    per_vertex: dict[int, list[SlopeClass]] = field(default_factory=dict)

    def to_dict(self, per_vertex: bool = False) -> dict:
        out = {
            "polytope": self.polytope,
            "codim": self.codim,
            "box": self.box,
            "kind": "direction" if self.members and self.members[0].dim == 2 else "normal",
            "members": [list(s.representative) for s in self.members],
        }
        if per_vertex:
            out["per_vertex"] = {
                str(v): [list(s.representative) for s in ss]
                for v, ss in sorted(self.per_vertex.items())
            }
        return out


def closed_form_member_2d(p) -> bool:
    """Direction p in the planar model set, up to sign."""
    p = lattice.primitive_part(p)
    for a, b in (p, (-p[0], -p[1])):
        if a == 1 and b >= 0 or b == 1 and a >= 0:
            return True
        if a >= 0 and b < 0:
            return True
    return False


def closed_form_member_3d(q, literal: bool = True) -> bool:
    """Normal q in the spatial model set, up to sign.

    ``literal=True`` uses a strictly positive all-plus family. With
    ``literal=False`` that family allows zero entries, which is what the
    stratum analysis produces.
    """
    q = lattice.primitive_part(q)
    for c in (q, tuple(-x for x in q)):
        if literal and all(x > 0 for x in c):
            return True
        if not literal and all(x >= 0 for x in c):
            return True
        for i in range(3):
            if c[i] == -1 and all(c[j] >= 0 for j in range(3) if j != i):
                return True
    return False


@lru_cache(maxsize=None)
def _orthant_verdict(directions: tuple[IntVec, ...], anchor: tuple[float, ...]) -> bool:
    V = AffineSubspace(directions, anchor)
    reports = analyze_vertex(orthant_chart(V.dim), V)
    return all(r.verdict != DEFICIENT for r in reports)


def local_model_member(n: int, k: int, V: AffineSubspace, cross_check: bool = True) -> bool:
    """Whether V passes in the orthant model of dimension n.

    For k = n-1 the anchor is irrelevant and is replaced by 0. For the two
    cases with a closed form the result is cross-checked against it.
    """
    if not 1 <= k <= n - 1:
        raise ValueError(f"need 1 <= k <= n-1, got n={n}, k={k}")
    if V.dim != n or V.k != k:
        raise ValueError(f"subspace has n={V.dim}, k={V.k}; expected n={n}, k={k}")
    anchor = (0.0,) * n if k == n - 1 else V.anchor
    canon = AffineSubspace(ortho_basis_directions(V), anchor)
    verdict = _orthant_verdict(canon.directions, canon.anchor)
    if cross_check and (n, k) == (2, 1):
        expected = closed_form_member_2d(V.directions[0])
        if expected != verdict:
            raise ClosedFormDisagreement(f"direction {V.directions[0]}: {verdict} vs {expected}")
    if cross_check and (n, k) == (3, 2):
        q = ortho_basis(V).vectors[0]
        expected = closed_form_member_3d(q, literal=False)
        if expected != verdict:
            raise ClosedFormDisagreement(f"normal {q}: {verdict} vs {expected}")
    return verdict


def ortho_basis_directions(V: AffineSubspace) -> tuple[IntVec, ...]:
    """Canonical direction basis: the integer kernel of the normal lattice."""
    if V.codim == 0:
        return V.directions
    return tuple(lattice.integer_kernel_basis(ortho_basis(V).vectors))


def transport_slope(chart: VertexChart, p) -> IntVec:
    """Push a model direction into the vertex chart: ``U p``."""
    return lattice.primitive_part(lattice.matvec(chart.U, p))


def pullback_slope(chart: VertexChart, p) -> IntVec:
    """Pull a direction back to the orthant model: ``(<v_i, p>)_i``."""
    return lattice.primitive_part(lattice.matvec(chart.directions, p))


def pullback_normal(chart: VertexChart, q) -> IntVec:
    """Pull a normal back to the orthant model: ``(<u_i, q>)_i``."""
    return lattice.primitive_part(lattice.matvec(chart.normals, q))


def member_at_vertex(chart: VertexChart, s: SlopeClass) -> bool:
    local = SlopeClass.from_normal(pullback_normal(chart, s.normal))
    n = chart.dim
    return local_model_member(n, n - 1, local.subspace(), cross_check=n <= 3)


def canonical_primitives(n: int, box: int):
    """Primitive vectors with max-norm <= box, one per sign class, sorted."""
    out = []
    for v in product(range(-box, box + 1), repeat=n):
        if any(v) and lattice.is_primitive(v) and lattice.canonical_sign(v) == v:
            out.append(v)
    return sorted(out)


def classify_codim1(poly: DelzantPolytope, box: int = 10) -> ClassificationSet:
    n = poly.dim
    if n < 2:
        raise ValueError("codimension-one classification needs n >= 2")
    if box < 1:
        raise ValueError("box must be at least 1")
    candidates = sorted({SlopeClass(v) for v in canonical_primitives(n, box)})
    per_vertex = {}
    for chart in poly.charts:
        per_vertex[chart.vertex] = [s for s in candidates if member_at_vertex(chart, s)]
    common = set(candidates)
    for ss in per_vertex.values():
        common &= set(ss)
    return ClassificationSet(poly.name, 1, box, sorted(common), per_vertex)
