"""Stratified rank analysis of the per-vertex defining systems.

Each vertex chart is a copy of the nonnegative orthant. A stratum is the set
of points where exactly the coordinates in ``S`` vanish. Whether a stratum
meets the closure is decided combinatorially and by an exact log-linear
solve. Only the Jacobian rank is numeric.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import lattice
from .config import DEFAULT_TOL, Tolerances
from .polytope import DelzantPolytope, VertexChart
from .subspace import (
    COMPLEX,
    POLYTOPE,
    AffineSubspace,
    ExponentSystem,
    OrthoBasis,
    build_system,
    jacobian,
    numeric_rank,
    ortho_basis,
)

TRIVIAL = "trivially-satisfied"
INFEASIBLE = "infeasible"
ACTIVE = "active"

FULL_RANK = "full-rank"
DEFICIENT = "deficient"
EMPTY = "empty"

DEFAULT_SAMPLES = 8


@dataclass(frozen=True)
class ReducedSystem:
    stratum: frozenset[int]
    equation_status: tuple[str, ...]

    @property
    def status(self) -> str:
        if INFEASIBLE in self.equation_status:
            return INFEASIBLE
        if ACTIVE in self.equation_status:
            return ACTIVE
        return TRIVIAL

    @property
    def active(self) -> tuple[int, ...]:
        return tuple(j for j, s in enumerate(self.equation_status) if s == ACTIVE)


@dataclass(frozen=True)
class StratumReport:
    stratum: tuple[int, ...]
    status: str
    active: tuple[int, ...] = ()
    dimension: int | None = None  # of the solution set inside the stratum
    min_rank: int | None = None
    max_rank: int | None = None
    verdict: str = EMPTY
    points: tuple[tuple[float, ...], ...] = ()
    ranks: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "stratum": [i + 1 for i in self.stratum],
            "status": self.status,
            "active_equations": list(self.active),
            "dimension": self.dimension,
            "min_rank": self.min_rank,
            "max_rank": self.max_rank,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class Witness:
    vertex: int
    stratum: tuple[int, ...]
    point: tuple[float, ...]
    rank: int


@dataclass
class SmoothnessVerdict:
    subspace: AffineSubspace
    reports: dict[int, list[StratumReport]]
    overall: bool
    witness: Witness | None = None
    rank_agreement: bool = True
    mismatches: list = field(default_factory=list)

    def to_dict(self) -> dict:
        out = {
            "embedded_toric": self.overall,
            "slopes": [list(p) for p in self.subspace.directions],
            "anchor": list(self.subspace.anchor),
            "rank_agreement": self.rank_agreement,
            "vertices": {
                str(v): [r.to_dict() for r in reps] for v, reps in sorted(self.reports.items())
            },
        }
        if self.witness is not None:
            w = self.witness
            out["witness"] = {
                "vertex": w.vertex,
                "stratum": [i + 1 for i in w.stratum],
                "point": list(w.point),
                "rank": w.rank,
            }
        return out


def stratum_reduce(sys: ExponentSystem, S) -> ReducedSystem:
    """Classify every equation on the stratum where exactly ``S`` vanishes."""
    S = frozenset(S)
    status = []
    for row in sys.exponents:
        pos_zero = any(row[i] > 0 for i in S)
        neg_zero = any(row[i] < 0 for i in S)
        if pos_zero and neg_zero:
            status.append(TRIVIAL)
        elif pos_zero or neg_zero:
            status.append(INFEASIBLE)
        else:
            status.append(ACTIVE)
    return ReducedSystem(S, tuple(status))


def all_strata(n: int):
    for size in range(n + 1):
        for S in combinations(range(n), size):
            yield frozenset(S)


def solve_stratum(sys: ExponentSystem, red: ReducedSystem, tol: Tolerances = DEFAULT_TOL):
    """Log-coordinates of the stratum's solution set, or None if it is empty.

    Returns ``(free, y0, nullspace)``: the surviving coordinates, a particular
    solution in log-argument coordinates and a basis of directions along which
    the solution set extends.
    """
    n = sys.n
    free = [i for i in range(n) if i not in red.stratum]
    if red.status == INFEASIBLE:
        return None
    if not free:
        return free, np.zeros(0), np.zeros((0, 0))
    rows = red.active
    if not rows:
        return free, np.zeros(len(free)), np.eye(len(free))
    m = sys.exponent_array[np.ix_(rows, free)]
    rhs = sys.log_constants[list(rows)]
    y0, *_ = np.linalg.lstsq(m, rhs, rcond=None)
    if np.max(np.abs(m @ y0 - rhs), initial=0.0) >= tol.lstsq_residual:
        return None
    r = lattice.rational_rank(sys.exponent_array[np.ix_(rows, free)].astype(int).tolist())
    # orthonormal nullspace from the SVD; its dimension comes from the exact rank
    _, _, vt = np.linalg.svd(m)
    null = vt[r:].T if r < len(free) else np.zeros((len(free), 0))
    return free, y0, null


def _arguments_to_point(side: str, n: int, free, y) -> np.ndarray:
    w = np.zeros(n)
    if side == POLYTOPE:
        w[free] = np.exp(np.asarray(y) - 1.0)
    else:
        w[free] = np.exp(np.asarray(y))
    return w


def sample_stratum(sys: ExponentSystem, red: ReducedSystem, samples: int,
                   rng: np.random.Generator, tol: Tolerances = DEFAULT_TOL):
    """Points of the stratum on the closure, or [] if the stratum is empty.

    Points are facet values L on the polytope side and real moduli |z| on
    the complex side.
    """
    sol = solve_stratum(sys, red, tol)
    if sol is None:
        return None, []
    free, y0, null = sol
    if not free:
        return 0, [np.zeros(sys.n)]
    pts = [_arguments_to_point(sys.side, sys.n, free, y0)]
    dim = null.shape[1]
    if dim:
        for _ in range(samples - 1):
            r = rng.normal(scale=1.0, size=dim)
            pts.append(_arguments_to_point(sys.side, sys.n, free, y0 + null @ r))
    return dim, pts


def analyze_vertex(chart: VertexChart, V: AffineSubspace, basis: OrthoBasis | None = None,
                   side: str = POLYTOPE, samples: int = DEFAULT_SAMPLES, seed: int = 0,
                   tol: Tolerances = DEFAULT_TOL) -> list[StratumReport]:
    if samples < 1:
        raise ValueError("samples must be at least 1")
    if basis is None:
        basis = ortho_basis(V)
    sys = build_system(chart, V, basis, side)
    rng = np.random.default_rng([seed, max(chart.vertex, 0) + 1])
    target = sys.n_equations
    reports = []
    for S in all_strata(sys.n):
        red = stratum_reduce(sys, S)
        key = tuple(sorted(S))
        dim, pts = sample_stratum(sys, red, samples, rng, tol)
        if not pts:
            reports.append(StratumReport(key, INFEASIBLE, red.active))
            continue
        ranks = [numeric_rank(jacobian(sys, w, coords="facet"), tol.rank_rel) for w in pts]
        lo, hi = min(ranks), max(ranks)
        reports.append(StratumReport(
            key, red.status, red.active, dim, lo, hi,
            FULL_RANK if lo == target else DEFICIENT,
            tuple(tuple(float(x) for x in w) for w in pts),
            tuple(ranks),
        ))
    return reports


def is_embedded_toric(poly: DelzantPolytope, V: AffineSubspace, samples: int = DEFAULT_SAMPLES,
                      seed: int = 0, check_complex: bool = True,
                      tol: Tolerances = DEFAULT_TOL) -> SmoothnessVerdict:
    """Decide whether the closure of D(V) is a submanifold with corners.

    The polytope-side system decides the verdict. With ``check_complex`` the
    complex-side Jacobian is also evaluated at ``z = e * L`` for every sampled
    point and its rank compared.
    """
    if V.dim != poly.dim:
        raise ValueError("subspace and polytope dimensions differ")
    basis = ortho_basis(V)
    reports: dict[int, list[StratumReport]] = {}
    witness = None
    mismatches = []
    for chart in poly.charts:
        reps = analyze_vertex(chart, V, basis, POLYTOPE, samples, seed, tol)
        reports[chart.vertex] = reps
        if check_complex:
            fsys = build_system(chart, V, basis, COMPLEX)
            for rep in reps:
                for w, rg in zip(rep.points, rep.ranks):
                    rf = numeric_rank(jacobian(fsys, np.e * np.asarray(w)), tol.rank_rel)
                    if rf != rg:
                        mismatches.append((chart.vertex, rep.stratum, w))
        if witness is None:
            bad = next((r for r in reps if r.verdict == DEFICIENT), None)
            if bad is not None:
                i = bad.ranks.index(bad.min_rank)
                witness = Witness(chart.vertex, bad.stratum, bad.points[i], bad.min_rank)
    overall = witness is None
    return SmoothnessVerdict(V, reports, overall, witness, not mismatches, mismatches)


def rank_pair(chart: VertexChart, V: AffineSubspace, facet_values, basis=None,
              tol: Tolerances = DEFAULT_TOL) -> tuple[int, int]:
    """(rank Df at z = e L, rank Dg at L) for one point of the orthant chart."""
    if basis is None:
        basis = ortho_basis(V)
    L = np.asarray(facet_values, dtype=float)
    f = build_system(chart, V, basis, COMPLEX)
    g = build_system(chart, V, basis, POLYTOPE)
    return (numeric_rank(jacobian(f, np.e * L), tol.rank_rel),
            numeric_rank(jacobian(g, L), tol.rank_rel))
