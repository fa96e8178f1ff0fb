"""Guillemin potential, its Legendre transform, vertex-chart transforms and
planar curve tracing.

``G(xi) = sum_j L_j log L_j`` over all facets. Its gradient map sends the open
polytope diffeomorphically onto R^n; the inverse is computed by damped Newton.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .config import DEFAULT_TOL, Tolerances
from .errors import NoConvergence, NotInterior, OnExcludedFacet
from .polytope import DelzantPolytope, VertexChart, facet_values, locate, nearest_vertex
from .subspace import POLYTOPE, AffineSubspace, build_system, ortho_basis


def _interior_values(poly: DelzantPolytope, xi) -> np.ndarray:
    L = facet_values(poly, xi)
    if np.any(L <= 0):
        raise NotInterior(xi, int(np.argmin(L)))
    return L


def potential(poly: DelzantPolytope, xi) -> float:
    L = _interior_values(poly, xi)
    return float(np.sum(L * np.log(L)))


def potential_grad(poly: DelzantPolytope, xi) -> np.ndarray:
    L = _interior_values(poly, xi)
    return poly.normals_array.T @ (1.0 + np.log(L))


def hessian(poly: DelzantPolytope, xi) -> np.ndarray:
    L = _interior_values(poly, xi)
    u = poly.normals_array
    return (u.T / L) @ u


def _max_step(L: np.ndarray, dL: np.ndarray, fraction: float) -> float:
    neg = dL < 0
    if not np.any(neg):
        return 1.0
    return min(1.0, fraction * float(np.min(-L[neg] / dL[neg])))


def analytic_center(poly: DelzantPolytope, tol: Tolerances = DEFAULT_TOL) -> np.ndarray:
    """Maximizer of ``sum_j log L_j`` over the interior."""
    cached = poly.__dict__.get("_analytic_center")
    if cached is not None:
        return cached.copy()
    u = poly.normals_array
    xi = poly.vertices_array.mean(axis=0)
    for _ in range(tol.newton_max_iter):
        L = facet_values(poly, xi)
        grad = -(u.T @ (1.0 / L))
        H = (u.T / L**2) @ u
        d = -np.linalg.solve(H, grad)
        dec = float(-grad @ d)
        if dec < 1e-24:
            break
        step = _max_step(L, u @ d, tol.fraction_to_boundary)
        xi = xi + step * d
    poly.__dict__["_analytic_center"] = xi
    return xi.copy()


def legendre(poly: DelzantPolytope, xi) -> np.ndarray:
    """Phi, the gradient of the potential."""
    return potential_grad(poly, xi)


def legendre_inverse(poly: DelzantPolytope, x, tol: Tolerances = DEFAULT_TOL,
                     start=None) -> np.ndarray:
    """Solve ``grad G(xi) = x`` for interior xi.

    Minimizes the strictly convex ``G(xi) - <x, xi>`` by Newton steps that
    stop short of the boundary and backtrack on the objective. Stops when the
    gradient residual falls below ``tol.newton_tol`` or no longer decreases.
    Very large ``x`` pushes xi within rounding distance of a facet, so the
    attainable residual there is limited by cancellation in the facet values.
    """
    x = np.asarray(x, dtype=float)
    if x.shape != (poly.dim,):
        raise ValueError(f"expected a point of length {poly.dim}")
    u = poly.normals_array
    k = poly.offsets_array
    xi = analytic_center(poly, tol) if start is None else np.asarray(start, dtype=float)

    def objective(p):
        L = u @ p - k
        return float(np.sum(L * np.log(L)) - x @ p)

    best = math.inf
    stall = 0
    res = math.inf
    for it in range(tol.newton_max_iter):
        L = u @ xi - k
        g = u.T @ (1.0 + np.log(L)) - x
        res = float(np.linalg.norm(g))
        if res < tol.newton_tol:
            return xi
        if res < best * 0.999:
            best = res
            stall = 0
        else:
            stall += 1
            if stall >= 25:
                return xi
        H = (u.T / L) @ u
        d = -np.linalg.solve(H, g)
        step = _max_step(L, u @ d, tol.fraction_to_boundary)
        f0 = objective(xi)
        slope = float(g @ d)
        while step > 1e-16:
            trial = xi + step * d
            Lt = u @ trial - k
            if np.all(Lt > 0):
                # near the root the objective decrease drowns in rounding,
                # so a smaller gradient residual also accepts the step
                if objective(trial) <= f0 + 1e-4 * step * slope:
                    break
                if np.linalg.norm(u.T @ (1.0 + np.log(Lt)) - x) < res:
                    break
            step *= 0.5
        else:
            return xi
        if np.linalg.norm(trial - xi) <= 1e-16 * (1.0 + np.linalg.norm(xi)):
            return trial
        xi = trial
    raise NoConvergence(tol.newton_max_iter, res)


def legendre_residual(poly: DelzantPolytope, xi, x) -> float:
    return float(np.linalg.norm(potential_grad(poly, xi) - np.asarray(x, dtype=float)))


def _non_incident(poly: DelzantPolytope, chart: VertexChart) -> list[int]:
    return [j for j in range(poly.n_facets) if j not in chart.facets]


def local_facet_values(poly: DelzantPolytope, chart: VertexChart, xi) -> np.ndarray:
    """``L^lam_i(Psi_lam(xi))`` by the product formula, valid up to the incident facets.

    ``exp(sum_j <v_i,u_j>) * L_i(xi) * prod_j L_j(xi)^<v_i,u_j>`` with j over
    the non-incident facets.
    """
    L = facet_values(poly, xi)
    rest = _non_incident(poly, chart)
    if any(L[j] <= 0 for j in rest):
        j = next(j for j in rest if L[j] <= 0)
        raise OnExcludedFacet(f"facet {j} is not incident to vertex {chart.vertex}")
    out = np.empty(chart.dim)
    u = poly.normals_array
    for i, f in enumerate(chart.facets):
        v = np.asarray(chart.directions[i], dtype=float)
        e = np.array([u[j] @ v for j in rest])
        Li = max(L[f], 0.0)
        if Li == 0.0:
            out[i] = 0.0
        else:
            out[i] = math.exp(float(e.sum()) + math.log(Li) + float(e @ np.log(L[rest])))
    return out


def psi_lambda(poly: DelzantPolytope, chart: VertexChart, xi) -> np.ndarray:
    """Map the open polytope into the open local model at the vertex."""
    grad = potential_grad(poly, xi)
    w = np.array([math.exp(float(np.dot(v, grad)) - 1.0) for v in chart.directions])
    w = w + np.array([float(c) for c in chart.offsets])
    return np.array(chart.Q, dtype=float) @ w


def psi_bar_lambda(poly: DelzantPolytope, chart: VertexChart, xi) -> np.ndarray:
    """Continuous extension of ``psi_lambda`` to the incident facets."""
    Lloc = local_facet_values(poly, chart, xi)
    w = Lloc + np.array([float(c) for c in chart.offsets])
    return np.array(chart.Q, dtype=float) @ w


def local_potential_grad(chart: VertexChart, xi_local) -> np.ndarray:
    L = chart.local_values(xi_local)
    if np.any(L <= 0):
        raise NotInterior(xi_local, int(np.argmin(L)))
    return np.array(chart.U, dtype=float) @ (1.0 + np.log(L))


def chart_residual(poly: DelzantPolytope, chart: VertexChart, xi) -> float:
    """``|grad G^lam(Psi_lam(xi)) - grad G(xi)|``."""
    return float(np.linalg.norm(
        local_potential_grad(chart, psi_lambda(poly, chart, xi)) - potential_grad(poly, xi)))


def system_residual(poly: DelzantPolytope, V: AffineSubspace, xi, vertex: int | None = None) -> float:
    """Largest scaled g-system residual at xi in the chart of ``vertex``.

    Defaults to the chart of the nearest vertex.
    """
    if vertex is None:
        vertex = nearest_vertex(poly, xi)
    chart = poly.chart(vertex)
    sys = build_system(chart, V, ortho_basis(V), POLYTOPE)
    return float(np.max(sys.scaled_residual(local_facet_values(poly, chart, xi))))


@dataclass(frozen=True)
class Endpoint:
    position: tuple[float, ...]
    kind: str  # vertex | facet
    facets: tuple[int, ...]
    vertex: int | None = None


@dataclass
class CurveSample:
    subspace: AffineSubspace
    params: list[float]
    points: list[tuple[float, ...]]
    endpoints: list[Endpoint] = field(default_factory=list)
    # parameter label of each endpoint: -inf or +inf
    endpoint_params: list[float] = field(default_factory=list)

    def rows(self, poly: DelzantPolytope):
        """(s, xi1, xi2, location) rows including the closure endpoints."""
        out = []
        ends = dict(zip(self.endpoint_params, self.endpoints))
        if -math.inf in ends:
            e = ends[-math.inf]
            out.append((-math.inf, *e.position, e.kind))
        for s, p in zip(self.params, self.points):
            out.append((s, *p, "interior"))
        if math.inf in ends:
            e = ends[math.inf]
            out.append((math.inf, *e.position, e.kind))
        return out


def closure_endpoints(poly: DelzantPolytope, V: AffineSubspace,
                      tol: Tolerances = DEFAULT_TOL) -> list[Endpoint]:
    """Boundary points of the closure of D(V) for a planar line V.

    Works chart by chart. A feasible all-zero stratum gives the vertex. A
    feasible single-facet stratum fixes the other local coordinate, and the
    matching point on the edge is found by a monotone root solve.
    """
    if poly.dim != 2 or V.k != 1:
        raise ValueError("closure endpoints are computed for lines in the plane")
    basis = ortho_basis(V)
    found: list[Endpoint] = []

    def add(ep):
        for other in found:
            if np.linalg.norm(np.subtract(ep.position, other.position)) < tol.dedup:
                return
        found.append(ep)

    u = poly.normals_array
    for chart in poly.charts:
        sys = build_system(chart, V, basis, POLYTOPE)
        m = sys.exponents[0]
        logc = float(sys.log_constants[0])
        if any(x > 0 for x in m) and any(x < 0 for x in m):
            add(Endpoint(tuple(float(x) for x in chart.position), "vertex",
                         chart.facets, chart.vertex))
        for i in range(2):
            o = 1 - i
            if m[i] != 0:
                continue
            target = logc / m[o] - 1.0  # log of the local value L_o
            v = np.asarray(chart.directions[o], dtype=float)
            base = np.array([float(c) for c in chart.position])
            rest = _non_incident(poly, chart)
            L0 = facet_values(poly, base)
            slopes = np.array([u[j] @ v for j in rest])
            # the edge ends where a non-incident facet value reaches zero
            t_end = min(L0[j] / -s for j, s in zip(rest, slopes) if s < 0)

            def h(t):
                Lr = L0[rest] + t * slopes
                return float(slopes.sum() + math.log(t) + slopes @ np.log(Lr)) - target

            lo, hi = t_end * 1e-300, t_end * (1 - 1e-15)
            lo = max(lo, 1e-300)
            if h(lo) > 0 or h(hi) < 0:
                continue
            t = brentq(h, lo, hi, xtol=tol.boundary_bisect * t_end * 1e-4, rtol=1e-15, maxiter=500)
            pos = base + t * v
            add(Endpoint(tuple(float(x) for x in pos), "facet", (chart.facets[i],)))
    return found


def trace_curve(poly: DelzantPolytope, V: AffineSubspace, resolution: int = 512,
                tol: Tolerances = DEFAULT_TOL) -> CurveSample:
    """Sample D(V) = Phi^{-1}(V) and attach its closure endpoints.

    The line is parameterized as ``a + s p``. The parameter window grows until
    both ends are within one step of a closure endpoint, then intervals are
    bisected until consecutive points are closer than diameter/resolution.
    """
    if poly.dim != 2 or V.k != 1:
        raise ValueError("curve tracing is implemented for lines in the plane")
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    p = np.asarray(V.directions[0], dtype=float)
    a = np.asarray(V.anchor)
    h = poly.diameter / resolution
    ends = closure_endpoints(poly, V, tol)

    cache: dict[float, np.ndarray] = {}

    def at(s):
        if s not in cache:
            near = min(cache, key=lambda t: abs(t - s)) if cache else None
            start = cache[near] if near is not None else None
            try:
                cache[s] = legendre_inverse(poly, a + s * p, tol, start=start)
            except NoConvergence:
                cache[s] = legendre_inverse(poly, a + s * p, tol)
        return cache[s]

    def dist_to_ends(x):
        return min((np.linalg.norm(x - np.asarray(e.position)) for e in ends), default=math.inf)

    S = 1.0
    while S < 64 and max(dist_to_ends(at(-S)), dist_to_ends(at(S))) > h:
        S *= 2
    grid = list(np.linspace(-S, S, 33))
    for s in grid:
        at(float(s))
    params = sorted(cache)
    for _ in range(40):
        new = []
        for s0, s1 in zip(params, params[1:]):
            if np.linalg.norm(at(s1) - at(s0)) > h:
                new.append(0.5 * (s0 + s1))
        if not new:
            break
        for s in new:
            at(s)
        params = sorted(cache)
    params = [s for s in sorted(cache) if -S <= s <= S]
    points = [tuple(float(x) for x in at(s)) for s in params]

    endpoint_params = []
    ordered = []
    for label, x in ((-math.inf, at(params[0])), (math.inf, at(params[-1]))):
        if not ends:
            break
        e = min(ends, key=lambda e: np.linalg.norm(x - np.asarray(e.position)))
        ordered.append(e)
        endpoint_params.append(label)
    return CurveSample(V, params, points, ordered, endpoint_params)


@dataclass(frozen=True)
class IntersectionPoint:
    position: tuple[float, ...]
    location: str  # interior | boundary | vertex
    facets: tuple[int, ...] = ()
    vertex: int | None = None
    pair: tuple[int, int] = (0, 1)

    def to_dict(self) -> dict:
        out = {"position": list(self.position), "location": self.location}
        if self.facets:
            out["facets"] = list(self.facets)
        if self.vertex is not None:
            out["vertex"] = self.vertex
        out["pair"] = list(self.pair)
        return out


def _seed_points(poly: DelzantPolytope, rng: np.random.Generator, per_axis: int = 9):
    lo = poly.vertices_array.min(axis=0)
    hi = poly.vertices_array.max(axis=0)
    axes = [np.linspace(l, h, per_axis + 2)[1:-1] for l, h in zip(lo, hi)]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, poly.dim)
    grid = grid + rng.uniform(-0.25, 0.25, size=grid.shape) * (hi - lo) / (per_axis + 1)
    return [g for g in grid if np.all(facet_values(poly, g) > 0)]


def _newton_pair(poly, qs, cs, xi, tol: Tolerances):
    """Newton on ``<grad G(xi), q_j> = c_j`` from xi, staying interior."""
    u = poly.normals_array
    k = poly.offsets_array
    Q = np.array(qs, dtype=float)
    for _ in range(60):
        L = u @ xi - k
        if not np.all(L > 1e-300):
            return None  # drifted onto the boundary, no interior root from here
        F = Q @ (u.T @ (1.0 + np.log(L))) - cs
        if np.linalg.norm(F) < 1e-13:
            return xi
        J = Q @ ((u.T / L) @ u)
        d, *_ = np.linalg.lstsq(J, -F, rcond=None)
        step = _max_step(L, u @ d, tol.fraction_to_boundary)
        xi = xi + step * d
    L = u @ xi - k
    if not np.all(L > 1e-300):
        return None
    F = Q @ (u.T @ (1.0 + np.log(L))) - cs
    return xi if np.linalg.norm(F) < tol.intersection_residual * 1e-2 else None


def intersect_curves(poly: DelzantPolytope, Va: AffineSubspace, Vb: AffineSubspace,
                     seed: int = 0, pair=(0, 1), tol: Tolerances = DEFAULT_TOL,
                     ) -> list[IntersectionPoint]:
    """Intersection points of the closures of D(Va) and D(Vb) in a polygon.

    Interior points solve both systems at once by Newton from jittered grid
    seeds. Boundary points are shared closure endpoints.
    """
    if poly.dim != 2 or Va.k != 1 or Vb.k != 1:
        raise ValueError("intersections are computed for lines in the plane")
    rng = np.random.default_rng(seed)
    qa = ortho_basis(Va).vectors[0]
    qb = ortho_basis(Vb).vectors[0]
    cs = np.array([np.dot(Va.anchor, qa), np.dot(Vb.anchor, qb)])
    found: list[np.ndarray] = []
    for s in _seed_points(poly, rng):
        xi = _newton_pair(poly, (qa, qb), cs, s, tol)
        if xi is None:
            continue
        if any(np.linalg.norm(xi - f) < tol.dedup for f in found):
            continue
        if (system_residual(poly, Va, xi) < tol.intersection_residual
                and system_residual(poly, Vb, xi) < tol.intersection_residual):
            found.append(xi)
    found.sort(key=lambda x: tuple(x))
    out = [IntersectionPoint(tuple(float(x) for x in f), "interior", pair=tuple(pair))
           for f in found]

    ea = closure_endpoints(poly, Va, tol)
    eb = closure_endpoints(poly, Vb, tol)
    shared = []
    for e in ea:
        if any(np.linalg.norm(np.subtract(e.position, f.position)) < tol.dedup for f in eb):
            loc = locate(poly, e.position, tol.on_facet)
            kind = "vertex" if loc.kind == "vertex" else "boundary"
            shared.append(IntersectionPoint(e.position, kind, loc.facets, loc.vertex,
                                            tuple(pair)))
    shared.sort(key=lambda p: p.position)
    return out + shared


def affine_intersection(Va: AffineSubspace, Vb: AffineSubspace):
    """Intersection of two lines in the plane: a point, None (parallel) or 'same'."""
    qa = np.asarray(ortho_basis(Va).vectors[0], dtype=float)
    qb = np.asarray(ortho_basis(Vb).vectors[0], dtype=float)
    ca, cb = qa @ Va.anchor, qb @ Vb.anchor
    A = np.vstack([qa, qb])
    if abs(np.linalg.det(A)) < 1e-12:
        return "same" if abs(ca - cb * (qa @ qb) / (qb @ qb)) < 1e-12 else None
    return np.linalg.solve(A, np.array([ca, cb]))
