"""Numerical tolerances shared by the numeric modules.

Exact modules (lattice, polytope, strata feasibility) never consult these.
"""

from __future__ import annotations

from dataclasses import dataclass, replace


@dataclass(frozen=True)
class Tolerances:
    # singular value cutoff, relative to max(largest singular value, 1)
    rank_rel: float = 1e-8
    # least-squares residual that declares a log-linear stratum system solvable
    lstsq_residual: float = 1e-9
    # Legendre inverse: target gradient residual and iteration cap
    newton_tol: float = 1e-10
    newton_max_iter: int = 200
    fraction_to_boundary: float = 0.95
    # facet-value threshold for "on facet" classification
    on_facet: float = 1e-8
    # bisection tolerance when locating closure endpoints on an edge
    boundary_bisect: float = 1e-10
    # interior intersection points closer than this are merged
    dedup: float = 1e-7
    # scaled residual of the chart system at curve samples / intersections
    curve_residual: float = 1e-9
    intersection_residual: float = 1e-8

    def override(self, **changes) -> "Tolerances":
        return replace(self, **changes)


DEFAULT_TOL = Tolerances()
