"""Delzant polytopes, toric submanifolds and submanifolds with corners."""

__version__ = "0.1.0"

from .catalog import hirzebruch, projective_plane, projective_space, square, standard_catalog
from .classify import SlopeClass, classify_codim1, local_model_member
from .errors import DelzantCornersError
from .formats import load_polytope, parse_polytope
from .geometry import intersect_curves, legendre_inverse, potential_grad, trace_curve
from .polytope import DelzantPolytope, Halfspace, validate
from .smoothness import is_embedded_toric
from .subspace import AffineSubspace

__all__ = [
    "AffineSubspace",
    "DelzantCornersError",
    "DelzantPolytope",
    "Halfspace",
    "SlopeClass",
    "classify_codim1",
    "hirzebruch",
    "intersect_curves",
    "is_embedded_toric",
    "legendre_inverse",
    "load_polytope",
    "local_model_member",
    "parse_polytope",
    "potential_grad",
    "projective_plane",
    "projective_space",
    "square",
    "standard_catalog",
    "trace_curve",
    "validate",
]
