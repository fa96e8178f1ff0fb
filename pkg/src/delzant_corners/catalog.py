"""A few standard Delzant polytopes."""

from __future__ import annotations

from .polytope import DelzantPolytope, validate


def projective_plane(size: int = 2) -> DelzantPolytope:
    """Triangle with vertices (0,0), (size,0), (0,size)."""
    return validate([((1, 0), 0), ((0, 1), 0), ((-1, -1), -size)], name="CP2")


def square(side: int = 1) -> DelzantPolytope:
    """``[0, side]^2``, the polytope of CP^1 x CP^1."""
    return validate(
        [((1, 0), 0), ((0, 1), 0), ((-1, 0), -side), ((0, -1), -side)],
        name="CP1xCP1",
    )


def hirzebruch(a: int = 1, height: int = 1, base: int = 2) -> DelzantPolytope:
    """Trapezoid of the Hirzebruch surface F_a.

    Vertices (0,0), (base,0), (base - a*height, height), (0, height).
    """
    if base - a * height <= 0:
        raise ValueError("top edge must have positive length")
    return validate(
        [((1, 0), 0), ((0, 1), 0), ((0, -1), -height), ((-1, -a), -base)],
        name=f"F{a}",
    )


def projective_space(n: int = 3, size: int = 1) -> DelzantPolytope:
    """Standard simplex of CP^n scaled by ``size``."""
    facets = [(tuple(int(i == j) for j in range(n)), 0) for i in range(n)]
    facets.append((tuple(-1 for _ in range(n)), -size))
    return validate(facets, name=f"CP{n}")


def standard_catalog() -> dict[str, DelzantPolytope]:
    return {
        "CP2": projective_plane(),
        "CP1xCP1": square(),
        "F1": hirzebruch(1),
        "CP3": projective_space(3),
    }
