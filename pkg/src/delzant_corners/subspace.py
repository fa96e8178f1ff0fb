"""Rational affine subspaces and their monomial defining systems.

An affine subspace ``V = R p_1 + ... + R p_k + a`` yields, at every vertex
chart, one binomial equation per vector ``q_j`` of an integral basis of the
orthogonal complement. On the complex side the unknowns are chart
coordinates ``z_i``; on the polytope side they are ``e * L_i`` where ``L_i``
are the incident facet values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import lattice
from .errors import PoleAtBoundary
from .lattice import IntVec
from .polytope import VertexChart

COMPLEX = "f"
POLYTOPE = "g"
_E = math.e


@dataclass(frozen=True)
class AffineSubspace:
    """``span(directions) + anchor``. Directions are stored primitive."""

    directions: tuple[IntVec, ...]
    anchor: tuple[float, ...]

    def __init__(self, directions, anchor=None):
        dirs = tuple(lattice.primitive_part(p) for p in directions)
        if not dirs:
            raise ValueError("an affine subspace needs at least one direction")
        n = len(dirs[0])
        if any(len(p) != n for p in dirs):
            raise ValueError("directions have inconsistent lengths")
        if anchor is None:
            anchor = (0.0,) * n
        anchor = tuple(float(x) for x in anchor)
        if len(anchor) != n:
            raise ValueError(f"anchor has length {len(anchor)}, expected {n}")
        if lattice.rank(dirs) != len(dirs):
            raise ValueError("directions are linearly dependent")
        if not 1 <= len(dirs) <= n - 1:
            raise ValueError(f"need 1 <= k <= n-1, got k={len(dirs)} in dimension {n}")
        object.__setattr__(self, "directions", dirs)
        object.__setattr__(self, "anchor", anchor)

    @classmethod
    def hyperplane(cls, normal, anchor=None) -> "AffineSubspace":
        """Codimension-one subspace with the given integral normal."""
        basis = lattice.integer_kernel_basis([lattice.as_int_vector(normal)])
        return cls(basis, anchor)

    @property
    def dim(self) -> int:
        return len(self.anchor)

    @property
    def k(self) -> int:
        return len(self.directions)

    @property
    def codim(self) -> int:
        return self.dim - self.k

    def with_anchor(self, anchor) -> "AffineSubspace":
        return AffineSubspace(self.directions, anchor)

    def transformed(self, matrix) -> "AffineSubspace":
        """Image under an integral unimodular linear map."""
        dirs = [lattice.matvec(matrix, p) for p in self.directions]
        anchor = np.asarray(matrix, dtype=float) @ np.asarray(self.anchor)
        return AffineSubspace(dirs, anchor)


@dataclass(frozen=True)
class OrthoBasis:
    vectors: tuple[IntVec, ...]

    def __iter__(self):
        return iter(self.vectors)

    def __len__(self):
        return len(self.vectors)


def ortho_basis(V: AffineSubspace) -> OrthoBasis:
    """Integral basis q_{k+1}, ..., q_n of the lattice orthogonal to V."""
    return OrthoBasis(tuple(lattice.integer_kernel_basis(V.directions)))


@dataclass(frozen=True)
class TorusElement:
    angles: tuple[float, ...]

    def __init__(self, angles):
        object.__setattr__(self, "angles", tuple(float(np.mod(t, 2 * np.pi)) for t in angles))

    @classmethod
    def identity(cls, k: int) -> "TorusElement":
        return cls((0.0,) * k)


@dataclass(frozen=True, eq=False)
class ExponentSystem:
    """Binomial equations ``prod_{m>0} w^m - c prod_{m<0} w^{-m}``.

    ``exponents[j][i] = <u_i, q_j>`` and ``constants[j] = exp(<a, q_j>)``.
    For the polytope side the arguments are ``e * L_i``, and ``normals`` holds
    the chart normals so Jacobians can be taken in chart coordinates.
    """

    side: str
    vertex: int | None
    exponents: tuple[IntVec, ...]
    constants: tuple[float, ...]
    normals: tuple[IntVec, ...]

    @property
    def n_equations(self) -> int:
        return len(self.exponents)

    @property
    def n(self) -> int:
        return len(self.normals)

    def plus(self, j: int) -> frozenset[int]:
        return frozenset(i for i, m in enumerate(self.exponents[j]) if m >= 0)

    def minus(self, j: int) -> frozenset[int]:
        return frozenset(i for i, m in enumerate(self.exponents[j]) if m <= 0)

    def zero(self, j: int) -> frozenset[int]:
        return frozenset(i for i, m in enumerate(self.exponents[j]) if m == 0)

    @cached_property
    def exponent_array(self) -> np.ndarray:
        return np.array(self.exponents, dtype=float)

    @cached_property
    def log_constants(self) -> np.ndarray:
        return np.log(np.array(self.constants))

    def arguments(self, w) -> np.ndarray:
        if self.side == POLYTOPE:
            return _E * np.asarray(w, dtype=float)
        return np.asarray(w, dtype=complex)

    def monomials(self, w) -> tuple[np.ndarray, np.ndarray]:
        """Positive and negative monomials per equation, before the constant."""
        args = self.arguments(w)
        pos = []
        neg = []
        for row in self.exponents:
            pos.append(_monomial(args, [m if m > 0 else 0 for m in row]))
            neg.append(_monomial(args, [-m if m < 0 else 0 for m in row]))
        dtype = complex if self.side == COMPLEX else float
        return np.array(pos, dtype=dtype), np.array(neg, dtype=dtype)

    def scaled_residual(self, w) -> np.ndarray:
        """``|value| / (1 + |pos| + c |neg|)`` per equation."""
        pos, neg = self.monomials(w)
        c = np.array(self.constants)
        return np.abs(pos - c * neg) / (1.0 + np.abs(pos) + c * np.abs(neg))


def _monomial(args, exps):
    # exponent-0 factors are dropped, so 0**0 never arises
    out = 1
    for x, m in zip(args, exps):
        if m:
            out = out * x ** m
    return out


def build_system(chart: VertexChart, V: AffineSubspace, basis: OrthoBasis | None = None,
                 side: str = POLYTOPE) -> ExponentSystem:
    if side not in (COMPLEX, POLYTOPE):
        raise ValueError(f"side must be {COMPLEX!r} or {POLYTOPE!r}")
    if basis is None:
        basis = ortho_basis(V)
    if chart.dim != V.dim:
        raise ValueError("chart and subspace dimensions differ")
    exps = tuple(tuple(lattice.dot(u, q) for u in chart.normals) for q in basis)
    consts = tuple(math.exp(float(np.dot(V.anchor, q))) for q in basis)
    return ExponentSystem(side, chart.vertex, exps, consts, chart.normals)


def orthant_chart(n: int) -> VertexChart:
    """The standard model: identity normals and zero offsets."""
    eye = lattice.identity(n)
    from fractions import Fraction
    return VertexChart(
        vertex=-1,
        position=(Fraction(0),) * n,
        facets=tuple(range(n)),
        normals=eye,
        directions=eye,
        offsets=(Fraction(0),) * n,
    )


def eval_system(sys: ExponentSystem, w) -> np.ndarray:
    pos, neg = sys.monomials(w)
    return pos - np.array(sys.constants) * neg


def jacobian(sys: ExponentSystem, w, coords: str = "chart") -> np.ndarray:
    """Jacobian of the system at ``w``.

    Polytope side: ``coords="chart"`` differentiates in chart coordinates xi,
    which right-multiplies the facet-value Jacobian by ``U^T``;
    ``coords="facet"`` differentiates in the facet values L directly.
    """
    args = sys.arguments(w)
    n = sys.n
    dtype = complex if sys.side == COMPLEX else float
    jac = np.zeros((sys.n_equations, n), dtype=dtype)
    for j, row in enumerate(sys.exponents):
        for i, m in enumerate(row):
            if m == 0:
                continue
            if m > 0:
                exps = [e if e > 0 else 0 for e in row]
                coeff = m
            else:
                exps = [-e if e < 0 else 0 for e in row]
                coeff = m * sys.constants[j]
            exps[i] -= 1
            for x, e in zip(args, exps):
                if e < 0 and x == 0:
                    raise PoleAtBoundary(f"negative exponent at zero coordinate {i}")
            jac[j, i] = coeff * _monomial(args, exps)
    if sys.side == POLYTOPE:
        jac = _E * jac
        if coords == "chart":
            jac = jac @ np.array(sys.normals, dtype=float)
    return jac


def numeric_rank(mat, rel: float = 1e-8) -> int:
    """Rank after row and column equilibration.

    Nonzero rows and columns are scaled to unit max-modulus (this preserves
    exact rank), then singular values above ``rel * max(s_max, 1)`` count.
    """
    a = np.array(mat, dtype=complex if np.iscomplexobj(mat) else float)
    if a.size == 0:
        return 0
    for axis in (0, 1):
        scale = np.max(np.abs(a), axis=1 - axis, keepdims=True)
        scale[scale == 0] = 1.0
        a = a / scale
    s = np.linalg.svd(a, compute_uv=False)
    return int(np.sum(s > rel * max(s[0] if s.size else 0.0, 1.0)))


def pairing_exponents(chart: VertexChart, V: AffineSubspace) -> np.ndarray:
    """Integer matrix ``<p_l, v_i>``, shape (k, n)."""
    return np.array([[lattice.dot(p, v) for v in chart.directions] for p in V.directions],
                    dtype=float)


def torus_act(chart: VertexChart, V: AffineSubspace, t: TorusElement, z) -> np.ndarray:
    """``i_V(t) . z``: coordinate i gains the phase ``sum_l theta_l <p_l, v_i>``."""
    theta = np.asarray(t.angles)
    phase = theta @ pairing_exponents(chart, V)
    return np.asarray(z, dtype=complex) * np.exp(1j * phase)


def action_factor(chart: VertexChart, V: AffineSubspace, basis: OrthoBasis | None,
                  t: TorusElement) -> np.ndarray:
    """Unit scalars T_j(t) with ``f_j(i_V(t) . z) = T_j(t) f_j(z)``."""
    if basis is None:
        basis = ortho_basis(V)
    theta = np.asarray(t.angles)
    phase = theta @ pairing_exponents(chart, V)
    out = []
    for q in basis:
        m = [lattice.dot(u, q) for u in chart.normals]
        total = sum(-phase[i] * m[i] for i in range(len(m)) if m[i] <= 0)
        out.append(np.exp(1j * total))
    return np.array(out)


def param_point(chart: VertexChart, V: AffineSubspace, basis, u, v) -> np.ndarray:
    """Point of the complex subtorus in chart coordinates.

    ``z_i = exp(sum_l <p_l,v_i>(u_l + i v_l) + <a, v_i>)``.
    """
    pair = pairing_exponents(chart, V)
    shift = np.array([np.dot(V.anchor, d) for d in chart.directions])
    w = (np.asarray(u, dtype=float) + 1j * np.asarray(v, dtype=float)) @ pair + shift
    return np.exp(w)


def phase_normalize(chart: VertexChart, V: AffineSubspace, z, v) -> TorusElement:
    """Torus element rotating a ``param_point`` with phases ``v`` onto |z|."""
    return TorusElement(-np.asarray(v, dtype=float))


def orthogonality_defect(chart: VertexChart, V: AffineSubspace, basis: OrthoBasis) -> IntVec:
    """``sum_i <p_l, v_i><u_i, q_j>`` for all (l, j); zero when consistent."""
    out = []
    for p in V.directions:
        for q in basis:
            out.append(sum(lattice.dot(p, v) * lattice.dot(u, q)
                           for v, u in zip(chart.directions, chart.normals)))
    return tuple(out)
