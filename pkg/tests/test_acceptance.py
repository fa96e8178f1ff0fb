"""End-to-end acceptance checks, one test per criterion.

Each test records a PASS/FAIL line that is repeated in the terminal summary.
"""

import json
import math
import subprocess
import sys
import time

import numpy as np
import pytest
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from delzant_corners import catalog, lattice
from delzant_corners.classify import (
    canonical_primitives,
    closed_form_member_2d,
    closed_form_member_3d,
    local_model_member,
)
from delzant_corners.errors import NotSmooth, Unbounded
from delzant_corners.formats import load_polytope
from delzant_corners.geometry import (
    affine_intersection,
    chart_residual,
    intersect_curves,
    legendre_inverse,
    potential,
    potential_grad,
)
from delzant_corners.polytope import facet_values
from delzant_corners.smoothness import is_embedded_toric, rank_pair
from delzant_corners.subspace import (
    COMPLEX,
    AffineSubspace,
    TorusElement,
    action_factor,
    build_system,
    eval_system,
    jacobian,
    numeric_rank,
    ortho_basis,
    param_point,
    torus_act,
)

CP2_SLOPES = {(1, 0), (0, 1), (1, 1), (1, -1), (2, 1), (1, 2)}


def random_subspace(rng, n):
    k = int(rng.integers(1, n))
    while True:
        P = rng.integers(-3, 4, size=(k, n))
        if np.linalg.matrix_rank(P) == k:
            return AffineSubspace([tuple(int(x) for x in row) for row in P], rng.normal(size=n))


def interior_points(poly, rng, count):
    verts = poly.vertices_array
    w = rng.dirichlet(np.ones(len(verts)), size=count)
    return w @ verts


def test_criterion_1_cp2_classification(polytope_dir, record):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "delzant_corners", "classify", str(polytope_dir / "cp2.json"),
         "--codim", "1", "--box", "10", "--report", "json"],
        capture_output=True, text=True)
    elapsed = time.perf_counter() - start
    members = {tuple(m) for m in json.loads(proc.stdout)["members"]} if proc.returncode == 0 \
        else set()
    ok = record(1, members == CP2_SLOPES and elapsed < 5.0)
    assert ok, (members, elapsed)


def test_criterion_2_planar_local_model(record):
    classes = list(canonical_primitives(2, 20))
    bad = [p for p in classes
           if local_model_member(2, 1, AffineSubspace([p]), cross_check=False)
           != closed_form_member_2d(p)]
    ok = record(2, len(classes) > 400 and not bad)
    assert ok, bad


@pytest.mark.xfail(strict=True, reason="the strict-sign closed form omits smooth slopes with "
                                        "a zero entry, such as the normal (0,1,1)")
def test_criterion_3_spatial_local_model_literal(record):
    bad = [q for q in canonical_primitives(3, 6)
           if local_model_member(3, 2, AffineSubspace.hyperplane(q), cross_check=False)
           != closed_form_member_3d(q, literal=True)]
    ok = record(3, not bad)
    assert ok, f"{len(bad)} disagreements, first {bad[:3]}"


def test_criterion_3_spatial_local_model_with_zero_entries():
    # the same check once sign patterns with zero entries are admitted
    for q in canonical_primitives(3, 6):
        V = AffineSubspace.hyperplane(q)
        assert local_model_member(3, 2, V, cross_check=False) \
            == closed_form_member_3d(q, literal=False), q


def test_criterion_4_rank_equality(standard, record):
    rng = np.random.default_rng(2024)
    mismatches = 0
    min_points = math.inf
    for poly in standard.values():
        for _ in range(20):
            V = random_subspace(rng, poly.dim)
            verdict = is_embedded_toric(poly, V, samples=16, seed=int(rng.integers(1 << 30)))
            mismatches += len(verdict.mismatches)
            basis = ortho_basis(V)
            for c in poly.charts:
                count = sum(len(r.points) for r in verdict.reports[c.vertex])
                # top up with points of the open orbit
                while count < 50:
                    z = param_point(c, V, basis, rng.normal(size=V.k), np.zeros(V.k))
                    rf, rg = rank_pair(c, V, np.abs(z) / np.e, basis)
                    mismatches += rf != rg
                    count += 1
                min_points = min(min_points, count)
    ok = record(4, mismatches == 0 and min_points >= 50)
    assert ok, (mismatches, min_points)


def test_criterion_5_equivariance(standard, record):
    rng = np.random.default_rng(5)
    polys = list(standard.values())
    worst = 0.0
    rank_failures = 0
    draws = 1000
    for _ in range(draws):
        poly = polys[int(rng.integers(len(polys)))]
        c = poly.charts[int(rng.integers(len(poly.charts)))]
        V = random_subspace(rng, poly.dim)
        basis = ortho_basis(V)
        f = build_system(c, V, basis, COMPLEX)
        z = rng.uniform(0.2, 2.0, size=c.dim) * np.exp(1j * rng.uniform(0, 2 * np.pi, c.dim))
        t = TorusElement(rng.uniform(0, 2 * np.pi, size=V.k))
        fz = eval_system(f, z)
        lhs = eval_system(f, torus_act(c, V, t, z))
        rhs = action_factor(c, V, basis, t) * fz
        worst = max(worst, float(np.max(np.abs(lhs - rhs) / (1 + np.abs(fz)))))
        rank_failures += numeric_rank(jacobian(f, z)) \
            != numeric_rank(jacobian(f, torus_act(c, V, t, z)))
    ok = record(5, worst < 1e-10 and rank_failures == 0)
    assert ok, (worst, rank_failures)


def test_criterion_6_legendre(standard, record):
    rng = np.random.default_rng(6)
    round_trip = fd_error = psi = 0.0
    for poly in standard.values():
        for xi in interior_points(poly, rng, 100):
            round_trip = max(round_trip, float(np.linalg.norm(
                legendre_inverse(poly, potential_grad(poly, xi)) - xi)))
            g = potential_grad(poly, xi)
            h = 1e-6
            fd = np.array([(potential(poly, xi + h * e) - potential(poly, xi - h * e)) / (2 * h)
                           for e in np.eye(poly.dim)])
            fd_error = max(fd_error, float(np.linalg.norm(fd - g) / max(1.0, np.linalg.norm(g))))
            psi = max(psi, max(chart_residual(poly, c, xi) for c in poly.charts))
    ok = record(6, round_trip < 1e-9 and fd_error < 1e-6 and psi < 1e-8)
    assert ok, (round_trip, fd_error, psi)


def test_criterion_7_intersections(cp2, lines, record):
    def run(seed):
        out = {}
        for a, b in [(1, 2), (1, 3), (2, 3), (1, 4), (3, 5)]:
            out[a, b] = intersect_curves(cp2, lines[a], lines[b], seed=seed)
        return out

    runs = [run(seed) for seed in range(4)]
    base = runs[0]
    checks = []
    for a, b in [(1, 2), (1, 3), (2, 3)]:
        affine = affine_intersection(lines[a], lines[b])
        pts = base[a, b]
        checks.append(affine is not None and len(pts) == 1 and pts[0].location == "interior")
        checks.append(np.allclose(pts[0].position, legendre_inverse(cp2, affine), atol=1e-9))
    pts = base[1, 4]
    interior = [p for p in pts if p.location == "interior"]
    checks.append(len(interior) == 1 and np.allclose(
        interior[0].position, legendre_inverse(cp2, affine_intersection(lines[1], lines[4]))))
    checks.append(len(pts) - len(interior) >= 1)
    pts = base[3, 5]
    checks.append(affine_intersection(lines[3], lines[5]) is None)
    checks.append(not any(p.location == "interior" for p in pts) and len(pts) >= 1)
    for other in runs[1:]:
        for key, pts in base.items():
            checks.append(len(other[key]) == len(pts) and all(
                np.allclose(p.position, q.position, atol=1e-6) for p, q in zip(pts, other[key])))
    ok = record(7, all(checks))
    assert ok, checks


def _random_sl(rng, n):
    m = lattice.identity(n)
    for _ in range(int(rng.integers(1, 8))):
        i, j = rng.choice(n, size=2, replace=False)
        e = [list(r) for r in lattice.identity(n)]
        e[i][j] = int(rng.integers(-3, 4))
        m = lattice.matmul(m, e)
        if rng.random() < 0.3:
            m = [m[1], [-x for x in m[0]], *m[2:]]
    return m


def test_criterion_8_lattice_oracles(record):
    rng = np.random.default_rng(8)
    kernel_ok = True
    for _ in range(1000):
        r, c = (int(x) for x in rng.integers(1, 5, size=2))
        m = [[int(x) for x in row] for row in rng.integers(-9, 10, size=(r, c))]
        basis = lattice.integer_kernel_basis(m, c)
        rk = Matrix(m).rank()
        if any(any(lattice.dot(row, q) for row in m) for q in basis) or len(basis) != c - rk:
            kernel_ok = False
            break
        # saturated sublattice of full rank in the kernel is the kernel
        if basis and any(int(d) != 1 for d in invariant_factors(Matrix(basis), domain=ZZ)
                         if d != 0):
            kernel_ok = False
            break
    inverse_ok = True
    for _ in range(1000):
        n = int(rng.integers(2, 5))
        m = _random_sl(rng, n)
        inv = lattice.unimodular_inverse(m)
        if lattice.matmul(m, inv) != lattice.identity(n) or Matrix(inv) != Matrix(m).inv():
            inverse_ok = False
            break
    ok = record(8, kernel_ok and inverse_ok)
    assert ok, (kernel_ok, inverse_ok)


def test_criterion_9_validation(polytope_dir, record):
    checks = [len(load_polytope(polytope_dir / f"{name}.json").vertices) == v
              for name, v in [("cp2", 3), ("square", 4), ("f1", 4), ("cp3", 4)]]
    checks.append(set(catalog.standard_catalog()) == {"CP2", "CP1xCP1", "F1", "CP3"})
    try:
        load_polytope(polytope_dir / "bad.json")
        checks.append(False)
    except NotSmooth as exc:
        checks.append("det 2" in str(exc))
    try:
        load_polytope(polytope_dir / "halfplane.json")
        checks.append(False)
    except Unbounded:
        checks.append(True)
    ok = record(9, all(checks))
    assert ok, checks
