from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import invariant_factors

from delzant_corners import lattice
from delzant_corners.errors import NotUnimodular, ZeroVector


def matrices(max_rows=4, max_cols=4, lo=-9, hi=9):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                min_size=r, max_size=r)))


def sympy_invariants(m):
    return tuple(int(d) for d in invariant_factors(Matrix(m), domain=ZZ) if d != 0)


def is_saturated_kernel(m, basis, n):
    """The rows of ``basis`` span exactly the integer kernel of ``m``."""
    if any(any(lattice.dot(row, q) for row in m) for q in basis):
        return False
    if len(basis) != n - lattice.rational_rank(m):
        return False
    if not basis:
        return True
    # a sublattice of full rank in the kernel is the whole kernel iff it is saturated
    return all(d == 1 for d in sympy_invariants(basis))


def test_primitive_part():
    assert lattice.primitive_part((-3, 6, -9)) == (1, -2, 3)
    assert lattice.primitive_part((0, -4)) == (0, 1)
    with pytest.raises(ZeroVector):
        lattice.primitive_part((0, 0))


def test_kernel_examples():
    assert lattice.integer_kernel_basis([(1, 1)]) == [(1, -1)]
    assert lattice.integer_kernel_basis([(1, 0)]) == [(0, 1)]
    assert lattice.integer_kernel_basis([(2, 1)]) == [(1, -2)]
    basis = lattice.integer_kernel_basis([(1, 1, 1)])
    assert len(basis) == 2
    assert is_saturated_kernel([(1, 1, 1)], basis, 3)


def test_kernel_is_deterministic():
    m = [(2, 4, 6), (1, 0, -1)]
    assert lattice.integer_kernel_basis(m) == lattice.integer_kernel_basis(m)


def test_unimodular_inverse_examples():
    assert lattice.unimodular_inverse([[-1, -1], [1, 0]]) == ((0, 1), (-1, -1))
    assert lattice.unimodular_inverse([[2, 1], [1, 1]]) == ((1, -1), (-1, 2))
    with pytest.raises(NotUnimodular):
        lattice.unimodular_inverse([[2, 0], [0, 1]])


def test_smith_examples():
    assert lattice.hermite_smith([[2, 4]]).invariant_factors == (2,)
    assert lattice.smith_invariants([[1, 1], [0, 2]]) == (1, 2)
    m = [[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]]
    assert lattice.smith_invariants(m) == sympy_invariants(m)


def test_det_matches_float():
    rng = np.random.default_rng(3)
    for _ in range(50):
        n = int(rng.integers(1, 5))
        m = rng.integers(-9, 10, size=(n, n))
        assert lattice.det(m.tolist()) == round(np.linalg.det(m))


@settings(max_examples=300, deadline=None)
@given(matrices())
def test_hermite_form_properties(m):
    h, u = lattice.hermite_normal_form(m)
    assert lattice.matmul(u, m) == h
    assert abs(lattice.det(u)) == 1
    pivots = []
    for r, row in enumerate(h):
        nz = [j for j, x in enumerate(row) if x]
        if not nz:
            assert all(not any(rr) for rr in h[r:])
            break
        c = nz[0]
        assert row[c] > 0
        for above in h[:r]:
            assert 0 <= above[c] < row[c]
        pivots.append(c)
    assert pivots == sorted(pivots)


@settings(max_examples=300, deadline=None)
@given(matrices())
def test_smith_matches_sympy(m):
    ours = lattice.smith_invariants(m)
    assert ours == sympy_invariants(m)
    assert all(b % a == 0 for a, b in zip(ours, ours[1:]))
    assert len(ours) == lattice.rational_rank(m)


@settings(max_examples=300, deadline=None)
@given(matrices())
def test_kernel_basis_is_the_kernel_lattice(m):
    n = len(m[0])
    basis = lattice.integer_kernel_basis(m)
    assert is_saturated_kernel(m, basis, n)
    for q in basis:
        assert lattice.is_primitive(q)
        assert lattice.canonical_sign(q) == q


def test_kernel_contains_every_small_solution():
    m = [(2, -3, 1)]
    basis = lattice.integer_kernel_basis(m)
    b = Matrix(basis).T
    for v in product(range(-4, 5), repeat=3):
        if any(v) and lattice.dot(m[0], v) == 0:
            coeffs = b.solve_least_squares(Matrix(v))
            assert all(Fraction(str(c)).denominator == 1 for c in coeffs)


def random_sl(rng, n, steps=12):
    m = [list(r) for r in lattice.identity(n)]
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        k = int(rng.integers(-3, 4))
        m[i] = [a + k * b for a, b in zip(m[i], m[j])]
        if rng.random() < 0.3:
            m[i], m[j] = m[j], [-x for x in m[i]]
    return lattice.as_int_matrix(m)


def test_unimodular_inverse_random():
    rng = np.random.default_rng(11)
    for _ in range(300):
        n = int(rng.integers(2, 5))
        m = random_sl(rng, n)
        inv = lattice.unimodular_inverse(m)
        assert lattice.matmul(m, inv) == lattice.identity(n)
        assert lattice.matmul(inv, m) == lattice.identity(n)
