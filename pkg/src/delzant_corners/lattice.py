"""Exact integer linear algebra.

Matrices are tuples of row tuples holding Python ints, so nothing overflows.
All functions are pure.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import NotUnimodular, ZeroVector

IntVec = tuple[int, ...]
IntMatrix = tuple[IntVec, ...]


def as_int_vector(v: Iterable) -> IntVec:
    out = []
    for x in v:
        xi = int(x)
        if xi != x:
            raise ValueError(f"non-integer entry {x!r}")
        out.append(xi)
    return tuple(out)


def as_int_matrix(rows: Iterable[Iterable]) -> IntMatrix:
    return tuple(as_int_vector(r) for r in rows)


def identity(n: int) -> IntMatrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def transpose(m: Sequence[Sequence[int]]) -> IntMatrix:
    if not m:
        return ()
    return tuple(zip(*m))


def matmul(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]]) -> IntMatrix:
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a: Sequence[Sequence[int]], v: Sequence[int]) -> IntVec:
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def dot(u: Sequence, v: Sequence):
    return sum(x * y for x, y in zip(u, v))


def vector_gcd(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, x)
    return g


def canonical_sign(v: Sequence[int]) -> IntVec:
    """Flip ``v`` so its first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def primitive_part(v: Sequence[int]) -> IntVec:
    """Divide by the gcd of the entries and fix the sign.

    >>> primitive_part((-3, 6, -9))
    (1, -2, 3)
    """
    v = as_int_vector(v)
    g = vector_gcd(v)
    if g == 0:
        raise ZeroVector("ZeroVector: cannot normalize the zero vector")
    return canonical_sign(tuple(x // g for x in v))


def is_primitive(v: Sequence[int]) -> bool:
    return vector_gcd(v) == 1


def det(m: Sequence[Sequence[int]]) -> int:
    """Determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
    if any(len(r) != n for r in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def hermite_normal_form(m: Sequence[Sequence[int]]) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(H, U)`` with ``U`` unimodular and ``U @ m == H``. Nonzero rows of
    ``H`` come first, each pivot is positive and strictly exceeds the entries
    above it in its column, which are nonnegative.
    """
    a = [list(as_int_vector(r)) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [list(r) for r in identity(rows)]

    def sub(i, k, q):
        # row_i -= q * row_k
        if q:
            a[i] = [x - q * y for x, y in zip(a[i], a[k])]
            u[i] = [x - q * y for x, y in zip(u[i], u[k])]

    r = 0
    for c in range(cols):
        if r == rows:
            break
        while True:
            nz = [i for i in range(r, rows) if a[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(a[i][c]))
            if p != r:
                a[r], a[p] = a[p], a[r]
                u[r], u[p] = u[p], u[r]
            done = True
            for i in range(r + 1, rows):
                if a[i][c]:
                    sub(i, r, a[i][c] // a[r][c])
                    if a[i][c]:
                        done = False
            if done:
                break
        if a[r][c] == 0:
            continue
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            sub(i, r, a[i][c] // a[r][c])
        r += 1
    return tuple(map(tuple, a)), tuple(map(tuple, u))


def smith_invariants(m: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero Smith invariant factors d_1 | d_2 | ... of an integer matrix."""
    a = [list(as_int_vector(r)) for r in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    diag = []
    t = 0
    while t < min(rows, cols):
        entries = [(abs(a[i][j]), i, j) for i in range(t, rows)
                   for j in range(t, cols) if a[i][j]]
        if not entries:
            break
        _, pi, pj = min(entries)
        a[t], a[pi] = a[pi], a[t]
        for row in a:
            row[t], row[pj] = row[pj], row[t]
        while True:
            changed = False
            for i in range(t + 1, rows):
                q = a[i][t] // a[t][t]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                if a[i][t]:
                    a[t], a[i] = a[i], a[t]
                    changed = True
            for j in range(t + 1, cols):
                q = a[t][j] // a[t][t]
                if q:
                    for row in a:
                        row[j] -= q * row[t]
                if a[t][j]:
                    for row in a:
                        row[t], row[j] = row[j], row[t]
                    changed = True
            if changed:
                continue
            piv = a[t][t]
            bad = next((i for i in range(t + 1, rows)
                        if any(a[i][j] % piv for j in range(t + 1, cols))), None)
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
        diag.append(abs(a[t][t]))
        t += 1
    return tuple(diag)


@dataclass(frozen=True)
class HermiteSmith:
    hnf: IntMatrix
    transform: IntMatrix  # unimodular, transform @ input == hnf
    invariant_factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)


def hermite_smith(m: Sequence[Sequence[int]]) -> HermiteSmith:
    h, u = hermite_normal_form(m)
    return HermiteSmith(h, u, smith_invariants(m))


def rank(m: Sequence[Sequence[int]]) -> int:
    h, _ = hermite_normal_form(m)
    return sum(1 for row in h if any(row))


def rational_rank(m: Sequence[Sequence]) -> int:
    """Rank over Q of a matrix with rational (or integer) entries."""
    a = [[Fraction(x) for x in row] for row in m]
    if not a:
        return 0
    r = 0
    cols = len(a[0])
    for c in range(cols):
        p = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == len(a):
            break
    return r


def integer_kernel_basis(m: Sequence[Sequence[int]], n: int | None = None) -> list[IntVec]:
    """Basis of the lattice ``{q in Z^n : m q = 0}``.

    The basis is returned in Hermite normal form, which makes it canonical:
    each vector is primitive with a positive leading entry.
    """
    m = as_int_matrix(m)
    if n is None:
        if not m:
            raise ValueError("cannot infer the ambient dimension of an empty matrix")
        n = len(m[0])
    if not m:
        return [tuple(r) for r in identity(n)]
    h, u = hermite_normal_form(transpose(m))
    kernel = [u[i] for i in range(n) if not any(h[i])]
    if not kernel:
        return []
    kh, _ = hermite_normal_form(kernel)
    return [row for row in kh if any(row)]


def unimodular_inverse(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Exact inverse of an integer matrix with determinant +1 or -1."""
    m = as_int_matrix(m)
    d = det(m)
    if abs(d) != 1:
        raise NotUnimodular(d)
    h, u = hermite_normal_form(m)
    # the HNF of a unimodular matrix is the identity, so u is the inverse
    assert h == identity(len(m))
    return u
