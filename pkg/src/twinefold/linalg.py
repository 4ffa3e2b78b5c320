"""Exact linear algebra over the rationals and the integers.

Vectors are tuples of ``fractions.Fraction``; matrices are tuples of row
tuples.  Everything here is pure and allocation-cheap at the ranks we care
about (<= 6), so no numpy: exactness matters more than speed, and lattice
membership tests must never go through floats.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[Fraction, ...]
Matrix = tuple[tuple[Fraction, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(*entries) -> Vec:
    return tuple(Fraction(e) for e in entries)


def as_vec(entries: Iterable) -> Vec:
    return tuple(Fraction(e) for e in entries)


def zero_vec(n: int) -> Vec:
    return (ZERO,) * n


def vadd(u: Vec, v: Vec) -> Vec:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vsub(u: Vec, v: Vec) -> Vec:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vneg(u: Vec) -> Vec:
    return tuple(-a for a in u)


def vscale(c, u: Vec) -> Vec:
    c = Fraction(c)
    return tuple(c * a for a in u)


def vdot(u: Vec, v: Vec) -> Fraction:
    return sum((a * b for a, b in zip(u, v, strict=True)), ZERO)


def is_zero_vec(u: Vec) -> bool:
    return all(a == 0 for a in u)


def mat(rows: Sequence[Sequence]) -> Matrix:
    return tuple(tuple(Fraction(e) for e in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(
        tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n)
    )


def mat_vec(m: Matrix, v: Vec) -> Vec:
    return tuple(vdot(row, v) for row in m)


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m)) if m else ()


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    return tuple(tuple(vdot(row, col) for col in bt) for row in a)


def mat_scale(c, m: Matrix) -> Matrix:
    c = Fraction(c)
    return tuple(tuple(c * e for e in row) for row in m)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(
        tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b, strict=True)
    )


def bilinear(g: Matrix, u: Vec, v: Vec) -> Fraction:
    return vdot(u, mat_vec(g, v))


def mat_det(m: Matrix) -> Fraction:
    n = len(m)
    a = [list(row) for row in m]
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        det *= a[col][col]
        inv = ONE / a[col][col]
        for r in range(col + 1, n):
            if a[r][col]:
                factor = a[r][col] * inv
                for c in range(col, n):
                    a[r][c] -= factor * a[col][c]
    return det


def mat_inv(m: Matrix) -> Matrix:
    n = len(m)
    a = [list(row) + list(identity(n)[i]) for i, row in enumerate(m)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if a[r][col] != 0), None)
        if pivot is None:
            raise ValueError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv = ONE / a[col][col]
        a[col] = [e * inv for e in a[col]]
        for r in range(n):
            if r != col and a[r][col]:
                factor = a[r][col]
                a[r] = [e - factor * p for e, p in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a)


def solve(a: Matrix, b: Vec) -> Vec | None:
    """Solve ``a @ x = b`` exactly; ``None`` if inconsistent.

    ``a`` is m x n with full column rank (the only case we need: expressing a
    vector in a linearly independent basis).
    """
    m, n = len(a), len(a[0]) if a else 0
    aug = [list(row) + [bi] for row, bi in zip(a, b, strict=True)]
    pivots = []
    row = 0
    for col in range(n):
        pivot = next((r for r in range(row, m) if aug[r][col] != 0), None)
        if pivot is None:
            continue
        aug[row], aug[pivot] = aug[pivot], aug[row]
        inv = ONE / aug[row][col]
        aug[row] = [e * inv for e in aug[row]]
        for r in range(m):
            if r != row and aug[r][col]:
                factor = aug[r][col]
                aug[r] = [e - factor * p for e, p in zip(aug[r], aug[row])]
        pivots.append(col)
        row += 1
        if row == m:
            break
    # inconsistency: zero row with nonzero rhs
    for r in range(row, m):
        if aug[r][n] != 0:
            return None
    if len(pivots) < n:
        return None
    x = [ZERO] * n
    for r, col in enumerate(pivots):
        x[col] = aug[r][n]
    return tuple(x)


def coords_in_basis(basis: Sequence[Vec], v: Vec) -> Vec | None:
    """Coordinates of ``v`` in the given (independent) basis, or None."""
    if not basis:
        return () if is_zero_vec(v) else None
    a = transpose(tuple(basis))
    return solve(a, v)


def rank_of(rows: Sequence[Vec]) -> int:
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if m else 0
    rank = 0
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        inv = ONE / m[rank][col]
        m[rank] = [e * inv for e in m[rank]]
        for r in range(nrows):
            if r != rank and m[r][col]:
                f = m[r][col]
                m[r] = [e - f * p for e, p in zip(m[r], m[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# integer matrices: Smith normal form with transforms
# ---------------------------------------------------------------------------


def _int_rows(a: Sequence[Sequence[int]]) -> list[list[int]]:
    return [[int(e) for e in row] for row in a]


def smith_normal_form(
    a: Sequence[Sequence[int]],
) -> tuple[list[list[int]], list[list[int]], list[list[int]]]:
    """Return (U, S, V) with S = U @ a @ V, U and V unimodular, S in SNF."""
    s = _int_rows(a)
    m = len(s)
    n = len(s[0]) if s else 0
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, c):
        s[dst] = [x + c * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + c * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, c):
        for row in s:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    t = 0
    while t < min(m, n):
        # find a nonzero pivot in the remaining block
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] != 0:
                    pivot = (i, j)
                    break
            if pivot:
                break
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            # clear column t
            done = True
            for i in range(t + 1, m):
                if s[i][t] % s[t][t] != 0:
                    q = s[i][t] // s[t][t]
                    add_row(i, t, -q)
                    swap_rows(t, i)
                    done = False
                elif s[i][t] != 0:
                    add_row(i, t, -(s[i][t] // s[t][t]))
            for j in range(t + 1, n):
                if s[t][j] % s[t][t] != 0:
                    q = s[t][j] // s[t][t]
                    add_col(j, t, -q)
                    swap_cols(t, j)
                    done = False
                elif s[t][j] != 0:
                    add_col(j, t, -(s[t][j] // s[t][t]))
            if done:
                break
        # divisibility fix-up: pivot must divide the rest of the block
        entry = None
        for i in range(t + 1, m):
            for j in range(t + 1, n):
                if s[i][j] % s[t][t] != 0:
                    entry = i
                    break
            if entry is not None:
                break
        if entry is not None:
            add_row(t, entry, 1)
            continue
        if s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return u, s, v


def invariant_factors(a: Sequence[Sequence[int]]) -> tuple[int, ...]:
    """Nonzero diagonal of the Smith normal form of ``a``."""
    _, s, _ = smith_normal_form(a)
    return tuple(s[i][i] for i in range(min(len(s), len(s[0]) if s else 0)) if s[i][i] != 0)


def integer_kernel(a: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Basis of the lattice {x in Z^n : a @ x = 0}."""
    m = len(a)
    n = len(a[0]) if a else 0
    if n == 0:
        return []
    if m == 0:
        return [tuple(int(i == j) for i in range(n)) for j in range(n)]
    _, s, v = smith_normal_form(a)
    r = sum(1 for i in range(min(m, n)) if s[i][i] != 0)
    return [tuple(v[i][j] for i in range(n)) for j in range(r, n)]


def common_denominator(vectors: Iterable[Vec]) -> int:
    d = 1
    for v in vectors:
        for e in v:
            d = d * e.denominator // gcd(d, e.denominator)
    return d
