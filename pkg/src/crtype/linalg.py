"""Small exact linear algebra over Gaussian rationals and polynomial rings."""
from __future__ import annotations

from typing import Sequence

from .algebra import ONE, ZERO, ExactScalar, HermitianPolynomial, as_scalar

Matrix = list[list[ExactScalar]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[as_scalar(x) for x in row] for row in rows]


def rref(rows: Sequence[Sequence]) -> tuple[Matrix, list[int]]:
    """Reduced row echelon form and the pivot columns."""
    m = to_matrix(rows)
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = ONE / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m, pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1])


def nullspace(rows: Sequence[Sequence], ncols: int | None = None) -> Matrix:
    """Basis of {x : A x = 0}, one vector per free column."""
    if not rows:
        if ncols is None:
            raise ValueError("ncols is required for an empty matrix")
        return [[ONE if i == j else ZERO for i in range(ncols)] for j in range(ncols)]
    m, pivots = rref(rows)
    ncols = len(m[0])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -m[i][f]
        basis.append(v)
    return basis


def solve(rows: Sequence[Sequence], rhs: Sequence) -> list[ExactScalar] | None:
    """One solution of A x = b, or None when inconsistent."""
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    ncols = len(aug[0]) - 1
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for i, p in enumerate(pivots):
        x[p] = m[i][ncols]
    return x


def det(rows: Sequence[Sequence]) -> ExactScalar:
    m = to_matrix(rows)
    n = len(m)
    sign = ONE
    total = ONE
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return ZERO
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        total = total * m[c][c]
        inv = ONE / m[c][c]
        for i in range(c + 1, n):
            if m[i][c]:
                f = m[i][c] * inv
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return sign * total


def poly_det(rows: Sequence[Sequence[HermitianPolynomial]]) -> HermitianPolynomial:
    """Determinant of a polynomial matrix by cofactor expansion along row 0."""
    size = len(rows)
    if size == 0:
        raise ValueError("empty matrix")
    n = rows[0][0].n

    def rec(row: int, cols: tuple[int, ...]) -> HermitianPolynomial:
        if row == size - 1:
            return rows[row][cols[0]]
        total = HermitianPolynomial.zero(n)
        for k, c in enumerate(cols):
            entry = rows[row][c]
            if not entry:
                continue
            minor = rec(row + 1, cols[:k] + cols[k + 1:])
            term = entry * minor
            total = total + term if k % 2 == 0 else total - term
        return total

    return rec(0, tuple(range(size)))
