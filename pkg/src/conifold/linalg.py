"""Exact linear algebra over Q for small dense matrices.

Matrices are lists of rows.  Ranks use fraction-free (Bareiss) elimination
on integers; anything with rational entries is scaled to integers first.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

Matrix = list[list]


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        fr = [Fraction(x) for x in row]
        den = math.lcm(*(x.denominator for x in fr)) if fr else 1
        out.append([int(x * den) for x in fr])
    return out


def rank(rows: Sequence[Sequence], ncols: int | None = None) -> int:
    """Rank over Q by Bareiss elimination."""
    a = _integer_rows(rows)
    if not a:
        return 0
    n = len(a[0]) if ncols is None else ncols
    if n == 0:
        return 0
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        for i in range(r + 1, len(a)):
            ai = a[i]
            f = ai[c]
            ai[:] = [(p * ai[j] - f * a[r][j]) // prev for j in range(n)]
        prev = p
        r += 1
        if r == len(a):
            break
    return r


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form with exact Fractions; returns (R, pivots)."""
    a = [[Fraction(x) for x in row] for row in rows]
    if not a:
        return [], []
    n = len(a[0])
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        a[r] = [x / p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    return a[:r], pivots


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of ``{x : A x = 0}`` as a list of vectors of length ``ncols``."""
    if ncols == 0:
        return []
    if not rows:
        return [[Fraction(int(i == j)) for i in range(ncols)] for j in range(ncols)]
    r, pivots = rref(rows)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for row, pc in zip(r, pivots):
            v[pc] = -row[f]
        basis.append(v)
    return basis


def transpose(rows: Sequence[Sequence], ncols: int) -> Matrix:
    return [[row[j] for row in rows] for j in range(ncols)]


def matmul(a: Sequence[Sequence], b: Sequence[Sequence], inner: int, ncols: int) -> Matrix:
    return [[sum(row[k] * b[k][j] for k in range(inner)) for j in range(ncols)] for row in a]


def det(rows: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in row] for row in rows]
    n = len(a)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            out = -out
        out *= a[c][c]
        for i in range(c + 1, n):
            f = a[i][c] / a[c][c]
            if f:
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return out


def inverse(rows: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(rows)
    aug = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(rows)]
    r, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [row[n:] for row in r]
