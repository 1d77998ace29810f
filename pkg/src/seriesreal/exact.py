"""Exact linear algebra over the rationals.

Rank uses fraction-free (Bareiss) elimination on integer-scaled rows; the
pivot in each column is the first nonzero row in the given row order.
"""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(x) for x in row]
        scale = lcm(1, *(x.denominator for x in row))
        out.append([int(x * scale) for x in row])
    return out


def echelon_pivots(rows: Sequence[Sequence]) -> list[tuple[int, int]]:
    """(original row index, column) of each pivot of the row-echelon form.

    Rows are swapped during elimination; the returned row indices refer to
    the caller's ordering.
    """
    m = _integer_rows(rows)
    order = list(range(len(m)))
    if not m:
        return []
    ncols = len(m[0])
    pivots = []
    r = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        if piv != r:
            m[r], m[piv] = m[piv], m[r]
            order[r], order[piv] = order[piv], order[r]
        top = m[r]
        a = top[c]
        for i in range(r + 1, len(m)):
            row = m[i]
            b = row[c]
            if b == 0:
                if prev != 1 or a != 1:
                    for j in range(c + 1, ncols):
                        row[j] = (a * row[j]) // prev
                continue
            for j in range(c + 1, ncols):
                row[j] = (a * row[j] - b * top[j]) // prev
            row[c] = 0
        pivots.append((order[r], c))
        prev = a
        r += 1
        if r == len(m):
            break
    return pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(echelon_pivots(rows))


def independent_rows(rows: Sequence[Sequence]) -> list[int]:
    """Indices of the earliest rows forming a basis of the row space.

    Greedy in row order: a row is kept when it is independent of the rows
    kept before it.
    """
    kept: list[int] = []
    basis: list[list[Fraction]] = []  # reduced rows with their pivot columns
    pivots: list[int] = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for b, pc in zip(basis, pivots):
            if v[pc] != 0:
                f = v[pc]
                v = [x - f * y for x, y in zip(v, b)]
        pc = next((j for j, x in enumerate(v) if x != 0), None)
        if pc is None:
            continue
        inv = 1 / v[pc]
        v = [x * inv for x in v]
        # keep basis fully reduced on pivot columns
        for k, b in enumerate(basis):
            if b[pc] != 0:
                f = b[pc]
                basis[k] = [x - f * y for x, y in zip(b, v)]
        basis.append(v)
        pivots.append(pc)
        kept.append(idx)
    return kept


def transpose(rows: Sequence[Sequence]) -> list[list]:
    return [list(col) for col in zip(*rows)]


def inverse(matrix: Sequence[Sequence]) -> list[list[Fraction]]:
    """Gauss-Jordan inverse; raises ZeroDivisionError on a singular matrix."""
    n = len(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        inv = 1 / a[c][c]
        a[c] = [x * inv for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def vecmat(v: Sequence, m: Sequence[Sequence]) -> list:
    """Row vector times matrix."""
    if not m:
        return []
    ncols = len(m[0])
    return [sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0)) for j in range(ncols)]


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))
