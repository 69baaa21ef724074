"""Exact integer and rational matrix routines.

Matrices are plain lists of rows (lists or tuples of ``int``/``Fraction``).
Nothing here ever touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

Matrix = Sequence[Sequence[int]]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``.

    When ``a`` divides ``b`` the answer is ``(|a|, sign(a), 0)``, so the first
    argument is preferred; callers rely on this to get predictable cofactors.
    """
    if a != 0 and b % a == 0:
        return abs(a), (1 if a > 0 else -1), 0
    if b != 0 and a % b == 0:
        return abs(b), 0, (1 if b > 0 else -1)
    s0, s1, t0, t1 = 1, 0, 0, 1
    r0, r1 = a, b
    while r1:
        k = r0 // r1
        r0, r1 = r1, r0 - k * r1
        s0, s1 = s1, s0 - k * s1
        t0, t1 = t1, t0 - k * t1
    if r0 < 0:
        r0, s0, t0 = -r0, -s0, -t0
    return r0, s0, t0


def xgcd_list(values: Sequence[int]) -> tuple[int, list[int]]:
    """gcd of ``values`` together with cofactors, folded left to right."""
    g = 0
    coeffs = [0] * len(values)
    for i, a in enumerate(values):
        g2, s, t = xgcd(g, a)
        if g2 != g or t != 0:
            coeffs = [s * c for c in coeffs]
            coeffs[i] = t
        g = g2
    return g, coeffs


def vgcd(values) -> int:
    g = 0
    for a in values:
        g = gcd(g, a)
    return g


def identity(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def transpose(m: Matrix) -> list[list]:
    return [list(col) for col in zip(*m)]


def matmul(a: Matrix, b: Matrix) -> list[list]:
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum(x * y for x, y in zip(row, v)) for row in a]


def det(m: Matrix) -> int:
    """Determinant of an integer matrix by fraction-free Bareiss elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(r) for r in m]
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


def rank_q(rows: Sequence[Sequence]) -> int:
    """Rank over the rationals."""
    a = [[Fraction(x) for x in r] for r in rows]
    if not a:
        return 0
    n = len(a[0])
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, len(a)):
            if a[i][c] != 0:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
    return r


def inverse_q(m: Matrix) -> list[list[Fraction]]:
    """Inverse over the rationals (Gauss-Jordan). Raises ZeroDivisionError if singular."""
    n = len(m)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(m)]
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        a[c], a[piv] = a[piv], a[c]
        p = a[c][c]
        a[c] = [x / p for x in a[c]]
        for i in range(n):
            if i != c and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return [row[n:] for row in a]


def _echelon(rows: list[list[int]], ncols: int) -> int:
    """In-place Hermite reduction of ``rows`` on their first ``ncols`` columns.

    Only unimodular row operations are applied to whole rows, so any columns
    past ``ncols`` record the transformation. Returns the rank.
    """
    m = len(rows)
    r = 0
    for c in range(ncols):
        if r == m:
            break
        for i in range(r + 1, m):
            b = rows[i][c]
            if b == 0:
                continue
            a = rows[r][c]
            g, s, t = xgcd(a, b)
            u, w = a // g, b // g
            ra, rb = rows[r], rows[i]
            rows[r] = [s * x + t * y for x, y in zip(ra, rb)]
            rows[i] = [u * y - w * x for x, y in zip(ra, rb)]
        p = rows[r][c]
        if p == 0:
            continue
        if p < 0:
            rows[r] = [-x for x in rows[r]]
            p = -p
        for i in range(r):
            k = rows[i][c] // p
            if k:
                rows[i] = [x - k * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


def hnf(rows: Matrix) -> list[tuple[int, ...]]:
    """Row Hermite normal form; zero rows dropped, rows ordered by pivot column."""
    a = [list(map(int, r)) for r in rows]
    if not a:
        return []
    rank = _echelon(a, len(a[0]))
    return [tuple(r) for r in a[:rank]]


def kernel(m: Matrix, ncols: int | None = None) -> list[tuple[int, ...]]:
    """Basis (in HNF) of the integer kernel ``{x in Z^n : m x = 0}``.

    The result is saturated: it spans every integer solution.
    """
    n = ncols if ncols is not None else len(m[0])
    if not m:
        return [tuple(r) for r in identity(n)]
    mt = transpose(m)
    k = len(m)
    aug = [list(map(int, mt[i])) + identity(n)[i] for i in range(n)]
    rank = _echelon(aug, k)
    basis = [row[k:] for row in aug[rank:]]
    return hnf(basis)


def snf(m: Matrix) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Smith normal form of an ``r x c`` integer matrix.

    Returns ``(d, U, V)`` with ``U m V`` equal to ``d`` on the diagonal and
    zero elsewhere, ``U`` and ``V`` unimodular, ``len(d) == min(r, c)``,
    ``d`` non-negative and each entry dividing the next.
    """
    nr = len(m)
    nc = len(m[0]) if nr else 0
    a = [list(map(int, r)) for r in m]
    u = identity(nr)
    v = identity(nc)

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, k):
        a[dst] = [x + k * y for x, y in zip(a[dst], a[src])]
        u[dst] = [x + k * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, k):
        for row in a:
            row[dst] += k * row[src]
        for row in v:
            row[dst] += k * row[src]

    for t in range(min(nr, nc)):
        while True:
            entries = [(abs(a[i][j]), i, j) for i in range(t, nr) for j in range(t, nc) if a[i][j]]
            if not entries:
                break
            _, i, j = min(entries)
            swap_rows(t, i)
            swap_cols(t, j)
            p = a[t][t]
            dirty = False
            for i in range(t + 1, nr):
                if a[i][t]:
                    add_row(i, t, -(a[i][t] // p))
                    dirty = dirty or a[i][t] != 0
            for j in range(t + 1, nc):
                if a[t][j]:
                    add_col(j, t, -(a[t][j] // p))
                    dirty = dirty or a[t][j] != 0
            if dirty:
                continue
            bad = next((i for i in range(t + 1, nr) for j in range(t + 1, nc) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return [a[i][i] for i in range(min(nr, nc))], u, v
