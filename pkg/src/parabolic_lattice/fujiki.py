"""Top-degree forms, the Fujiki relation and the BBF form recovered from them.

A "top form" here is a symmetric ``2n``-linear function on lattice vectors,
standing in for ``(eta_1, ..., eta_2n) -> integral of eta_1 ^ ... ^ eta_2n``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from typing import Callable, Sequence

from . import intmat
from .errors import BadParameter, DegenerateKahler, NoAnchorPoint, NotAFujikiForm
from .lattice import Lattice

TopForm = Callable[..., Fraction]


def perfect_matchings(items: Sequence[int]):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for k, partner in enumerate(rest):
        for m in perfect_matchings(rest[:k] + rest[k + 1:]):
            yield [(first, partner)] + m


def double_factorial_odd(n: int) -> int:
    """``(2n - 1)!!``, the number of perfect matchings on ``2n`` points."""
    return prod(range(1, 2 * n, 2))


def symmetric_power_form(gram, n: int, c=1) -> TopForm:
    """The symmetric ``2n``-linear form whose diagonal is ``c * q(x)^n``.

    Evaluated as ``c / (2n-1)!!`` times the sum over perfect matchings of the
    product of pairings.
    """
    if n < 1:
        raise BadParameter("n must be positive")
    c = Fraction(c)
    matchings = list(perfect_matchings(list(range(2 * n))))
    norm = c / double_factorial_odd(n)

    def b(x, y):
        return sum(xi * sum(g * yj for g, yj in zip(row, y)) for xi, row in zip(x, gram))

    def form(*vectors):
        if len(vectors) != 2 * n:
            raise BadParameter(f"top form takes {2 * n} vectors, got {len(vectors)}")
        cache = {}
        total = Fraction(0)
        for m in matchings:
            term = Fraction(1)
            for i, j in m:
                key = (i, j)
                if key not in cache:
                    cache[key] = b(vectors[i], vectors[j])
                term *= cache[key]
                if not term:
                    break
            total += term
        return norm * total

    return form


@dataclass(frozen=True)
class FujikiData:
    n: int
    c: Fraction
    top_form: TopForm

    def diagonal(self, x) -> Fraction:
        return self.top_form(*([x] * (2 * self.n)))


def fujiki_from_lattice(L: Lattice, n: int, c) -> FujikiData:
    return FujikiData(n, Fraction(c), symmetric_power_form(L.gram, n, c))


def _interpolate(points: Sequence[int], values: Sequence[Fraction]) -> list[Fraction]:
    """Monomial coefficients of the polynomial through ``(points, values)``."""
    m = len(points)
    rows = [[Fraction(s) ** k for k in range(m)] for s in points]
    inv = intmat.inverse_q(rows)
    return [sum(inv[k][i] * values[i] for i in range(m)) for k in range(m)]


def _eval_poly(coeffs, s) -> Fraction:
    return sum(c * Fraction(s) ** k for k, c in enumerate(coeffs))


def normalize_form(m, even: bool = True) -> tuple[tuple[int, ...], ...]:
    """Smallest positive multiple of a rational symmetric matrix that is integral
    (and even, when ``even`` is set)."""
    m = [[Fraction(x) for x in row] for row in m]
    den = lcm(*(x.denominator for row in m for x in row))
    ints = [[int(x * den) for x in row] for row in m]
    g = intmat.vgcd(x for row in ints for x in row)
    if g == 0:
        return tuple(tuple(row) for row in ints)
    ints = [[x // g for x in row] for row in ints]
    if even and any(ints[i][i] % 2 for i in range(len(ints))):
        ints = [[2 * x for x in row] for row in ints]
    return tuple(tuple(row) for row in ints)


def probe_vectors(dim: int) -> list[tuple[int, ...]]:
    """Basis vectors, pairwise sums, then the ``+-2`` multiples of basis vectors."""
    e = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    sums = [tuple(a + b for a, b in zip(e[i], e[j])) for i in range(dim) for j in range(i + 1, dim)]
    scaled = [tuple(s * x for x in v) for v in e for s in (2, -2)]
    return e + sums + scaled


@dataclass(frozen=True)
class RecoveredForm:
    gram: tuple[tuple[int, ...], ...]
    c: Fraction
    anchor: tuple[int, ...]


def fujiki_recover_q(diagonal: Callable, dim: int, n: int, even: bool = True) -> RecoveredForm:
    """Recover ``q`` and ``c`` from ``x -> c * q(x)^n`` alone.

    Along each line ``x0 + s*y`` through a non-isotropic anchor ``x0`` the
    value is a degree-``2n`` polynomial in ``s``; its ``s`` and ``s^2``
    coefficients give ``q(x0, y)`` and ``q(y)`` relative to ``q(x0)``.
    Sampling at ``s = 0, +-1, ..., +-2n`` leaves ``2n`` spare points that must
    agree with the interpolant.

    ``q`` is returned as the smallest positive integral (even, by default)
    multiple. Sign: for odd ``n`` the one making ``c > 0``; for even ``n`` the
    one making ``q(x0) > 0``.
    """
    if n < 1 or dim < 1:
        raise BadParameter("n and dim must be positive")
    probes = probe_vectors(dim)
    anchor = next((p for p in probes if Fraction(diagonal(p)) != 0), None)
    if anchor is None:
        raise NoAnchorPoint("the form vanishes on every probe vector")
    f0 = Fraction(diagonal(anchor))
    fit_pts = list(range(-n, n + 1))
    spare = [s for k in range(n + 1, 2 * n + 1) for s in (k, -k)]

    def line(y) -> tuple[Fraction, Fraction]:
        vals = {s: Fraction(diagonal(tuple(a + s * b for a, b in zip(anchor, y))))
                for s in fit_pts + spare}
        coeffs = _interpolate(fit_pts, [vals[s] for s in fit_pts])
        if any(_eval_poly(coeffs, s) != vals[s] for s in spare):
            raise NotAFujikiForm(f"values along direction {y} are not a degree-{2 * n} polynomial")
        if coeffs[0] != f0:
            raise NotAFujikiForm("inconsistent anchor value")
        u = coeffs[1] / (2 * n * f0)
        return u, (coeffs[2] / f0 - 2 * n * (n - 1) * u * u) / n

    e = probes[:dim]
    pair = [line(v) for v in e]
    rel = [[Fraction(0)] * dim for _ in range(dim)]
    for i in range(dim):
        rel[i][i] = pair[i][1]
    for i in range(dim):
        for j in range(i + 1, dim):
            s = tuple(a + b for a, b in zip(e[i], e[j]))
            _, qs = line(s)
            rel[i][j] = rel[j][i] = (qs - rel[i][i] - rel[j][j]) / 2
    # rel is the form divided by q(x0); its pairing with x0 must match the s-coefficients.
    if any(sum(rel[j][k] * anchor[k] for k in range(dim)) != pair[j][0] for j in range(dim)):
        raise NotAFujikiForm("first-order coefficients disagree with the recovered form")

    gram = normalize_form(rel, even)

    def q(x):
        return sum(x[i] * sum(gram[i][j] * x[j] for j in range(dim)) for i in range(dim))

    c = f0 / Fraction(q(anchor)) ** n
    if c < 0 and n % 2 == 1:
        gram = tuple(tuple(-x for x in row) for row in gram)
        c = -c
    if c <= 0:
        raise NotAFujikiForm(f"Fujiki constant would be {c}, not positive")
    for p in probes:
        if Fraction(diagonal(p)) != c * Fraction(q(p)) ** n:
            raise NotAFujikiForm(f"recovered form does not reproduce the value at {p}")
    return RecoveredForm(gram, c, anchor)


def kahler_coefficient(n: int) -> Fraction:
    """Weight of the correction term: ``(2n-2)/(2n-1)``.

    This is the value for which the output is proportional to ``q`` whenever
    the top form satisfies the Fujiki relation; see ``bbf_via_kahler``.
    """
    return Fraction(2 * n - 2, 2 * n - 1)


@dataclass(frozen=True)
class KahlerForm:
    gram: tuple[tuple[Fraction, ...], ...]
    scale: Fraction | None  # mu with gram == mu * reference, when proportional

    @property
    def proportional(self) -> bool:
        return self.scale is not None


def bbf_via_kahler(top_form: TopForm, omega, n: int, dim: int | None = None,
                   reference=None, coefficient=None) -> KahlerForm:
    """Evaluate ``T(w^{2n-2}, x, y) - k * T(w^{2n-1}, x) T(w^{2n-1}, y) / T(w^{2n})``
    on all pairs of basis vectors.

    ``k`` defaults to :func:`kahler_coefficient`. Expanding the Fujiki relation
    ``T(x^{2n}) = c q(x)^n`` gives
    ``T(w^{2n-2}, x, y) = c q(w)^{n-2} (q(w) b(x, y) + 2(n-1) b(w, x) b(w, y)) / (2n-1)``
    and ``T(w^{2n-1}, x) = c q(w)^{n-1} b(w, x)``, so only that ``k`` cancels
    the ``b(w, x) b(w, y)`` term. Pass ``coefficient`` to override.

    When ``reference`` (a Gram matrix) is given, ``scale`` is the exact ratio
    if the result is proportional to it, else ``None``.
    """
    omega = tuple(omega)
    dim = dim or len(omega)
    k = kahler_coefficient(n) if coefficient is None else Fraction(coefficient)
    w = [omega] * (2 * n)
    total = Fraction(top_form(*w))
    if total == 0:
        raise DegenerateKahler("T(w, ..., w) vanishes")
    basis = [tuple(int(i == j) for j in range(dim)) for i in range(dim)]
    lin = [Fraction(top_form(*w[:-1], e)) for e in basis]
    gram = []
    for i, ei in enumerate(basis):
        row = []
        for j, ej in enumerate(basis):
            quad = Fraction(top_form(*w[:-2], ei, ej))
            row.append(quad - k * lin[i] * lin[j] / total)
        gram.append(tuple(row))
    gram = tuple(gram)
    scale = None
    if reference is not None:
        ratios = {gram[i][j] / reference[i][j]
                  for i in range(dim) for j in range(dim) if reference[i][j] != 0}
        zeros_ok = all(gram[i][j] == 0 for i in range(dim) for j in range(dim) if reference[i][j] == 0)
        if len(ratios) == 1 and zeros_ok:
            scale = ratios.pop()
    return KahlerForm(gram, scale)
