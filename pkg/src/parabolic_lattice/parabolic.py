"""Primitive isotropic vectors, their divisor, isotropic planes, and orbit censuses.

Vectors are identified up to sign throughout: the representative kept is the
one whose first nonzero coordinate is positive.
"""

from __future__ import annotations

import itertools
import os
from collections import Counter, deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from . import intmat
from .errors import (
    BudgetExceeded,
    DegenerateSublattice,
    InternalConsistencyError,
    InvalidGenerator,
    InvariantMergeViolation,
    LemmaViolation,
    NotIsotropic,
    NotPrimitive,
)
from .lattice import (
    Lattice,
    Sublattice,
    embedding_index,
    orthogonal_complement,
    saturate,
)

Vector = tuple[int, ...]
MatrixT = tuple[tuple[int, ...], ...]


def sign_normalize(v: Sequence[int]) -> Vector:
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def thread_cap() -> int:
    """Worker count from ``PARABOLIC_LATTICE_THREADS`` (default 1)."""
    raw = os.environ.get("PARABOLIC_LATTICE_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


# --- enumeration -----------------------------------------------------------------

def _solve_last(gram, prefix: Sequence[int], height: int) -> list[int]:
    """Integers ``t`` in [-height, height] with ``q(prefix + (t,)) == 0``."""
    n = len(gram)
    k = n - 1
    a = gram[k][k]
    lin = sum(gram[k][i] * prefix[i] for i in range(k))
    const = sum(prefix[i] * sum(gram[i][j] * prefix[j] for j in range(k)) for i in range(k))
    # a t^2 + 2 lin t + const = 0
    if a == 0:
        if lin == 0:
            return list(range(-height, height + 1)) if const == 0 else []
        if const % (2 * lin):
            return []
        t = -const // (2 * lin)
        return [t] if abs(t) <= height else []
    disc = lin * lin - a * const
    if disc < 0:
        return []
    r = isqrt(disc)
    if r * r != disc:
        return []
    out = set()
    for num in (-lin + r, -lin - r):
        if num % a == 0 and abs(num // a) <= height:
            out.add(num // a)
    return sorted(out)


def _enumerate_chunk(args) -> list[Vector]:
    gram, height, first = args
    n = len(gram)
    found = []
    rng = range(-height, height + 1)
    heads = [(first,)] if n > 1 else [()]
    for head in heads:
        for mid in itertools.product(rng, repeat=max(n - 1 - len(head), 0)):
            prefix = head + mid
            for t in _solve_last(gram, prefix, height):
                v = prefix + (t,)
                if not any(v):
                    continue
                if v != sign_normalize(v):
                    continue
                if intmat.vgcd(v) == 1:
                    found.append(v)
    return found


def enumerate_primitive_isotropic(L: Lattice, height: int, workers: int | None = None) -> list[Vector]:
    """Primitive ``v`` with ``q(v) = 0`` and ``max |v_i| <= height``, one per sign
    class, lexicographically sorted.

    All coordinates but the last are looped over; the last is solved from the
    quadratic (or linear) equation it satisfies.
    """
    if height < 1:
        return []
    gram = L.gram
    if L.rank == 1:
        return []
    # sign-normalized vectors have a nonnegative first coordinate
    tasks = [(gram, height, f) for f in range(0, height + 1)]
    workers = workers or thread_cap()
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_enumerate_chunk, tasks))
    else:
        chunks = [_enumerate_chunk(t) for t in tasks]
    return sorted(v for chunk in chunks for v in chunk)


# --- divisor and partner ---------------------------------------------------------

def _require_primitive_isotropic(L: Lattice, v) -> Vector:
    v = tuple(int(x) for x in v)
    L._check(v)
    if not any(v) or intmat.vgcd(v) != 1:
        raise NotPrimitive(f"{v} is not primitive")
    if L.q(v) != 0:
        raise NotIsotropic(f"q({v}) = {L.q(v)} != 0")
    return v


def divisor(L: Lattice, v) -> int:
    """Positive generator of the ideal ``{b(v, f) : f in L}``."""
    v = _require_primitive_isotropic(L, v)
    return intmat.vgcd(L.pairing_vector(v))


def minimal_partner(L: Lattice, v) -> Vector:
    """``f`` with ``b(v, f) = divisor(v)`` and ``q(f)`` reduced into [0, 2*divisor).

    ``f`` comes from the left-to-right extended gcd of ``gram @ v`` and is
    then shifted by a multiple of ``v``.
    """
    v = _require_primitive_isotropic(L, v)
    alpha, f = intmat.xgcd_list(L.pairing_vector(v))
    qf = L.q(f)
    k = -(qf // (2 * alpha))
    f = tuple(a + k * b for a, b in zip(f, v))
    if L.b(v, f) != alpha or not 0 <= L.q(f) < 2 * alpha:
        raise InternalConsistencyError("partner normalization failed")
    return f


@dataclass(frozen=True)
class ParabolicVector:
    lattice: Lattice = field(repr=False)
    v: Vector
    alpha: int
    disc_class: tuple[Fraction, ...]


@dataclass(frozen=True)
class IsotropicPlane:
    v: ParabolicVector
    f: Vector
    K: Sublattice
    beta: int

    @property
    def normal_form(self) -> MatrixT:
        a = self.v.alpha
        return ((0, a), (a, self.beta))


def parabolic_vector(L: Lattice, v) -> ParabolicVector:
    alpha = divisor(L, v)
    return ParabolicVector(L, tuple(v), alpha, _disc_class(v, alpha))


def isotropic_plane(L: Lattice, v) -> IsotropicPlane:
    pv = parabolic_vector(L, v)
    f = minimal_partner(L, v)
    K = saturate(L, [pv.v, f])
    alpha = pv.alpha
    beta = L.q(f)
    if K.discriminant != -alpha * alpha:
        raise InternalConsistencyError(f"det K = {K.discriminant}, expected {-alpha * alpha}")
    d = abs(L.discriminant)
    if not -d * d <= -alpha * alpha < 0:
        raise LemmaViolation(f"alpha = {alpha} exceeds |discr| = {d}")
    return IsotropicPlane(pv, f, K, beta)


def complement_pair(L: Lattice, K: Sublattice) -> tuple[Sublattice, int]:
    """``K^perp`` and the index of ``K + K^perp`` in ``L``."""
    if K.discriminant == 0:
        raise DegenerateSublattice("the form restricted to K is degenerate")
    Kperp = orthogonal_complement(L, K)
    both = Sublattice(L, K.basis + Kperp.basis)
    index = embedding_index(L, both)
    perp_det = Kperp.discriminant
    if index * index * L.discriminant != K.discriminant * perp_det:
        raise InternalConsistencyError("index^2 != det(K) det(K^perp) / det(L)")
    return Kperp, index


# --- invariants ------------------------------------------------------------------

def _disc_class(v, alpha: int) -> tuple[Fraction, ...]:
    """Class of ``v/alpha`` in ``L*/L`` up to sign, as a vector in [0, 1)^rank."""
    x = tuple(Fraction(t, alpha) % 1 for t in v)
    y = tuple((-t) % 1 for t in x)
    return min(x, y)


def orbit_invariant(L: Lattice, v) -> tuple[int, tuple[Fraction, ...]]:
    alpha = divisor(L, v)
    return alpha, _disc_class(v, alpha)


@dataclass(frozen=True)
class LemmaReport:
    discriminant: int
    height: int
    alphas: Counter
    checked: int

    @property
    def passed(self) -> bool:
        return True

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "alphas": sorted(self.alphas),
            "discriminant": self.discriminant,
            "height": self.height,
            "checked": self.checked,
        }


def lemma_alpha_divides(L: Lattice, height: int, vectors: Iterable | None = None) -> LemmaReport:
    """Check ``alpha | discr`` and ``0 < alpha <= |discr|`` on every enumerated vector.

    Any failure raises :class:`LemmaViolation`.
    """
    d = L.discriminant
    if vectors is None:
        vectors = enumerate_primitive_isotropic(L, height)
    alphas = Counter()
    n = 0
    for v in vectors:
        a = divisor(L, v)
        if a <= 0 or d % a or a > abs(d):
            raise LemmaViolation(f"alpha = {a} for v = {v} does not divide discr = {d}")
        alphas[a] += 1
        n += 1
    return LemmaReport(d, height, alphas, n)


# --- isometries ------------------------------------------------------------------

def is_isometry(L: Lattice, M: Sequence[Sequence[int]]) -> bool:
    """``M^T G M == G`` for ``M`` acting on column vectors."""
    n = L.rank
    if len(M) != n or any(len(r) != n for r in M):
        return False
    return intmat.matmul(intmat.transpose(M), intmat.matmul(L.gram, M)) == [list(r) for r in L.gram]


def _as_matrix(M) -> MatrixT:
    return tuple(tuple(int(x) for x in row) for row in M)


@dataclass(frozen=True)
class IsometrySearch:
    matrices: tuple[MatrixT, ...]
    closed: bool
    entry_bound: int


def orthogonal_group_bruteforce(L: Lattice, entry_bound: int, budget: int = 10**6) -> IsometrySearch:
    """All integer isometries with entries in [-entry_bound, entry_bound].

    Columns are chosen one at a time among vectors of the right norm, pruning
    on pairings with the columns already fixed. ``closed`` records whether the
    set found is closed under multiplication.
    """
    n = L.rank
    box = (2 * entry_bound + 1) ** n
    if box > budget:
        raise BudgetExceeded(f"{box} candidate columns exceed budget {budget}")
    rng = range(-entry_bound, entry_bound + 1)
    vecs = list(itertools.product(rng, repeat=n))
    by_norm = {}
    for w in vecs:
        by_norm.setdefault(L.q(w), []).append(w)
    cols_for = [by_norm.get(L.gram[j][j], []) for j in range(n)]
    found = []

    def extend(cols):
        j = len(cols)
        if j == n:
            found.append(tuple(tuple(cols[c][r] for c in range(n)) for r in range(n)))
            if len(found) > budget:
                raise BudgetExceeded("too many isometries")
            return
        for w in cols_for[j]:
            if all(L.b(cols[i], w) == L.gram[i][j] for i in range(j)):
                cols.append(w)
                extend(cols)
                cols.pop()

    extend([])
    found.sort()
    fset = set(found)
    closed = all(_as_matrix(intmat.matmul(a, b)) in fset for a in found for b in found)
    return IsometrySearch(tuple(found), closed, entry_bound)


def reflection(L: Lattice, delta) -> MatrixT | None:
    """Matrix of ``x -> x - 2 b(x, d)/q(d) d`` if it is integral, else ``None``."""
    qd = L.q(delta)
    if qd == 0:
        return None
    gd = L.pairing_vector(delta)
    n = L.rank
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            num = 2 * delta[i] * gd[j]
            if num % qd:
                return None
            row.append(int(i == j) - num // qd)
        rows.append(tuple(row))
    return tuple(rows)


def reflection_generators(L: Lattice, radius: int = 1, norms=(2, -2, 1, -1)) -> list[MatrixT]:
    """Integral reflections in vectors of the given norms with entries in [-radius, radius]."""
    out = []
    seen = set()
    for d in itertools.product(range(-radius, radius + 1), repeat=L.rank):
        if not any(d) or d != sign_normalize(d) or intmat.vgcd(d) != 1:
            continue
        if L.q(d) not in norms:
            continue
        M = reflection(L, d)
        if M is not None and M not in seen:
            seen.add(M)
            out.append(M)
    return out


def _inverse_isometry(L: Lattice, M: MatrixT) -> MatrixT:
    # M^{-1} = G^{-1} M^T G
    inv = intmat.matmul(intmat.inverse_q(L.gram), intmat.matmul(intmat.transpose(M), L.gram))
    if any(Fraction(x).denominator != 1 for row in inv for x in row):
        raise InvalidGenerator("isometry has no integral inverse")
    return _as_matrix(inv)


# --- census ----------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitClass:
    alpha: int
    disc_class: tuple[Fraction, ...]
    members: tuple[Vector, ...]
    capped: bool

    @property
    def representative(self) -> Vector:
        return self.members[0]

    def to_json(self) -> dict:
        return {
            "alpha": self.alpha,
            "disc_class": [f"{x.numerator}/{x.denominator}" for x in self.disc_class],
            "size_in_window": len(self.members),
            "representative": list(self.representative),
            "capped": self.capped,
        }


@dataclass(frozen=True)
class OrbitReport:
    lattice: Lattice
    height: int
    classes: tuple[OrbitClass, ...]
    invariant_classes: int

    @property
    def discriminant(self) -> int:
        return self.lattice.discriminant

    def to_json(self) -> dict:
        return {
            "lattice": self.lattice.to_json(),
            "height": self.height,
            "discriminant": self.discriminant,
            "orbit_count": len(self.classes),
            "invariant_count": self.invariant_classes,
            "classes": [c.to_json() for c in self.classes],
        }


def _act(M: MatrixT, v: Vector) -> Vector:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in M)


def _class_orbit_key(gens: list[MatrixT], cls: tuple[Fraction, ...]) -> tuple[Fraction, ...]:
    """Smallest representative of the orbit of a discriminant class (up to sign)
    under the generators' induced action on ``L*/L``."""
    seen = {cls}
    queue = deque([cls])
    while queue:
        x = queue.popleft()
        for M in gens:
            y = tuple(t % 1 for t in _act(M, x))
            y = min(y, tuple((-t) % 1 for t in y))
            if y not in seen:
                seen.add(y)
                queue.append(y)
    return min(seen)


def orbit_census(L: Lattice, height: int, generators: Iterable, cap_factor: int = 4,
                 vectors: Sequence[Vector] | None = None) -> OrbitReport:
    """Partition the primitive isotropic vectors of height <= ``height`` into
    orbits of the group generated by ``generators`` (and -1).

    Orbits are explored by breadth-first search through vectors of height at
    most ``cap_factor * height``; a class whose search hit that cap is marked
    ``capped`` (possibly under-merged). Each class carries ``(alpha, class)``,
    where the discriminant class is canonicalized under the generators' action
    on ``L*/L``; a class mixing distinct invariants raises
    :class:`InvariantMergeViolation`.
    """
    gens = [_as_matrix(M) for M in generators]
    for M in gens:
        if not is_isometry(L, M):
            raise InvalidGenerator(f"{M} does not preserve the form")
    moves = gens + [_inverse_isometry(L, M) for M in gens]
    window = list(vectors) if vectors is not None else enumerate_primitive_isotropic(L, height)
    window_set = set(window)
    cap = cap_factor * height
    assigned: dict[Vector, int] = {}
    groups: list[tuple[list[Vector], bool]] = []
    for start in window:
        if start in assigned:
            continue
        gid = len(groups)
        members, capped = [], False
        seen = {start}
        queue = deque([start])
        while queue:
            x = queue.popleft()
            if x in window_set:
                assigned[x] = gid
                members.append(x)
            for M in moves:
                y = sign_normalize(_act(M, x))
                if y in seen:
                    continue
                if max(map(abs, y)) > cap:
                    capped = True
                    continue
                seen.add(y)
                queue.append(y)
        groups.append((sorted(members), capped))

    classes = []
    for members, capped in groups:
        invs = set()
        for v in members:
            alpha, cls = orbit_invariant(L, v)
            invs.add((alpha, _class_orbit_key(gens, cls)))
        if len(invs) != 1:
            raise InvariantMergeViolation(f"orbit of {members[0]} mixes invariants {sorted(invs)}")
        alpha, cls = invs.pop()
        classes.append(OrbitClass(alpha, cls, tuple(members), capped))
    classes.sort(key=lambda c: (c.alpha, c.disc_class, c.representative))
    n_inv = len({(c.alpha, c.disc_class) for c in classes})
    return OrbitReport(L, height, tuple(classes), n_inv)
