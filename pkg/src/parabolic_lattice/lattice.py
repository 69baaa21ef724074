"""Integral lattices given by a Gram matrix, and their sublattices."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from . import intmat
from .errors import (
    Degenerate,
    DependentVectors,
    DimensionMismatch,
    InternalConsistencyError,
    NonSymmetric,
    RankMismatch,
    ZeroVector,
)

Vector = tuple[int, ...]


@dataclass(frozen=True)
class Signature:
    s_plus: int
    s_minus: int
    s_zero: int = 0

    def as_pair(self) -> tuple[int, int]:
        return (self.s_plus, self.s_minus)


def inertia(gram: Sequence[Sequence]) -> Signature:
    """Inertia of a symmetric rational matrix, allowing degenerate forms.

    Congruent diagonalization over ``Fraction``: pivot on the first nonzero
    diagonal entry; if the remaining diagonal is zero, take the first nonzero
    off-diagonal entry ``(i, j)`` and replace basis vector ``i`` by ``e_i + e_j``.
    """
    a = [[Fraction(x) for x in row] for row in gram]
    n = len(a)
    pos = neg = 0
    active = list(range(n))
    while active:
        piv = next((i for i in active if a[i][i] != 0), None)
        if piv is None:
            pair = next(((i, j) for i in active for j in active if j > i and a[i][j] != 0), None)
            if pair is None:
                break
            i, j = pair
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            piv = i
        p = a[piv][piv]
        if p > 0:
            pos += 1
        else:
            neg += 1
        active.remove(piv)
        for i in active:
            f = a[i][piv] / p
            if f:
                for k in range(n):
                    a[i][k] -= f * a[piv][k]
                for k in range(n):
                    a[k][i] -= f * a[k][piv]
    return Signature(pos, neg, n - pos - neg)


@dataclass(frozen=True)
class Lattice:
    """A non-degenerate integral symmetric bilinear form on ``Z^rank``."""

    gram: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = tuple(tuple(int(x) for x in row) for row in self.gram)
        object.__setattr__(self, "gram", g)
        n = len(g)
        if any(len(row) != n for row in g):
            raise DimensionMismatch(f"gram matrix is not square: {n} rows")
        if n == 0:
            raise DimensionMismatch("rank must be positive")
        for i in range(n):
            for j in range(i):
                if g[i][j] != g[j][i]:
                    raise NonSymmetric(f"gram[{i}][{j}] != gram[{j}][{i}]")
        if intmat.det(g) == 0:
            raise Degenerate("gram matrix has zero determinant")

    @property
    def rank(self) -> int:
        return len(self.gram)

    def _check(self, v) -> None:
        if len(v) != self.rank:
            raise DimensionMismatch(f"vector of length {len(v)} in a rank-{self.rank} lattice")

    def b(self, v, w):
        self._check(v)
        self._check(w)
        return sum(x * sum(g * y for g, y in zip(row, w)) for x, row in zip(v, self.gram))

    def q(self, v):
        return self.b(v, v)

    def pairing_vector(self, v) -> list:
        """``gram @ v``: the pairings of ``v`` with the basis vectors."""
        self._check(v)
        return intmat.matvec(self.gram, v)

    @property
    def discriminant(self) -> int:
        return intmat.det(self.gram)

    @property
    def signature(self) -> Signature:
        return inertia(self.gram)

    @property
    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def to_json(self) -> dict:
        return {"rank": self.rank, "gram": [list(row) for row in self.gram]}


@dataclass(frozen=True)
class Sublattice:
    """Integer span of ``basis`` (ambient coordinates) with the induced form."""

    ambient: Lattice
    basis: tuple[Vector, ...]
    gram: tuple[tuple[int, ...], ...] = field(init=False)

    def __post_init__(self):
        basis = tuple(tuple(int(x) for x in v) for v in self.basis)
        for v in basis:
            self.ambient._check(v)
        if basis and intmat.rank_q(basis) != len(basis):
            raise DependentVectors("sublattice basis is linearly dependent")
        object.__setattr__(self, "basis", basis)
        g = tuple(tuple(self.ambient.b(u, w) for w in basis) for u in basis)
        object.__setattr__(self, "gram", g)

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def discriminant(self) -> int:
        return intmat.det(self.gram)

    @property
    def signature(self) -> Signature:
        return inertia(self.gram)

    def as_lattice(self) -> Lattice:
        """The induced form as a standalone lattice (must be non-degenerate)."""
        return Lattice(self.gram)


def make_lattice(gram) -> Lattice:
    return Lattice(tuple(tuple(row) for row in gram))


def q_eval(L: Lattice, v) -> int:
    return L.q(v)


def b_eval(L: Lattice, v, w) -> int:
    return L.b(v, w)


def signature(L: Lattice) -> Signature:
    return L.signature


def discriminant(L: Lattice) -> int:
    return L.discriminant


def require_nonzero(v) -> None:
    if not any(v):
        raise ZeroVector("zero vector")


def is_primitive(L: Lattice | None, v) -> bool:
    if L is not None:
        L._check(v)
    require_nonzero(v)
    return intmat.vgcd(v) == 1


def primitive_part(v) -> Vector:
    require_nonzero(v)
    g = intmat.vgcd(v)
    return tuple(x // g for x in v)


def saturate(L: Lattice, vectors: Iterable) -> Sublattice:
    """All lattice vectors in the rational span of ``vectors``, in HNF."""
    vectors = [tuple(int(x) for x in v) for v in vectors]
    for v in vectors:
        L._check(v)
    if not vectors:
        return Sublattice(L, ())
    if intmat.rank_q(vectors) != len(vectors):
        raise DependentVectors("vectors are linearly dependent")
    if len(vectors) == L.rank:
        return Sublattice(L, tuple(map(tuple, intmat.identity(L.rank))))
    # span_Q(V) ∩ Z^n is the integer kernel of the integer kernel of V.
    annihilator = intmat.kernel(vectors, L.rank)
    return Sublattice(L, tuple(intmat.kernel(annihilator, L.rank)))


def orthogonal_complement(L: Lattice, S: Sublattice | Iterable) -> Sublattice:
    basis = S.basis if isinstance(S, Sublattice) else [tuple(v) for v in S]
    if not basis:
        return Sublattice(L, tuple(map(tuple, intmat.identity(L.rank))))
    pairing = [L.pairing_vector(v) for v in basis]
    return Sublattice(L, tuple(intmat.kernel(pairing, L.rank)))


def direct_sum(*lattices: Lattice) -> Lattice:
    n = sum(L.rank for L in lattices)
    gram = [[0] * n for _ in range(n)]
    off = 0
    for L in lattices:
        for i, row in enumerate(L.gram):
            gram[off + i][off:off + L.rank] = row
        off += L.rank
    return Lattice(tuple(map(tuple, gram)))


def embedding_index(L: Lattice, S: Sublattice) -> int:
    """Index ``[L : S]`` of a full-rank sublattice, from the determinant ratio."""
    if S.rank != L.rank:
        raise RankMismatch(f"sublattice rank {S.rank} != lattice rank {L.rank}")
    num, den = S.discriminant, L.discriminant
    if num % den:
        raise InternalConsistencyError(f"det ratio {num}/{den} is not an integer")
    ratio = num // den
    root = isqrt(ratio) if ratio >= 0 else -1
    if root * root != ratio:
        raise InternalConsistencyError(f"det ratio {ratio} is not a perfect square")
    if root != abs(intmat.det(S.basis)):
        raise InternalConsistencyError("index disagrees with the basis determinant")
    return root


def hyperbolic_plane(scale: int = 1) -> Lattice:
    return Lattice(((0, scale), (scale, 0)))


def diagonal(*entries: int) -> Lattice:
    n = len(entries)
    return Lattice(tuple(tuple(entries[i] if i == j else 0 for j in range(n)) for i in range(n)))


E8_CARTAN = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, -1),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, 0),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, -1, 0, 0, 0, 0, 2),
)


def e8(scale: int = 1) -> Lattice:
    """The E8 root lattice; ``e8(-1)`` is the negative definite version."""
    return Lattice(tuple(tuple(scale * x for x in row) for row in E8_CARTAN))


def parse_lattice(doc) -> Lattice:
    """Build a lattice from the ``{"rank": n, "gram": [[...]]}`` interchange format."""
    from .errors import InputParseError

    if not isinstance(doc, dict) or "gram" not in doc:
        raise InputParseError("expected an object with a 'gram' key")
    gram = doc["gram"]
    if not isinstance(gram, list) or not all(isinstance(r, list) for r in gram):
        raise InputParseError("'gram' must be a list of lists")
    for row in gram:
        for x in row:
            if not isinstance(x, int) or isinstance(x, bool):
                raise InputParseError(f"non-integer gram entry {x!r}")
    if "rank" in doc and doc["rank"] != len(gram):
        raise InputParseError(f"rank {doc['rank']!r} does not match gram size {len(gram)}")
    return make_lattice(gram)
