"""Discriminant groups, finite quadratic forms and overlattice gluing.

An element of a finite quadratic form with invariant factors ``d_1 | ... | d_r``
is a tuple of integers ``(c_1, ..., c_r)`` with ``0 <= c_i < d_i``.  For a
form coming from a lattice, ``c`` stands for the class of
``sum(c_i * g_i)`` where the generators ``g_i`` are vectors of the dual lattice
in lattice coordinates.

Quadratic values live in Q/2Z for even lattices and Q/Z for odd ones
(``modulus`` 2 or 1); bilinear values always live in Q/Z.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from . import intmat
from .errors import (
    BudgetExceeded,
    ElementNotInGroup,
    InternalConsistencyError,
    NotIsotropic,
    RankMismatch,
)
from .lattice import Lattice

DEFAULT_BUDGET = 2**16

Element = tuple[int, ...]


def _frac_str(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True, eq=False)
class FiniteQuadraticForm:
    orders: tuple[int, ...]
    b_matrix: tuple[tuple[Fraction, ...], ...]
    q_values: tuple[Fraction, ...]
    modulus: int = 2
    # Lattice-backed forms only: dual vectors realizing the generators, and the
    # rows of the Smith transform that turn ``gram @ x`` into group coordinates.
    generators: tuple[tuple[Fraction, ...], ...] | None = None
    lattice: Lattice | None = None
    _coord_rows: tuple[tuple[int, ...], ...] | None = field(default=None, repr=False)

    def __post_init__(self):
        r = len(self.orders)
        object.__setattr__(
            self, "b_matrix",
            tuple(tuple(Fraction(x) % 1 for x in row) for row in self.b_matrix))
        object.__setattr__(
            self, "q_values", tuple(Fraction(x) % self.modulus for x in self.q_values))
        if len(self.b_matrix) != r or len(self.q_values) != r:
            raise InternalConsistencyError("form data does not match the number of generators")

    @property
    def order(self) -> int:
        n = 1
        for d in self.orders:
            n *= d
        return n

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def zero(self) -> Element:
        return (0,) * self.ngens

    def elements(self):
        """All group elements in lexicographic order."""
        return itertools.product(*(range(d) for d in self.orders))

    def add(self, x: Element, y: Element) -> Element:
        return tuple((a + b) % d for a, b, d in zip(x, y, self.orders))

    def neg(self, x: Element) -> Element:
        return tuple((-a) % d for a, d in zip(x, self.orders))

    def mul(self, k: int, x: Element) -> Element:
        return tuple((k * a) % d for a, d in zip(x, self.orders))

    def element_order(self, x: Element) -> int:
        n = 1
        for a, d in zip(x, self.orders):
            n = lcm(n, d // gcd(a, d))
        return n

    def bilinear(self, x: Element, y: Element) -> Fraction:
        s = Fraction(0)
        for i, a in enumerate(x):
            if a:
                row = self.b_matrix[i]
                for j, c in enumerate(y):
                    if c:
                        s += a * c * row[j]
        return s % 1

    def quadratic(self, x: Element) -> Fraction:
        s = Fraction(0)
        for i, a in enumerate(x):
            if a:
                s += a * a * self.q_values[i]
                for j in range(i + 1, len(x)):
                    if x[j]:
                        s += 2 * a * x[j] * self.b_matrix[i][j]
        return s % self.modulus

    # --- lattice-backed helpers -------------------------------------------------

    def _require_lattice(self) -> Lattice:
        if self.lattice is None:
            raise ElementNotInGroup("this form is not attached to a lattice")
        return self.lattice

    def from_dual(self, x: Sequence) -> Element:
        """Group element of a dual vector given in lattice coordinates."""
        L = self._require_lattice()
        x = [Fraction(t) for t in x]
        if len(x) != L.rank:
            raise ElementNotInGroup(f"expected a vector of length {L.rank}")
        y = intmat.matvec(L.gram, x)
        if any(t.denominator != 1 for t in y):
            raise ElementNotInGroup(f"{[str(t) for t in x]} is not in the dual lattice")
        y = [int(t) for t in y]
        return tuple(sum(u * t for u, t in zip(row, y)) % d
                     for row, d in zip(self._coord_rows, self.orders))

    def lift(self, x: Element) -> tuple[Fraction, ...]:
        """A dual vector (lattice coordinates) representing ``x``, reduced into [0, 1)."""
        self._require_lattice()
        n = self.lattice.rank
        v = [Fraction(0)] * n
        for c, g in zip(x, self.generators):
            if c:
                v = [a + c * t for a, t in zip(v, g)]
        return tuple(t % 1 for t in v)

    def to_json(self) -> dict:
        return {
            "orders": list(self.orders),
            "b": [[_frac_str(x) for x in row] for row in self.b_matrix],
            "q": [_frac_str(x) for x in self.q_values],
        }


def discriminant_group(L: Lattice) -> FiniteQuadraticForm:
    """``A_L = L*/L`` via the Smith normal form of the Gram matrix."""
    d, u, _ = intmat.snf(L.gram)
    u_inv = intmat.inverse_q(u)
    gram_inv = intmat.inverse_q(L.gram)
    modulus = 2 if L.is_even else 1
    orders, gens, rows = [], [], []
    for i, di in enumerate(d):
        if di == 1:
            continue
        y = [u_inv[k][i] for k in range(L.rank)]
        gens.append(tuple(intmat.matvec(gram_inv, y)))
        orders.append(di)
        rows.append(tuple(u[i]))
    b = [[sum(x * t for x, t in zip(g, intmat.matvec(L.gram, h))) for h in gens] for g in gens]
    q = [b[i][i] for i in range(len(gens))]
    A = FiniteQuadraticForm(tuple(orders), tuple(map(tuple, b)), tuple(q), modulus,
                            tuple(gens), L, tuple(rows))
    if A.order != abs(L.discriminant):
        raise InternalConsistencyError("|A_L| != |discr(L)|")
    return A


def disc_bilinear(A: FiniteQuadraticForm, x, y) -> Fraction:
    """``b(x, y)`` in [0, 1) for dual vectors ``x, y`` in lattice coordinates."""
    return A.bilinear(A.from_dual(x), A.from_dual(y))


def disc_quadratic(A: FiniteQuadraticForm, x) -> Fraction:
    """``q(x)`` in [0, modulus) for a dual vector ``x`` in lattice coordinates."""
    return A.quadratic(A.from_dual(x))


@dataclass(frozen=True)
class IsotropicSubgroup:
    parent: FiniteQuadraticForm = field(compare=False)
    elements: tuple[Element, ...]

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def element_list(self) -> list[tuple[Fraction, ...]]:
        """Coset representatives as dual vectors in lattice coordinates."""
        return [self.parent.lift(x) for x in self.elements]


def _closure(A: FiniteQuadraticForm, H: frozenset, x: Element) -> frozenset:
    out = set(H)
    step = x
    while step not in H:
        out.update(A.add(h, step) for h in H)
        step = A.add(step, x)
    return frozenset(out)


def isotropic_subgroups(A: FiniteQuadraticForm, budget: int = DEFAULT_BUDGET) -> list[IsotropicSubgroup]:
    """Every subgroup of ``A`` on which the quadratic form vanishes.

    Breadth-first from the trivial subgroup, adjoining isotropic elements in
    lexicographic order. Output sorted by order, then by element list.
    """
    if A.order > budget:
        raise BudgetExceeded(f"group of order {A.order} exceeds budget {budget}")
    iso = [x for x in A.elements() if A.quadratic(x) == 0]
    iso_set = set(iso)
    start = frozenset([A.zero])
    seen = {start}
    queue = deque([start])
    while queue:
        H = queue.popleft()
        for x in iso:
            if x in H:
                continue
            H2 = _closure(A, H, x)
            if H2 in seen or not H2 <= iso_set:
                continue
            # mod-1 quadratic values do not control b on odd forms
            if A.modulus == 1 and any(A.bilinear(u, w) for u in H2 for w in H2):
                continue
            seen.add(H2)
            queue.append(H2)
    subgroups = [IsotropicSubgroup(A, tuple(sorted(H))) for H in seen]
    subgroups.sort(key=lambda S: (S.order, S.elements))
    return subgroups


def _as_elements(A: FiniteQuadraticForm, H) -> list[Element]:
    if isinstance(H, IsotropicSubgroup):
        return list(H.elements)
    return [A.from_dual(x) for x in H]


def overlattice_basis(L: Lattice, H) -> list[tuple[Fraction, ...]]:
    """Basis (rows, in coordinates of ``L``) of the overlattice glued along ``H``.

    ``H`` is an :class:`IsotropicSubgroup` or an iterable of dual vectors. The
    basis is the Hermite normal form of the generating set, scaled back.
    """
    A = discriminant_group(L)
    elems = _as_elements(A, H)
    for x in elems:
        if A.quadratic(x) != 0:
            raise NotIsotropic(f"q({[str(t) for t in A.lift(x)]}) = {A.quadratic(x)} != 0")
    lifts = [A.lift(x) for x in elems]
    vecs = [tuple(Fraction(int(i == j)) for j in range(L.rank)) for i in range(L.rank)] + lifts
    den = lcm(*(t.denominator for v in vecs for t in v))
    rows = intmat.hnf([[int(t * den) for t in v] for v in vecs])
    basis = [tuple(Fraction(t, den) for t in r) for r in rows]
    gram = [[L.b(u, w) for w in basis] for u in basis]
    if any(t.denominator != 1 for row in gram for t in row):
        raise NotIsotropic("gluing set generates a non-integral overlattice")
    if L.is_even and any(gram[i][i] % 2 for i in range(L.rank)):
        raise NotIsotropic("gluing set generates an odd overlattice of an even lattice")
    return basis


def overlattice_from_isotropic(L: Lattice, H) -> Lattice:
    basis = overlattice_basis(L, H)
    gram = tuple(tuple(int(L.b(u, w)) for w in basis) for u in basis)
    return Lattice(gram)


def quotient_form(A: FiniteQuadraticForm, sup: Iterable[Element], sub: Iterable[Element]) -> FiniteQuadraticForm:
    """The form induced on ``sup / sub`` (``sub`` isotropic, ``sup`` inside ``sub``-perp).

    Works on preimages in ``Z^r``: the quotient of the two preimage lattices is
    put in Smith form to read off invariant factors and generators.
    """
    r = A.ngens
    if r == 0:
        return FiniteQuadraticForm((), (), (), A.modulus)
    relations = [tuple(d if i == j else 0 for j in range(r)) for i, d in enumerate(A.orders)]
    m_basis = intmat.hnf(list(sup) + relations)
    n_basis = intmat.hnf(list(sub) + relations)
    m_inv = intmat.inverse_q(m_basis)
    rel = intmat.matmul(n_basis, m_inv)
    if any(Fraction(t).denominator != 1 for row in rel for t in row):
        raise InternalConsistencyError("subgroup is not contained in the supergroup")
    d, _, v = intmat.snf([[int(t) for t in row] for row in rel])
    v_inv = intmat.inverse_q(v)
    orders, gens = [], []
    for i, di in enumerate(d):
        if di == 1:
            continue
        coeffs = [int(t) for t in v_inv[i]]
        g = [sum(c * m_basis[k][j] for k, c in enumerate(coeffs)) for j in range(r)]
        gens.append(tuple(x % o for x, o in zip(g, A.orders)))
        orders.append(di)
    b = [[A.bilinear(g, h) for h in gens] for g in gens]
    q = [A.quadratic(g) for g in gens]
    return FiniteQuadraticForm(tuple(orders), tuple(map(tuple, b)), tuple(q), A.modulus)


def disc_form_isomorphic(A1: FiniteQuadraticForm, A2: FiniteQuadraticForm,
                         budget: int = DEFAULT_BUDGET) -> bool:
    """Brute-force search for a group isomorphism preserving the quadratic form.

    Forms with different moduli (even vs odd) are never isomorphic unless both
    groups are trivial. The cyclic decompositions need not be listed the same
    way; the element-order profile decides the abstract group.
    """
    if A1.order != A2.order:
        return False
    if A1.order == 1:
        return True
    if A1.modulus != A2.modulus:
        return False
    if A1.order > budget:
        raise BudgetExceeded(f"group of order {A1.order} exceeds budget {budget}")

    def profile(A):
        return Counter((A.element_order(x), A.quadratic(x)) for x in A.elements())

    if profile(A1) != profile(A2):
        return False
    candidates = []
    els2 = list(A2.elements())
    for i, d in enumerate(A1.orders):
        candidates.append([y for y in els2
                           if A2.element_order(y) == d and A2.quadratic(y) == A1.q_values[i]])
    r = A1.ngens
    images: list[Element] = []

    def injective() -> bool:
        seen = set()
        for c in A1.elements():
            y = A2.zero
            for k, img in zip(c, images):
                if k:
                    y = A2.add(y, A2.mul(k, img))
            if y in seen:
                return False
            seen.add(y)
        return True

    def search(i: int) -> bool:
        if i == r:
            return injective()
        for y in candidates[i]:
            if all(A2.bilinear(images[j], y) == A1.b_matrix[j][i] for j in range(i)):
                images.append(y)
                if search(i + 1):
                    return True
                images.pop()
        return False

    return search(0)


@dataclass(frozen=True)
class NikulinReport:
    overlattice: Lattice
    subgroup_order: int
    discriminant_identity: bool   # discr(L') * |H|^2 == discr(L)
    perp_is_dual_quotient: bool   # H^perp == L'*/L inside A_L
    canonical_map: bool           # H^perp -> A_L' is onto, q-preserving, kernel H
    quotient_isomorphic: bool     # abstract H^perp/H isomorphic to A_L'
    perp_order: int

    @property
    def passed(self) -> bool:
        return (self.discriminant_identity and self.perp_is_dual_quotient
                and self.canonical_map and self.quotient_isomorphic)

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "subgroup_order": self.subgroup_order,
            "perp_order": self.perp_order,
            "overlattice": self.overlattice.to_json(),
            "discriminant_identity": self.discriminant_identity,
            "perp_is_dual_quotient": self.perp_is_dual_quotient,
            "canonical_map": self.canonical_map,
            "quotient_isomorphic": self.quotient_isomorphic,
        }


def verify_nikulin(L: Lattice, H, budget: int = DEFAULT_BUDGET) -> NikulinReport:
    """Check the overlattice/isotropic-subgroup correspondence for one ``H``."""
    A = discriminant_group(L)
    elems = sorted(set(_as_elements(A, H)))
    basis = overlattice_basis(L, H)
    L2 = overlattice_from_isotropic(L, H)
    A2 = discriminant_group(L2)
    hset = set(elems)

    perp = [x for x in A.elements() if all(A.bilinear(x, h) == 0 for h in elems)]
    dual_quot = []
    for x in A.elements():
        v = A.lift(x)
        if all(L.b(v, w).denominator == 1 for w in basis):
            dual_quot.append(x)
    perp_ok = perp == dual_quot

    basis_inv = intmat.inverse_q(basis)
    mod = min(A.modulus, A2.modulus)

    def to_new(x: Element) -> Element:
        v = A.lift(x)
        coords = [sum(v[k] * basis_inv[k][j] for k in range(L.rank)) for j in range(L.rank)]
        return A2.from_dual(coords)

    try:
        phi = {x: to_new(x) for x in perp}
    except ElementNotInGroup:
        phi = None
    map_ok = phi is not None
    if map_ok:
        kernel = {x for x, y in phi.items() if y == A2.zero}
        map_ok = (kernel == hset and set(phi.values()) == set(A2.elements())
                  and all(A.quadratic(x) % mod == A2.quadratic(y) % mod for x, y in phi.items())
                  and all(phi[A.add(x, y)] == A2.add(phi[x], phi[y]) for x in perp for y in perp))

    quotient = quotient_form(A, perp, elems)
    if quotient.modulus != A2.modulus:
        quotient = FiniteQuadraticForm(quotient.orders, quotient.b_matrix,
                                       [t % mod for t in quotient.q_values], mod)
        A2cmp = FiniteQuadraticForm(A2.orders, A2.b_matrix,
                                    [t % mod for t in A2.q_values], mod)
    else:
        A2cmp = A2
    iso_ok = disc_form_isomorphic(quotient, A2cmp, budget)

    disc_ok = L2.discriminant * len(elems) ** 2 == L.discriminant
    return NikulinReport(L2, len(elems), disc_ok, perp_ok, map_ok, iso_ok, len(perp))


class StableVerdict(enum.Enum):
    NOT_STABLY_EQUIVALENT = "NotStablyEquivalent"
    INVARIANTS_MATCH = "InvariantsMatch"


@dataclass(frozen=True)
class StableCheck:
    verdict: StableVerdict
    mismatches: tuple[str, ...]

    def to_json(self) -> dict:
        return {"verdict": self.verdict.value, "mismatches": list(self.mismatches)}


def stably_equivalent_check(L1: Lattice, L2: Lattice, budget: int = DEFAULT_BUDGET) -> StableCheck:
    """Refute stable equivalence by comparing invariants that survive ``+ M``.

    The auxiliary lattice ``M`` is assumed even, as for complements inside an
    even lattice; with odd ``M`` parity is not an invariant (``U + <1>`` and
    ``<1> + <1> + <-1>`` are isometric).
    InvariantsMatch is not a proof of equivalence.
    """
    if L1.rank != L2.rank:
        raise RankMismatch(f"ranks differ: {L1.rank} vs {L2.rank}")
    mismatches = []
    if L1.signature != L2.signature:
        mismatches.append("signature")
    if abs(L1.discriminant) != abs(L2.discriminant):
        mismatches.append("discriminant")
    if L1.is_even != L2.is_even:
        mismatches.append("parity")
    if not mismatches and not disc_form_isomorphic(discriminant_group(L1), discriminant_group(L2), budget):
        mismatches.append("discriminant_form")
    verdict = StableVerdict.NOT_STABLY_EQUIVALENT if mismatches else StableVerdict.INVARIANTS_MATCH
    return StableCheck(verdict, tuple(mismatches))
