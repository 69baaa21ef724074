"""Pointwise predicates on the period domain, the positive cone, and the
signature hypothesis used by the density argument."""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import intmat
from .errors import BadInputs, NotPositive, WrongSignature, ZeroLine
from .lattice import Lattice, inertia, orthogonal_complement, saturate


@dataclass(frozen=True)
class PeriodLine:
    """The complex line spanned by ``re + i*im``."""

    re: tuple[Fraction, ...]
    im: tuple[Fraction, ...]

    def __post_init__(self):
        re = tuple(Fraction(x) for x in self.re)
        im = tuple(Fraction(x) for x in self.im)
        if len(re) != len(im):
            raise BadInputs("real and imaginary parts have different lengths")
        if not any(re) and not any(im):
            raise ZeroLine("period line is zero")
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)

    def rotate(self, a, b) -> "PeriodLine":
        """Multiply by the complex number ``a + i*b``."""
        a, b = Fraction(a), Fraction(b)
        return PeriodLine(tuple(a * x - b * y for x, y in zip(self.re, self.im)),
                          tuple(b * x + a * y for x, y in zip(self.re, self.im)))


def period_membership(L: Lattice, l: PeriodLine) -> bool:
    """``q(l, l) = 0`` and ``q(l, conj l) > 0``, split into real and imaginary parts."""
    rr, ii, ri = L.q(l.re), L.q(l.im), L.b(l.re, l.im)
    return rr == ii and ri == 0 and rr + ii > 0


def period_eta_slice(L: Lattice, eta, l: PeriodLine) -> bool:
    return period_membership(L, l) and L.b(eta, l.re) == 0 and L.b(eta, l.im) == 0


class ConeComponent(enum.Enum):
    SAME = "Same"
    OPPOSITE = "Opposite"


def positive_cone_component(L: Lattice, kappa, rho, subspace: Sequence | None = None) -> ConeComponent:
    """Which component of ``{x : q(x) > 0}`` ``rho`` lies in, relative to ``kappa``.

    Only meaningful when the form (on ``subspace`` if given, else on ``L``) has
    exactly one positive direction.
    """
    if subspace is None:
        sig = L.signature
    else:
        basis = [tuple(v) for v in subspace]
        sig = inertia([[L.b(u, w) for w in basis] for u in basis])
        for x in (kappa, rho):
            if intmat.rank_q(basis + [tuple(x)]) != intmat.rank_q(basis):
                raise BadInputs(f"{tuple(x)} is not in the given subspace")
    if sig.s_plus != 1:
        raise WrongSignature(f"form has {sig.s_plus} positive directions, need exactly 1")
    for x in (kappa, rho):
        if L.q(x) <= 0:
            raise NotPositive(f"q({tuple(x)}) = {L.q(x)} is not positive")
    return ConeComponent.SAME if L.b(kappa, rho) > 0 else ConeComponent.OPPOSITE


@dataclass(frozen=True)
class DensityReport:
    b2: int
    ambient_signature: tuple[int, int]
    plane_signature: tuple[int, int, int]
    complement_signature: tuple[int, int]
    complement_radical: int
    signature_ok: bool
    betti_ok: bool

    @property
    def passed(self) -> bool:
        return self.signature_ok and self.betti_ok

    def to_json(self) -> dict:
        return {
            "pass": self.passed,
            "b2": self.b2,
            "ambient_signature": list(self.ambient_signature),
            "plane_signature": list(self.plane_signature),
            "quotient_signature": list(self.complement_signature),
            "quotient_radical_rank": self.complement_radical,
            "expected_quotient_signature": [2, self.b2 - 4],
            "signature_ok": self.signature_ok,
            "betti_ok": self.betti_ok,
        }


def density_hypothesis_check(L: Lattice, v, v_prime) -> DensityReport:
    """Signature of the complement of ``span(v, v')`` against ``(2, b2 - 4)``,
    and ``b2 - 4 >= 3``.

    The complement is taken modulo its radical. When ``v`` and ``v'`` are
    orthogonal the plane is degenerate and the complement comes out one
    negative direction short, so the check fails.
    """
    v, v_prime = tuple(v), tuple(v_prime)
    L._check(v)
    L._check(v_prime)
    if not any(v) or intmat.vgcd(v) != 1:
        raise BadInputs("v must be a nonzero primitive vector")
    if L.q(v) != 0:
        raise BadInputs(f"q(v) = {L.q(v)}, expected 0")
    if L.q(v_prime) >= 0:
        raise BadInputs(f"q(v') = {L.q(v_prime)}, expected negative")
    if intmat.rank_q([v, v_prime]) != 2:
        raise BadInputs("v and v' are dependent")
    S = saturate(L, [v, v_prime])
    C = orthogonal_complement(L, S)
    plane = S.signature
    comp = C.signature
    b2 = L.rank
    return DensityReport(
        b2=b2,
        ambient_signature=L.signature.as_pair(),
        plane_signature=(plane.s_plus, plane.s_minus, plane.s_zero),
        complement_signature=comp.as_pair(),
        complement_radical=comp.s_zero,
        signature_ok=comp.as_pair() == (2, b2 - 4),
        betti_ok=b2 - 4 >= 3,
    )


def default_density_vectors(L: Lattice) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """A primitive isotropic ``v`` and a negative ``v'`` pairing nontrivially with
    it, searched among ``e_i`` and ``e_i +- e_j``."""
    n = L.rank
    e = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    cand = list(e)
    for i, j in itertools.combinations(range(n), 2):
        for s in (1, -1):
            cand.append(tuple(a + s * b for a, b in zip(e[i], e[j])))
    for v in cand:
        if L.q(v) != 0:
            continue
        for w in cand:
            if L.q(w) < 0 and L.b(v, w) != 0:
                return v, w
    raise BadInputs("no suitable pair among e_i and e_i +- e_j")
