import itertools
from collections import Counter
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import D2, D3, SMALL_LATTICES, U, U2_M2, U_M2
from parabolic_lattice import errors
from parabolic_lattice.discriminant import (
    StableVerdict,
    disc_bilinear,
    disc_form_isomorphic,
    disc_quadratic,
    discriminant_group,
    isotropic_subgroups,
    overlattice_from_isotropic,
    stably_equivalent_check,
    verify_nikulin,
)
from parabolic_lattice.lattice import diagonal, direct_sum, e8, make_lattice

F = Fraction
EVEN_SMALL = [L for L in SMALL_LATTICES.values() if L.is_even]


def naive_dual_quotient(L):
    """Representatives of L*/L in [0,1)^n, found by scanning denominators."""
    d = abs(L.discriminant)
    n = L.rank
    out = []
    for num in itertools.product(range(d), repeat=n):
        x = tuple(F(a, d) for a in num)
        if all((sum(L.gram[i][j] * x[j] for j in range(n))).denominator == 1 for i in range(n)):
            out.append(x)
    return out


def naive_q(L, x):
    m = 2 if L.is_even else 1
    return sum(x[i] * L.gram[i][j] * x[j] for i in range(L.rank) for j in range(L.rank)) % m


def test_unimodular_is_trivial():
    A = discriminant_group(U)
    assert A.order == 1
    assert isotropic_subgroups(A)[0].order == 1 and len(isotropic_subgroups(A)) == 1


def test_cyclic_four():
    A = discriminant_group(diagonal(-4))
    assert A.orders == (4,)
    assert A.quadratic((1,)) == F(7, 4)  # -1/4 mod 2
    assert disc_bilinear(A, (F(1, 4),), (F(1, 4),)) == F(3, 4)


def test_diag_2_m2():
    A = discriminant_group(D2)
    assert A.orders == (2, 2)
    assert sorted(A.quadratic(g) for g in [(1, 0), (0, 1)]) == [F(1, 2), F(3, 2)]
    assert disc_bilinear(A, (F(1, 2), 0), (0, F(1, 2))) == 0
    assert disc_quadratic(A, (F(1, 2), F(1, 2))) == 0


def test_from_dual_rejects_non_dual():
    A = discriminant_group(D2)
    with pytest.raises(errors.ElementNotInGroup):
        A.from_dual((F(1, 3), 0))


@pytest.mark.parametrize("name", sorted(SMALL_LATTICES))
def test_group_matches_naive_oracle(name):
    L = SMALL_LATTICES[name]
    A = discriminant_group(L)
    reps = naive_dual_quotient(L)
    assert A.order == len(reps) == abs(L.discriminant)
    ours = Counter(A.quadratic(x) for x in A.elements())
    theirs = Counter(naive_q(L, x) for x in reps)
    assert ours == theirs
    # lift/from_dual are inverse
    for x in A.elements():
        assert A.from_dual(A.lift(x)) == x


def test_isotropic_subgroup_examples():
    subs = isotropic_subgroups(discriminant_group(D2))
    assert [H.order for H in subs] == [1, 2]
    assert subs[1].element_list == [(0, 0), (F(1, 2), F(1, 2))]
    assert [H.order for H in isotropic_subgroups(discriminant_group(diagonal(-2)))] == [1]


@pytest.mark.parametrize("L", EVEN_SMALL, ids=lambda L: str(L.gram))
def test_isotropic_subgroups_match_brute_force(L):
    A = discriminant_group(L)
    els = list(A.elements())
    found = set()
    # every subgroup of these small groups is generated by at most 2 elements
    for gens in itertools.combinations_with_replacement(els, 2):
        H = {A.zero}
        frontier = [A.zero]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = A.add(x, g)
                if y not in H:
                    H.add(y)
                    frontier.append(y)
        if all(A.quadratic(x) == 0 for x in H):
            found.add(frozenset(H))
    ours = {frozenset(A.from_dual(x) for x in H.element_list) for H in isotropic_subgroups(A)}
    assert ours == found


def test_overlattice_examples():
    assert overlattice_from_isotropic(D2, []) == D2
    subs = isotropic_subgroups(discriminant_group(D2))
    L2 = overlattice_from_isotropic(D2, subs[1])
    assert L2.discriminant == -1 and L2.is_even
    m2 = diagonal(-2)
    assert overlattice_from_isotropic(m2, [(0,)]) == m2
    with pytest.raises(errors.NotIsotropic):
        overlattice_from_isotropic(m2, [(0,), (F(1, 2),)])


def test_nikulin_examples():
    subs = isotropic_subgroups(discriminant_group(D2))
    r = verify_nikulin(D2, subs[1])
    assert r.passed and r.perp_order == 2
    assert verify_nikulin(D2, subs[0]).passed
    r = verify_nikulin(diagonal(-4), [(0,)])
    assert r.passed and r.perp_order == 4


@pytest.mark.parametrize("L", EVEN_SMALL + [diagonal(2, -8), diagonal(4, -4), direct_sum(U, diagonal(-8))],
                         ids=lambda L: str(L.gram))
def test_nikulin_all_subgroups(L):
    A = discriminant_group(L)
    for H in isotropic_subgroups(A):
        r = verify_nikulin(L, H)
        assert r.passed
        assert r.overlattice.discriminant * H.order ** 2 == L.discriminant


def test_form_isomorphism_examples():
    k3 = direct_sum(U, U, U, e8(-1), e8(-1))
    assert disc_form_isomorphic(discriminant_group(U), discriminant_group(k3))
    assert not disc_form_isomorphic(discriminant_group(diagonal(-2)), discriminant_group(diagonal(2)))
    assert not disc_form_isomorphic(discriminant_group(D2), discriminant_group(U))


def test_form_isomorphism_detects_basis_change():
    # the same lattice in two bases has isomorphic forms
    L = make_lattice([[2, 1], [1, -4]])
    P = [[1, 1], [0, 1]]
    G = sympy.Matrix(P).T * sympy.Matrix(L.gram) * sympy.Matrix(P)
    L2 = make_lattice(G.tolist())
    assert disc_form_isomorphic(discriminant_group(L), discriminant_group(L2))


def test_stable_check_examples():
    assert stably_equivalent_check(D2, U).verdict is StableVerdict.NOT_STABLY_EQUIVALENT
    assert stably_equivalent_check(U, U).verdict is StableVerdict.INVARIANTS_MATCH
    assert stably_equivalent_check(D2, diagonal(-2, 2)).verdict is StableVerdict.INVARIANTS_MATCH


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 6), st.sampled_from([2, -2, 4, -4, 6]))
def test_disc_order_is_abs_det(a, b, c):
    L = direct_sum(make_lattice([[0, a], [a, 0]]), make_lattice([[2 * b]]), diagonal(c))
    A = discriminant_group(L)
    assert A.order == abs(L.discriminant)
    assert all(A.bilinear(x, y) == A.bilinear(y, x) for x in A.elements() for y in list(A.elements())[:5])


@pytest.mark.parametrize("L", EVEN_SMALL + [diagonal(4, -4), direct_sum(U, diagonal(-8))], ids=lambda L: str(L.gram))
def test_overlattice_round_trip(L):
    # L'/L, read inside A_L, is exactly the subgroup glued in
    from parabolic_lattice.discriminant import overlattice_basis

    A = discriminant_group(L)
    for H in isotropic_subgroups(A):
        basis = overlattice_basis(L, H)
        gens = {A.from_dual(v) for v in basis}
        span = {A.zero}
        frontier = [A.zero]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = A.add(x, g)
                if y not in span:
                    span.add(y)
                    frontier.append(y)
        assert span == set(H.elements)


def product_form(A1, A2):
    r1, r2 = A1.ngens, A2.ngens
    b = [[0] * (r1 + r2) for _ in range(r1 + r2)]
    for i in range(r1):
        for j in range(r1):
            b[i][j] = A1.b_matrix[i][j]
    for i in range(r2):
        for j in range(r2):
            b[r1 + i][r1 + j] = A2.b_matrix[i][j]
    from parabolic_lattice.discriminant import FiniteQuadraticForm

    return FiniteQuadraticForm(A1.orders + A2.orders, b, A1.q_values + A2.q_values, A1.modulus)


@pytest.mark.parametrize("pair", [(diagonal(2), diagonal(-2)), (diagonal(-4), diagonal(2)),
                                  (diagonal(2, 2), diagonal(-6)), (U, diagonal(-4))],
                         ids=str)
def test_direct_sum_gives_product_form(pair):
    L1, L2 = pair
    A = discriminant_group(direct_sum(L1, L2))
    assert disc_form_isomorphic(A, product_form(discriminant_group(L1), discriminant_group(L2)))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(EVEN_SMALL), st.data())
def test_quadratic_polarizes_to_bilinear(L, data):
    A = discriminant_group(L)
    els = list(A.elements())
    x = data.draw(st.sampled_from(els))
    y = data.draw(st.sampled_from(els))
    lhs = (A.quadratic(A.add(x, y)) - A.quadratic(x) - A.quadratic(y)) % 2
    assert lhs == (2 * A.bilinear(x, y)) % 2


@pytest.mark.parametrize("L", list(SMALL_LATTICES.values()), ids=list(SMALL_LATTICES))
def test_bilinear_nondegenerate(L):
    A = discriminant_group(L)
    els = list(A.elements())
    for x in els:
        if x != A.zero:
            assert any(A.bilinear(x, y) != 0 for y in els)
