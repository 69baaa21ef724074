import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from parabolic_lattice import errors
from parabolic_lattice.fujiki import (
    bbf_via_kahler,
    double_factorial_odd,
    fujiki_recover_q,
    normalize_form,
    perfect_matchings,
    symmetric_power_form,
)

GRAMS = {
    "U": ((0, 1), (1, 0)),
    "diag(2,-2)": ((2, 0), (0, -2)),
    "U+<-2>": ((0, 1, 0), (1, 0, 0), (0, 0, -2)),
}


def sympy_diagonal(gram, n, c):
    """``x -> c q(x)^n`` built as a sympy polynomial, evaluated exactly."""
    xs = sympy.symbols(f"x0:{len(gram)}")
    q = sum(xs[i] * gram[i][j] * xs[j] for i in range(len(gram)) for j in range(len(gram)))
    poly = sympy.expand(c * q ** n)

    def f(v):
        val = poly.subs(dict(zip(xs, v)))
        return Fraction(int(val.p), int(val.q))

    return f


def brute_symmetrized(gram, c):
    """4-linear form from averaging b(x1,x2) b(x3,x4) over all 24 orderings."""
    def b(x, y):
        return sum(x[i] * gram[i][j] * y[j] for i in range(len(x)) for j in range(len(y)))

    def T(*vs):
        total = sum(b(p[0], p[1]) * b(p[2], p[3]) for p in itertools.permutations(vs))
        return Fraction(c) * total / 24

    return T


def test_matchings_count():
    for n in range(1, 5):
        assert len(list(perfect_matchings(list(range(2 * n))))) == double_factorial_odd(n)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.lists(st.integers(-2, 2), min_size=3, max_size=3), min_size=4, max_size=4),
       st.integers(1, 4))
def test_top_form_matches_permutation_average(vs, c):
    gram = GRAMS["U+<-2>"]
    assert symmetric_power_form(gram, 2, c)(*vs) == brute_symmetrized(gram, c)(*vs)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3), st.integers(1, 3))
def test_top_form_diagonal_is_power(x, n):
    gram = GRAMS["U+<-2>"]
    q = sum(x[i] * gram[i][j] * x[j] for i in range(3) for j in range(3))
    assert symmetric_power_form(gram, n, 5)(*([x] * (2 * n))) == 5 * q ** n


def test_recover_n1_polarization():
    r = fujiki_recover_q(sympy_diagonal(GRAMS["U"], 1, 1), 2, 1)
    assert r.gram == GRAMS["U"] and r.c == 1


def test_recover_n2_c3_diag():
    r = fujiki_recover_q(sympy_diagonal(GRAMS["diag(2,-2)"], 2, 3), 2, 2)
    assert r.gram in (GRAMS["diag(2,-2)"], ((-2, 0), (0, 2)))
    assert r.c == 3


def test_recover_zero_form():
    with pytest.raises(errors.NoAnchorPoint):
        fujiki_recover_q(lambda x: 0, 3, 1)


def test_recover_rejects_non_fujiki():
    # q^2 + a quartic that is not a power of a quadratic
    with pytest.raises(errors.NotAFujikiForm):
        fujiki_recover_q(lambda x: Fraction((x[0] * x[1]) ** 2 + x[0] ** 4), 2, 2)


@pytest.mark.parametrize("name", sorted(GRAMS))
@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("c", [1, 3])
def test_recover_sweep(name, n, c):
    gram = GRAMS[name]
    r = fujiki_recover_q(sympy_diagonal(gram, n, c), len(gram), n)
    neg = tuple(tuple(-x for x in row) for row in gram)
    assert r.gram in (gram, neg)
    assert r.c == c
    if n % 2:
        assert r.gram == gram  # c > 0 fixes the sign


def test_normalize_form():
    assert normalize_form([[Fraction(1, 2), 0], [0, Fraction(-1, 2)]]) == ((2, 0), (0, -2))
    assert normalize_form([[0, Fraction(1, 3)], [Fraction(1, 3), 0]]) == ((0, 1), (1, 0))
    assert normalize_form([[1, 0], [0, 1]], even=False) == ((1, 0), (0, 1))


def test_kahler_n1_returns_gram():
    gram = GRAMS["U+<-2>"]
    K = bbf_via_kahler(symmetric_power_form(gram, 1), (1, 1, 0), 1, reference=gram)
    assert K.gram == gram and K.scale == 1


@pytest.mark.parametrize("omega", [(1, 0, 0), (2, 1, 0), (2, 1, 1)])
def test_kahler_n2_is_proportional(omega):
    gram = ((2, 0, 0), (0, -2, 0), (0, 0, -2))
    K = bbf_via_kahler(brute_symmetrized(gram, 3), omega, 2, reference=gram)
    assert K.proportional and K.scale > 0
    q = sum(omega[i] * gram[i][j] * omega[j] for i in range(3) for j in range(3))
    assert K.scale == Fraction(3 * q, 3)  # c q(w)^(n-1) / (2n-1)


def test_kahler_sign_follows_q_omega():
    gram = ((2, 0, 0), (0, -2, 0), (0, 0, -2))
    K = bbf_via_kahler(brute_symmetrized(gram, 3), (1, -1, 1), 2, reference=gram)
    assert K.scale == -2


def test_kahler_squared_denominator_is_not_proportional():
    # (2n-2)/(2n-1)^2 leaves part of the b(w,x) b(w,y) term behind
    gram = ((2, 0, 0), (0, -2, 0), (0, 0, -2))
    K = bbf_via_kahler(brute_symmetrized(gram, 1), (1, 0, 0), 2, reference=gram,
                       coefficient=Fraction(2, 9))
    assert not K.proportional


def test_kahler_degenerate():
    with pytest.raises(errors.DegenerateKahler):
        bbf_via_kahler(symmetric_power_form(GRAMS["U"], 2), (1, 0), 2)
