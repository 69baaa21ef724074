import json

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import D2, D3, SMALL_LATTICES, U, U2_M2, U_M2, naive_q
from parabolic_lattice import errors
from parabolic_lattice.lattice import (
    Lattice,
    Sublattice,
    diagonal,
    direct_sum,
    e8,
    embedding_index,
    hyperbolic_plane,
    is_primitive,
    make_lattice,
    orthogonal_complement,
    parse_lattice,
    primitive_part,
    q_eval,
    b_eval,
    saturate,
    signature,
    discriminant,
)


def test_make_lattice_examples():
    assert make_lattice([[0, 1], [1, 0]]).rank == 2
    assert make_lattice([[2, 0], [0, -2]]) == diagonal(2, -2)
    with pytest.raises(errors.Degenerate):
        make_lattice([[1, 1], [1, 1]])


def test_make_lattice_rejects_bad_shapes():
    with pytest.raises(errors.NonSymmetric):
        make_lattice([[0, 1], [2, 0]])
    with pytest.raises(errors.LatticeError):
        make_lattice([[1, 0, 0], [0, 1, 0]])


def test_q_and_b_examples():
    assert q_eval(U, (1, 1)) == 2
    assert q_eval(D2, (1, 1)) == 0
    assert b_eval(U, (1, 0), (0, 1)) == 1
    with pytest.raises(errors.DimensionMismatch):
        q_eval(U, (1, 0, 0))


def test_signature_examples():
    assert signature(U).as_pair() == (1, 1)
    k3 = direct_sum(U, U, U, e8(-1), e8(-1))
    assert signature(k3).as_pair() == (3, 19)
    assert signature(diagonal(1, 1, -1)).as_pair() == (2, 1)


def test_e8_is_even_unimodular_definite():
    E = e8()
    assert E.discriminant == 1 and E.is_even
    assert E.signature.as_pair() == (8, 0)


def test_discriminant_examples():
    assert discriminant(U) == -1
    assert discriminant(D2) == -4
    assert discriminant(U2_M2) == 8
    assert U2_M2.discriminant == sympy.Matrix(U2_M2.gram).det()


def test_primitivity():
    assert not is_primitive(None, (2, 4, 6))
    assert primitive_part((2, 4, 6)) == (1, 2, 3)
    assert is_primitive(U, (1, 1))
    with pytest.raises(errors.ZeroVector):
        is_primitive(U, (0, 0))


def test_saturate_examples():
    assert saturate(U, [(2, 0)]).basis == ((1, 0),)
    K = saturate(U2_M2, [(2, 1, 2), (1, 0, 0)])
    assert K.basis == ((1, 0, 0), (0, 1, 2))
    assert saturate(U, [(1, 1), (1, -1)]).basis == ((1, 0), (0, 1))


def test_saturate_rejects_dependent():
    with pytest.raises(errors.DependentVectors):
        saturate(U, [(1, 1), (2, 2)])


def test_orthogonal_complement_examples():
    C = orthogonal_complement(D2, [(1, 0)])
    assert C.basis == ((0, 1),) and C.gram == ((-2,),)
    K = saturate(U2_M2, [(2, 1, 2), (1, 0, 0)])
    C = orthogonal_complement(U2_M2, K)
    assert C.basis in (((2, 0, 1),), ((-2, 0, -1),)) and C.gram == ((-2,),)
    assert orthogonal_complement(U, [(1, 0)]).basis == ((1, 0),)


def test_direct_sum_and_index():
    assert U_M2.rank == 3 and U_M2.discriminant == 2
    assert embedding_index(U, Sublattice(U, [(1, 1), (1, -1)])) == 2
    K = saturate(U2_M2, [(2, 1, 2), (1, 0, 0)])
    C = orthogonal_complement(U2_M2, K)
    assert embedding_index(U2_M2, Sublattice(U2_M2, K.basis + C.basis)) == 1


def test_parse_lattice_round_trip():
    doc = json.loads(json.dumps(D3.to_json()))
    assert parse_lattice(doc) == D3
    with pytest.raises(errors.InputParseError):
        parse_lattice({"gram": [[1, "x"], [0, 1]]})
    with pytest.raises(errors.InputParseError):
        parse_lattice([1, 2])


def test_hyperbolic_scaling():
    assert hyperbolic_plane(2).gram == ((0, 2), (2, 0))


sym3 = st.lists(st.integers(-4, 4), min_size=6, max_size=6).map(
    lambda e: [[e[0], e[1], e[2]], [e[1], e[3], e[4]], [e[2], e[4], e[5]]])


@settings(max_examples=80)
@given(sym3, st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_q_matches_double_loop(gram, v):
    if sympy.Matrix(gram).det() == 0:
        return
    L = make_lattice(gram)
    assert L.q(v) == naive_q(gram, v)


@settings(max_examples=80)
@given(sym3)
def test_signature_matches_eigenvalues(gram):
    M = sympy.Matrix(gram)
    if M.det() == 0:
        return
    L = make_lattice(gram)
    ev = [complex(x).real for x in M.eigenvals(multiple=True)]
    assert L.signature.as_pair() == (sum(x > 0 for x in ev), sum(x < 0 for x in ev))


@settings(max_examples=50)
@given(st.sampled_from(sorted(SMALL_LATTICES)), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_complement_is_orthogonal(name, v):
    L = SMALL_LATTICES[name]
    v = tuple(v[: L.rank])
    if not any(v):
        return
    C = orthogonal_complement(L, [v])
    assert C.rank == L.rank - 1
    assert all(L.b(v, w) == 0 for w in C.basis)
