import itertools

import pytest
from hypothesis import given, strategies as st

from jordan2local.matrix import (
    EmptySubset, EqualIndices, HermitianMatrix, IndexOutOfRange, NotSelfAdjoint,
    ShapeMismatch, adjoint, commutator, component, corner_compress, corner_embed,
    from_rows, hermitian_spanning_set, identity, is_self_adjoint, is_skew_adjoint,
    jordan_product, matrix_unit, peirce, skew_spanning_set, sym_unit, zeros,
)
from jordan2local.ring import GAUSSIAN, RATIONAL, RingValue, prime_field
from jordan2local.sampling import random_hermitian, random_matrix, random_skew
from conftest import matrices

Q = RATIONAL


def test_matrix_units():
    assert matrix_unit(Q, 2, 1, 2) == from_rows(Q, [[0, 1], [0, 0]])
    assert matrix_unit(Q, 2, 2, 2) == from_rows(Q, [[0, 0], [0, 1]])
    assert matrix_unit(Q, 1, 1, 1) == from_rows(Q, [[1]])
    with pytest.raises(IndexOutOfRange):
        matrix_unit(Q, 2, 3, 1)


def test_sym_unit():
    assert sym_unit(Q, 2, 1, 2) == from_rows(Q, [[0, 1], [1, 0]])
    s = sym_unit(GAUSSIAN, 3, 1, 3)
    assert s == matrix_unit(GAUSSIAN, 3, 1, 3) + matrix_unit(GAUSSIAN, 3, 3, 1)
    with pytest.raises(EqualIndices):
        sym_unit(Q, 2, 1, 1)


def test_adjoint_examples():
    assert adjoint(from_rows(GAUSSIAN, [["i"]])) == from_rows(GAUSSIAN, [["-i"]])
    assert adjoint(from_rows(Q, [[1, 2], [3, 4]])) == from_rows(Q, [[1, 3], [2, 4]])


def test_jordan_product_examples():
    # values from oracles.jordan
    e11, s12 = matrix_unit(Q, 2, 1, 1), sym_unit(Q, 2, 1, 2)
    assert jordan_product(e11, s12) == from_rows(Q, [[0, "1/2"], ["1/2", 0]])
    assert jordan_product(s12, s12) == identity(Q, 2)


def test_commutator_examples():
    e11, s12 = matrix_unit(Q, 2, 1, 1), sym_unit(Q, 2, 1, 2)
    k = matrix_unit(Q, 2, 1, 2) - matrix_unit(Q, 2, 2, 1)
    assert commutator(s12, e11) == from_rows(Q, [[0, -1], [1, 0]])
    assert commutator(k, s12) == from_rows(Q, [[2, 0], [0, -2]])


def test_shape_mismatch():
    with pytest.raises(ShapeMismatch):
        commutator(identity(Q, 2), identity(Q, 3))


def test_peirce_examples():
    a = from_rows(Q, [[1, 2], [3, 4]])
    assert peirce(a, 1, 2) == from_rows(Q, [[0, 2], [0, 0]])
    assert component(a, 2, 1) == RingValue.of(Q, 3)
    assert peirce(matrix_unit(Q, 2, 1, 1), 2, 2).is_zero()


def test_adjointness_predicates():
    assert is_self_adjoint(sym_unit(Q, 2, 1, 2))
    assert is_skew_adjoint(matrix_unit(Q, 2, 1, 2) - matrix_unit(Q, 2, 2, 1))
    ie11 = from_rows(GAUSSIAN, [["i", 0], [0, 0]])
    assert not is_self_adjoint(ie11) and is_skew_adjoint(ie11)


def test_hermitian_validated():
    with pytest.raises(NotSelfAdjoint):
        HermitianMatrix(Q, 2, [[0, 1], [0, 0]])


@pytest.mark.parametrize("ring, n, size", [
    (Q, 2, 3), (GAUSSIAN, 2, 4), (Q, 1, 1), (GAUSSIAN, 3, 9), (prime_field(101), 4, 10),
])
def test_spanning_set_sizes(ring, n, size):
    # Hermitian dimension over the fixed field (oracles.hermitian_dimension)
    span = hermitian_spanning_set(ring, n)
    assert len(span) == size
    assert all(is_self_adjoint(b) for b in span)
    assert all(is_skew_adjoint(b) for b in skew_spanning_set(ring, n))


def test_spanning_set_rational_2():
    assert hermitian_spanning_set(Q, 2) == [matrix_unit(Q, 2, 1, 1), matrix_unit(Q, 2, 2, 2), sym_unit(Q, 2, 1, 2)]


def test_corner_examples():
    a = from_rows(Q, [[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert corner_compress(a, [1, 2]) == from_rows(Q, [[1, 2], [4, 5]])
    assert corner_compress(identity(Q, 4), [2, 4]) == identity(Q, 2)
    assert corner_compress(sym_unit(Q, 3, 1, 3), [1, 2]).is_zero()
    with pytest.raises(EmptySubset):
        corner_compress(a, [])


@given(matrices("herm"), matrices("herm"))
def test_jordan_product_closed_in_hermitian(x, y):
    if (x.ring, x.n) != (y.ring, y.n):
        y = x
    assert is_self_adjoint(jordan_product(x, y))
    assert jordan_product(x, y) == jordan_product(y, x)


@given(matrices(n_st=st.integers(1, 5)))
def test_adjoint_reverses_products(a):
    b = adjoint(a) + a
    assert adjoint(a @ b) == adjoint(b) @ adjoint(a)
    assert adjoint(adjoint(a)) == a
    assert jordan_product(a, identity(a.ring, a.n)) == a


@given(matrices())
def test_peirce_completeness(a):
    total = zeros(a.ring, a.n)
    for i, j in itertools.product(range(1, a.n + 1), repeat=2):
        total = total + peirce(a, i, j)
    assert total == a
    assert commutator(a, a).is_zero()


@given(matrices("herm"), matrices("herm"))
def test_commutator_of_hermitian_is_skew(x, y):
    if (x.ring, x.n) != (y.ring, y.n):
        y = adjoint(x @ x) + x
    assert is_skew_adjoint(commutator(x, y))


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_unit_products_exhaustive(n):
    idx = range(1, n + 1)
    for i, k, l in itertools.product(idx, repeat=3):
        expect = matrix_unit(Q, n, i, l) if i == k else zeros(Q, n)
        assert matrix_unit(Q, n, i, i) @ matrix_unit(Q, n, k, l) == expect


@given(matrices("herm", n_st=st.integers(3, 5)))
def test_corner_is_homomorphism_on_corner(x):
    idx = [1, x.n]
    a = corner_embed(corner_compress(x, idx), idx, x.n)
    assert corner_compress(a @ a, idx) == corner_compress(a, idx) @ corner_compress(a, idx)


@given(st.data(), st.sampled_from(["any", "herm", "skew"]), st.sampled_from(["any", "herm", "skew"]))
def test_products_match_definition_for_every_symmetry(data, ka, kb):
    gen = {"any": random_matrix, "herm": random_hermitian, "skew": random_skew}
    a = data.draw(matrices(ka))
    rng = data.draw(st.randoms(use_true_random=False))
    b = gen[kb](rng, a.ring, a.n)
    assert commutator(a, b) == a @ b - b @ a
    assert jordan_product(a, b) == (a @ b + b @ a).scale(a.ops.half)
