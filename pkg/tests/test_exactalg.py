import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from _oracles import determinantal_invariants, rational_det, small_lattice
from unitedk.exactalg import (
    IntMatrix,
    hermite_normal_form,
    kernel_lattice,
    lattice_member,
    smith_normal_form,
    solve_integer,
)


@st.composite
def matrices(draw, max_dim=5, lo=-9, hi=9):
    m = draw(st.integers(0, max_dim))
    n = draw(st.integers(0, max_dim))
    rows = draw(st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                         min_size=m, max_size=m))
    return IntMatrix(rows, m, n)


def is_hermite(H: IntMatrix) -> bool:
    last = -1
    seen_zero = False
    for i in range(H.rows):
        row = H.row(i)
        nz = [j for j, v in enumerate(row) if v]
        if not nz:
            seen_zero = True
            continue
        if seen_zero:
            return False
        p = nz[0]
        if p <= last or row[p] <= 0:
            return False
        if any(not 0 <= H[k, p] < row[p] for k in range(i)):
            return False
        last = p
    return True


# -- matrix basics ---------------------------------------------------------------

def test_zero_dimensional_shapes():
    A = IntMatrix.zeros(3, 0)
    B = IntMatrix.zeros(0, 2)
    assert (A @ B).shape == (3, 2)
    assert (A @ B).is_zero()
    assert (B @ IntMatrix.zeros(2, 0)).shape == (0, 0)
    assert IntMatrix.identity(0).det() == 1


def test_constructor_rejects_ragged_rows():
    with pytest.raises(ValueError):
        IntMatrix([[1, 2], [3]])


def test_products_and_transpose():
    A = IntMatrix([[1, 2], [3, 4]])
    assert (A @ IntMatrix.identity(2)) == A
    assert A.T.tolist() == [[1, 3], [2, 4]]
    assert A.det() == -2
    assert IntMatrix([[2, 1], [1, 1]]).inverse() == IntMatrix([[1, -1], [-1, 2]])


def test_inverse_rejects_non_unimodular():
    with pytest.raises(ValueError):
        IntMatrix([[2, 0], [0, 1]]).inverse()


# -- Smith normal form -----------------------------------------------------------

def test_snf_identity():
    s = smith_normal_form(IntMatrix.identity(2))
    assert s.D == IntMatrix.identity(2)


def test_snf_two_by_two_example():
    s = smith_normal_form(IntMatrix([[2, 4], [6, 8]]))
    assert s.D == IntMatrix.diagonal([2, 4])
    assert s.invariants == [2, 4]


def test_snf_zero_matrix():
    s = smith_normal_form(IntMatrix.zeros(3, 2))
    assert s.D == IntMatrix.zeros(3, 2)
    assert s.rank == 0


def test_snf_is_deterministic():
    A = IntMatrix([[3, -7, 2], [4, 0, 6], [-1, 5, 5]])
    a, b = smith_normal_form(A), smith_normal_form(A)
    assert (a.D, a.U, a.V) == (b.D, b.U, b.V)


@given(matrices())
def test_snf_decomposition(A):
    s = smith_normal_form(A)
    assert s.U @ A @ s.V == s.D
    assert abs(s.U.det()) == 1 and abs(s.V.det()) == 1
    d = [s.D[i, i] for i in range(min(A.shape))]
    nonzero = [x for x in d if x]
    assert all(x > 0 for x in nonzero)
    assert d == nonzero + [0] * (len(d) - len(nonzero))
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    for i in range(A.rows):
        for j in range(A.cols):
            if i != j:
                assert s.D[i, j] == 0


@given(matrices(max_dim=4))
def test_snf_matches_determinantal_divisors(A):
    s = smith_normal_form(A)
    expected = determinantal_invariants(A.tolist())
    assert [d for d in s.invariants if d] == expected
    assert s.rank == len(expected)


@given(matrices(max_dim=4).filter(lambda A: A.rows == A.cols))
def test_abs_det_is_product_of_invariants(A):
    det = rational_det(A.tolist())
    s = smith_normal_form(A)
    if det:
        prod = 1
        for x in s.invariants:
            prod *= x
        assert abs(det) == prod
        assert A.det() == det


# -- Hermite normal form ---------------------------------------------------------

def test_hnf_identity():
    H, U = hermite_normal_form(IntMatrix.identity(3))
    assert H == IntMatrix.identity(3)


def test_hnf_moves_pivot_up():
    H, U = hermite_normal_form(IntMatrix([[0], [3]]))
    assert H == IntMatrix([[3], [0]])
    assert U @ IntMatrix([[0], [3]]) == H


def test_hnf_pivot_found_by_enumeration():
    rows = [[2, 1], [0, 2]]
    H, U = hermite_normal_form(IntMatrix(rows))
    lattice = small_lattice(rows, 4)
    # smallest positive first coordinate in the row lattice is the first pivot
    first = min(v[0] for v in lattice if v[0] > 0)
    assert H[0, 0] == first == 2
    assert H == IntMatrix(rows)


@given(matrices())
def test_hnf_properties(A):
    H, U = hermite_normal_form(A)
    assert U @ A == H
    assert abs(U.det()) == 1
    assert is_hermite(H)
    # same row lattice both ways
    for i in range(A.rows):
        assert lattice_member(H.T, A.row(i))
        assert lattice_member(A.T, H.row(i))


# -- solving and membership ------------------------------------------------------

def test_lattice_member_examples():
    assert lattice_member(IntMatrix.identity(2), (5, -7))
    assert not lattice_member(IntMatrix([[2], [0]]), (1, 0))
    basis = IntMatrix.from_columns([(2, 0), (1, 1)], 2)
    assert lattice_member(basis, (3, 1))
    assert (3, 1) in {(2 * a + b, b) for a in range(-3, 4) for b in range(-3, 4)}


def test_lattice_member_dimension_mismatch():
    with pytest.raises(ValueError):
        lattice_member(IntMatrix.identity(2), (1, 2, 3))


@given(matrices(max_dim=3, lo=-4, hi=4), st.data())
def test_solve_integer_against_enumeration(A, data):
    b = tuple(data.draw(st.integers(-6, 6)) for _ in range(A.rows))
    x = solve_integer(A, b)
    if x is not None:
        assert A.apply(x) == b
    else:
        # no small solution either
        for cand in itertools.product(range(-6, 7), repeat=A.cols):
            assert A.apply(cand) != b


def test_kernel_examples():
    assert kernel_lattice(IntMatrix([[2]])).shape == (1, 0)
    assert kernel_lattice(IntMatrix.zeros(1, 3)).cols == 3
    K = kernel_lattice(IntMatrix([[1, 1]]))
    assert K.cols == 1 and K.column(0) in {(1, -1), (-1, 1)}


@given(matrices(max_dim=3, lo=-5, hi=5))
def test_kernel_is_complete(A):
    K = kernel_lattice(A)
    assert K.rows == A.cols
    for col in K.columns():
        assert all(v == 0 for v in A.apply(col))
    for x in itertools.product(range(-3, 4), repeat=A.cols):
        if all(v == 0 for v in A.apply(x)):
            assert lattice_member(K, x)
    # a basis: full column rank
    assert smith_normal_form(K).rank == K.cols
