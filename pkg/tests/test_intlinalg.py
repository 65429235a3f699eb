"""Exact integer linear algebra: frozen examples and algebraic properties.

The Smith normal form diagonal, determinants, and characteristic polynomials
are cross-checked against sympy, which serves as an independent oracle here;
the transform pair (U, V) has no sympy counterpart and is checked against its
defining identities instead.
"""

from __future__ import annotations

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.matrices.normalforms import smith_normal_form as sympy_snf

from nccwkit.intlinalg import (
    AbelianGroup,
    IntMatrix,
    char_poly,
    char_poly_str,
    determinant,
    eval_poly,
    is_surjective,
    kernel_and_cokernel,
    smith_normal_form,
    snf_diagonal,
)


def _small_matrices(max_dim: int = 5, max_abs: int = 9):
    return st.integers(1, max_dim).flatmap(
        lambda r: st.integers(1, max_dim).flatmap(
            lambda c: st.lists(
                st.lists(st.integers(-max_abs, max_abs), min_size=c, max_size=c),
                min_size=r,
                max_size=r,
            ).map(IntMatrix.from_rows)
        )
    )


# ---------------------------------------------------------------- examples


def test_snf_gcd_row():
    u, d, v = smith_normal_form(IntMatrix.from_rows([[3, -2]]))
    assert d.to_rows() == [[1, 0]]
    assert u @ IntMatrix.from_rows([[3, -2]]) @ v == d


def test_snf_zero_matrix():
    m = IntMatrix.zeros(2, 2)
    u, d, v = smith_normal_form(m)
    assert d == IntMatrix.zeros(2, 2)
    assert u == IntMatrix.identity(2)
    assert v == IntMatrix.identity(2)


def test_snf_divisor_chain_example():
    d = snf_diagonal(IntMatrix.from_rows([[2, 4], [6, 8]]))
    assert d == [2, 4]


def test_surjectivity_examples():
    assert is_surjective(IntMatrix.from_rows([[3, -2]]))
    assert is_surjective(IntMatrix.identity(4))
    assert not is_surjective(IntMatrix.from_rows([[2]]))


def test_kernel_cokernel_examples():
    basis, coker = kernel_and_cokernel(IntMatrix.from_rows([[3, -2]]))
    assert basis == ((2, 3),)
    assert coker.is_trivial

    basis, coker = kernel_and_cokernel(IntMatrix.from_rows([[0]]))
    assert basis == ((1,),)
    assert coker == AbelianGroup(free_rank=1)

    basis, coker = kernel_and_cokernel(IntMatrix.from_rows([[1, -1]]))
    assert basis == ((1, 1),)
    assert coker.is_trivial


def test_char_poly_examples():
    assert char_poly(IntMatrix.from_rows([[0, 1], [1, 1]])) == (-1, -1, 1)
    assert char_poly(IntMatrix.identity(2)) == (1, -2, 1)
    companion = IntMatrix.from_rows([[0, 1, 0], [0, 0, 1], [1, 1, 0]])
    assert char_poly(companion) == (-1, -1, 0, 1)


def test_char_poly_rejects_nonsquare():
    import pytest

    with pytest.raises(ValueError):
        char_poly(IntMatrix.from_rows([[1, 2]]))


def test_char_poly_str():
    assert char_poly_str((-1, -1, 1)) == "t^2 - t - 1"
    assert char_poly_str((1, -2, 1)) == "t^2 - 2*t + 1"
    assert char_poly_str((0,)) == "0"
    assert char_poly_str((-1, 0, -1, 0, 0, 1)) == "t^5 - t^2 - 1"


def test_abelian_group_formatting():
    assert str(AbelianGroup(0)) == "0"
    assert str(AbelianGroup(1)) == "Z"
    assert str(AbelianGroup(2, (2, 6))) == "Z^2 x Z/2 x Z/6"
    assert AbelianGroup(0, (2, 4)).torsion_order == 8


def test_abelian_group_rejects_bad_factors():
    import pytest

    with pytest.raises(ValueError):
        AbelianGroup(0, (1,))
    with pytest.raises(ValueError):
        AbelianGroup(0, (4, 2))


# ---------------------------------------------------------------- properties


@settings(max_examples=150, deadline=None)
@given(_small_matrices())
def test_snf_postconditions(m):
    u, d, v = smith_normal_form(m)
    assert u @ m @ v == d
    assert abs(determinant(u)) == 1
    assert abs(determinant(v)) == 1
    diag = [d.at(t, t) for t in range(min(m.rows, m.cols))]
    nonzero = [x for x in diag if x != 0]
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))


@settings(max_examples=150, deadline=None)
@given(_small_matrices())
def test_snf_diagonal_matches_sympy(m):
    ours = [x for x in snf_diagonal(m) if x != 0]
    theirs = sympy_snf(sympy.Matrix(m.to_rows()))
    sympy_diag = [
        abs(int(theirs[t, t])) for t in range(min(m.rows, m.cols)) if theirs[t, t] != 0
    ]
    assert ours == sympy_diag


@settings(max_examples=100, deadline=None)
@given(_small_matrices(max_dim=4))
def test_square_snf_product_is_abs_det(m):
    if not m.is_square:
        return
    nonzero = [x for x in snf_diagonal(m) if x != 0]
    prod = 1
    for x in nonzero:
        prod *= x
    det = determinant(m)
    if det == 0:
        assert len(nonzero) < m.rows
    else:
        assert prod == abs(det)


@settings(max_examples=150, deadline=None)
@given(_small_matrices())
def test_kernel_cokernel_consistency(m):
    basis, coker = kernel_and_cokernel(m)
    assert all(all(x == 0 for x in m.apply(vec)) for vec in basis)
    nonzero = [x for x in snf_diagonal(m) if x != 0]
    assert m.cols == len(basis) + len(nonzero)
    # the torsion order is the product of the diagonal entries > 1
    expected = 1
    for x in nonzero:
        if x > 1:
            expected *= x
    assert coker.torsion_order == expected
    assert coker.free_rank == m.rows - len(nonzero)


@settings(max_examples=100, deadline=None)
@given(_small_matrices(max_dim=4))
def test_determinant_matches_sympy(m):
    if not m.is_square:
        return
    assert determinant(m) == int(sympy.Matrix(m.to_rows()).det())


@settings(max_examples=75, deadline=None)
@given(_small_matrices(max_dim=4, max_abs=6))
def test_char_poly_matches_sympy(m):
    if not m.is_square:
        return
    ours = char_poly(m)
    t = sympy.Symbol("t")
    theirs = sympy.Matrix(m.to_rows()).charpoly(t).all_coeffs()  # highest first
    assert list(ours) == [int(c) for c in reversed(theirs)]


@settings(max_examples=50, deadline=None)
@given(_small_matrices(max_dim=4, max_abs=6), st.integers(-3, 3))
def test_char_poly_evaluation(m, x):
    if not m.is_square:
        return
    coeffs = char_poly(m)
    shifted = IntMatrix.from_rows(
        [
            [x * (1 if i == j else 0) - m.at(i, j) for j in range(m.cols)]
            for i in range(m.rows)
        ]
    )
    assert eval_poly(coeffs, x) == determinant(shifted)
