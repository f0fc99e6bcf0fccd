import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from qcohlab.exact_linalg import (
    QQ,
    Complex,
    MalformedComplexError,
    Matrix,
    PrimeField,
    Quotient,
    cohomology_dim,
    cohomology_dims,
    field_from_name,
    kernel_basis,
    rank,
    rref,
    solve,
)

F5 = PrimeField(5)


def matrices(max_rows=5, max_cols=5, lo=-3, hi=3):
    return st.integers(1, max_rows).flatmap(
        lambda r: st.integers(1, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c), min_size=r, max_size=r)
        )
    )


def brute_rank_fp(rows, p):
    """Rank over F_p as log_p of the size of the row space, by enumeration."""
    n = len(rows[0])
    span = set()
    for coeffs in itertools.product(range(p), repeat=len(rows)):
        span.add(tuple(sum(c * r[j] for c, r in zip(coeffs, rows)) % p for j in range(n)))
    k = 0
    while p ** k < len(span):
        k += 1
    assert p ** k == len(span)
    return k


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_plus_nullity_over_q(rows):
    m = Matrix.from_rows(QQ, rows)
    K = kernel_basis(m)
    assert rank(m) + K.cols == m.cols
    assert (m @ K).is_zero()
    assert rank(K) == K.cols


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_rank_matches_sympy(rows):
    assert rank(Matrix.from_rows(QQ, rows)) == sympy.Matrix(rows).rank()


@settings(max_examples=40, deadline=None)
@given(matrices(max_rows=3, max_cols=4, lo=0, hi=4))
def test_rank_over_f5_matches_enumeration(rows):
    assert rank(Matrix.from_rows(F5, rows)) == brute_rank_fp(rows, 5)


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_consistent_systems(rows, data):
    m = Matrix.from_rows(QQ, rows)
    x0 = data.draw(st.lists(st.integers(-4, 4), min_size=m.cols, max_size=m.cols))
    b = m.apply([Fraction(v) for v in x0])
    x = solve(m, b)
    assert x is not None
    assert m.apply(x) == b


def test_solve_inconsistent_returns_none():
    m = Matrix.from_rows(QQ, [[1, 1], [2, 2]])
    assert solve(m, [1, 3]) is None


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        solve(Matrix.from_rows(QQ, [[1, 0]]), [1, 2])


def test_rref_pivots_and_rows():
    rows, piv = rref(Matrix.from_rows(QQ, [[0, 2, 4], [1, 1, 1]]))
    assert piv == [0, 1]
    assert rows[1][1] == 1 and rows[0][1] == 0


def test_field_arithmetic():
    assert F5(Fraction(1, 2)) == 3
    assert F5.mul(3, 2) == 1
    assert F5.inv(2) == 3
    with pytest.raises(ZeroDivisionError):
        F5.inv(0)
    assert QQ.div(1, 3) == Fraction(1, 3)
    assert field_from_name("F7") == PrimeField(7)
    assert field_from_name("Q") == QQ
    with pytest.raises(ValueError):
        PrimeField(6)


def test_quotient_coords_kill_relations():
    Q = Quotient(QQ, 3, [(1, 1, 0)])
    assert Q.dim == 2
    assert Q.coords((1, 1, 0)) == (0, 0)
    a, b = Q.coords((1, 0, 0)), Q.coords((0, 1, 0))
    assert tuple(x + y for x, y in zip(a, b)) == Q.coords((1, 1, 0)) or a == tuple(-y for y in b)
    assert Q.coords(Q.lift((2, 5))) == (2, 5)


def _complex(fld, dims, diffs):
    return Complex(fld, tuple(dims), tuple(Matrix.from_rows(fld, d, cols) for d, cols in zip(diffs, dims)))


def test_cohomology_of_interval_complex():
    # Q -> Q^2 -> Q with d0 = (1,1)^T and d1 = (1,-1): exact in the middle
    c = Complex(QQ, (1, 2, 1), (Matrix.from_rows(QQ, [[1], [1]]), Matrix.from_rows(QQ, [[1, -1]])))
    assert cohomology_dims(c) == {0: 0, 1: 0, 2: 0}


def test_cohomology_of_circle():
    # simplicial cochains of a triangle boundary: h^0 = h^1 = 1
    d0 = Matrix.from_rows(QQ, [[-1, 1, 0], [0, -1, 1], [-1, 0, 1]])
    c = Complex(QQ, (3, 3), (d0,))
    assert cohomology_dims(c) == {0: 1, 1: 1}
    assert cohomology_dim(c, 5) == 0


def test_malformed_complex_is_rejected():
    d = Matrix.from_rows(QQ, [[1]])
    c = Complex(QQ, (1, 1, 1), (d, d))
    with pytest.raises(MalformedComplexError):
        c.check()
    with pytest.raises(MalformedComplexError):
        cohomology_dim(c, 1)


def test_complex_shape_is_validated():
    with pytest.raises(ValueError):
        Complex(QQ, (1, 2), (Matrix.from_rows(QQ, [[1]]),))


def test_documented_small_cases():
    F2 = PrimeField(2)
    assert rank(Matrix.identity(F2, 2)) == 2
    assert rank(Matrix.zeros(QQ, 3, 4)) == 0
    assert rank(Matrix.from_rows(QQ, [[1, 2], [2, 4]])) == 1
    assert kernel_basis(Matrix.identity(QQ, 3)).cols == 0
    assert kernel_basis(Matrix.zeros(F2, 1, 3)).cols == 3
    assert kernel_basis(Matrix.from_rows(F2, [[1, 1]])).columns() == [(1, 1)]
    assert solve(Matrix.from_rows(QQ, [[2]]), [1]) == (Fraction(1, 2),)
    assert solve(Matrix.zeros(QQ, 1, 1), [1]) is None
    k = Complex(QQ, (1, 1, 1), (Matrix.zeros(QQ, 1, 1), Matrix.zeros(QQ, 1, 1)))
    assert cohomology_dim(k, 1) == 1
