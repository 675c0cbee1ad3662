from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phl.exactlin import GF, QQ, Mat, Quotient, Subspace, invertible_in_span, solve


F2 = GF(2)
F5 = GF(5)


def mat(field, rows):
    return Mat(field, [[field.of(x) for x in r] for r in rows])


def qmat(rows):
    return Mat(QQ, [[Fraction(x) for x in r] for r in rows])


# --- oracle: adjugate inverse by cofactor expansion -----------------------


def det_cofactor(M):
    n = M.nrows
    if n == 0:
        return M.field.one
    if n == 1:
        return M[0, 0]
    f = M.field
    total = f.zero
    for j in range(n):
        minor = M.submatrix(range(1, n), [c for c in range(n) if c != j])
        term = f.mul(M[0, j], det_cofactor(minor))
        total = f.add(total, term) if j % 2 == 0 else f.sub(total, term)
    return total


def adjugate_solve(A, b):
    d = det_cofactor(A)
    assert d != A.field.zero
    n = A.nrows
    out = []
    for i in range(n):
        cols = [list(A.col(j)) for j in range(n)]
        cols[i] = list(b)
        Ai = Mat.from_cols(A.field, cols)
        out.append(A.field.div(det_cofactor(Ai), d))
    return tuple(out)


# --- solve -----------------------------------------------------------------


def test_solve_identity():
    A = Mat.identity(QQ, 3)
    x, K = solve(A, (0, 1, 0))
    assert x == (0, 1, 0)
    assert K.nrows == 0


def test_solve_f2_underdetermined():
    A = mat(F2, [[1, 1]])
    x, K = solve(A, (0,))
    assert x == (0, 0)
    assert K.rows == ((1, 1),)


def test_solve_matches_adjugate_oracle():
    A = qmat([[2, 1, 0], [1, 3, 1], [0, 1, 1]])
    b = (Fraction(1), Fraction(0), Fraction(2))
    x, K = solve(A, b)
    assert K.nrows == 0
    assert x == adjugate_solve(A, b)
    assert A.apply(x) == b


def test_solve_inconsistent():
    A = qmat([[1, 0], [1, 0]])
    x, K = solve(A, (1, 2))
    assert x is None
    assert K.nrows == 1


def test_solve_dim_mismatch():
    with pytest.raises(ValueError):
        solve(qmat([[1, 0]]), (1, 2))


# --- rank / kernel ----------------------------------------------------------


def test_rank_zero_and_identity():
    assert Mat.zero(QQ, 3, 4).rank() == 0
    assert Mat.identity(F5, 4).rank() == 4


def test_rank_nullity():
    A = mat(F5, [[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert A.rank() + A.right_kernel().nrows == A.ncols


def test_kernel_is_echelonized_and_exact():
    A = qmat([[1, 2, 3, 4]])
    K = A.right_kernel()
    assert K.nrows == 3
    for row in K.rows:
        assert all(v == 0 for v in A.apply(row))


scalars_qq = st.builds(
    Fraction, st.integers(-6, 6), st.integers(1, 4)
)


@settings(max_examples=60, deadline=None)
@given(
    st.integers(2, 4),
    st.integers(2, 4),
    st.data(),
)
def test_rank_nullity_property_qq(n, m, data):
    rows = data.draw(
        st.lists(st.lists(scalars_qq, min_size=m, max_size=m), min_size=n, max_size=n)
    )
    A = Mat(QQ, rows, m)
    assert A.rank() + A.right_kernel().nrows == m
    x, K = solve(A, A.apply([1] * m))
    assert x is not None
    assert A.apply(x) == A.apply([1] * m)


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 4), st.integers(2, 4), st.data())
def test_rref_idempotent_f5(n, m, data):
    rows = data.draw(
        st.lists(
            st.lists(st.integers(0, 4), min_size=m, max_size=m), min_size=n, max_size=n
        )
    )
    A = mat(F5, rows)
    R, piv = A.rref()
    R2, piv2 = R.rref()
    assert R == R2 and piv == piv2


# --- invertible_in_span ------------------------------------------------------


def test_span_identity():
    got, conclusive = invertible_in_span([Mat.identity(QQ, 2)], seed=0)
    assert conclusive and got is not None and got.is_invertible()


def test_span_diag_units_f2():
    e11 = mat(F2, [[1, 0], [0, 0]])
    e22 = mat(F2, [[0, 0], [0, 1]])
    got, conclusive = invertible_in_span([e11, e22], seed=1)
    assert conclusive and got == mat(F2, [[1, 0], [0, 1]])


def test_span_nilpotent_none():
    e12 = mat(F2, [[0, 1], [0, 0]])
    got, conclusive = invertible_in_span([e12], seed=2)
    assert got is None and conclusive


def test_span_nilpotent_qq_inconclusive():
    e12 = qmat([[0, 1], [0, 0]])
    got, conclusive = invertible_in_span([e12], seed=3, tries=8)
    assert got is None and not conclusive


# --- subspace / quotient ------------------------------------------------------


def test_subspace_membership_coords():
    S = Subspace(QQ, 3, [[1, 0, 1], [0, 1, 0]])
    assert S.contains((2, 3, 2))
    assert S.coords((2, 3, 2)) == (2, 3)
    assert not S.contains((1, 0, 0))


def test_subspace_intersection():
    U = Subspace(QQ, 3, [[1, 0, 0], [0, 1, 0]])
    V = Subspace(QQ, 3, [[0, 1, 0], [0, 0, 1]])
    W = U.intersect(V)
    assert W.dim == 1 and W.contains((0, 1, 0))


def test_quotient_projection_section():
    S = Subspace(QQ, 3, [[1, 1, 0]])
    Q = Quotient(S)
    assert Q.dim == 2
    assert (Q.proj * Q.sec).is_identity()
    assert all(v == 0 for v in Q.proj.apply((1, 1, 0)))


def test_inverse_roundtrip():
    A = qmat([[2, 1], [1, 1]])
    Ainv = A.inverse()
    assert (A * Ainv).is_identity()
    assert qmat([[1, 1], [1, 1]]).inverse() is None
