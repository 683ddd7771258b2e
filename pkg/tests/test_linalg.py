from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from blowup.linalg import (
    GF,
    QQ,
    ZZ,
    ZMod,
    as_matrix,
    cohomology_group,
    field_kernel,
    field_rank,
    field_rref,
    field_solve,
    identity,
    induced_matrix,
    integer_kernel,
    integer_solve,
    sparse_kernel,
    sparse_solve,
    invariant_factors_via_minors,
    mat_eq,
    mat_mul,
    smith_normal_form,
    zeros,
)

small_int = st.integers(min_value=-9, max_value=9)

matrices = st.integers(min_value=1, max_value=4).flatmap(
    lambda m: st.integers(min_value=1, max_value=4).flatmap(
        lambda n: st.lists(
            st.lists(small_int, min_size=n, max_size=n), min_size=m, max_size=m
        ).map(as_matrix)
    )
)


def test_snf_frozen_values():
    # gcd of 1x1 minors is 1, determinant 6
    snf = smith_normal_form(as_matrix([[2, 0], [0, 3]]))
    assert snf.diagonal == [1, 6]
    # singular: det = 0, so second factor vanishes
    snf = smith_normal_form(as_matrix([[4, 6], [6, 9]]))
    assert snf.diagonal == [1, 0]
    snf = smith_normal_form(as_matrix([[2, 4], [4, 8]]))
    assert snf.diagonal == [2, 0]
    assert smith_normal_form(zeros(2, 3)).diagonal == [0, 0]


def test_minor_gcd_oracle_frozen():
    assert invariant_factors_via_minors(as_matrix([[2, 0], [0, 3]])) == [1, 6]
    assert invariant_factors_via_minors(as_matrix([[4, 6], [6, 9]])) == [1]
    assert invariant_factors_via_minors(as_matrix([[6, 0], [0, 10]])) == [2, 30]


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_transforms(A):
    snf = smith_normal_form(A)
    assert mat_eq(snf.D, mat_mul(mat_mul(snf.U, A), snf.V))
    assert mat_eq(mat_mul(snf.U, snf.Uinv), identity(A.shape[0]))
    assert mat_eq(mat_mul(snf.V, snf.Vinv), identity(A.shape[1]))
    diag = snf.diagonal
    assert all(d >= 0 for d in diag)
    for a, b in zip(diag, diag[1:]):
        assert b == 0 or (a != 0 and b % a == 0)
    # off-diagonal of D vanishes
    for i in range(snf.D.shape[0]):
        for j in range(snf.D.shape[1]):
            if i != j:
                assert snf.D[i, j] == 0


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_snf_matches_minor_gcds(A):
    snf = smith_normal_form(A)
    assert snf.invariant_factors == invariant_factors_via_minors(A)


def test_snf_matches_minor_gcds_5x5():
    rng = np.random.default_rng(20240817)
    for _ in range(5):
        A = as_matrix(rng.integers(-6, 7, size=(5, 5)).tolist())
        assert smith_normal_form(A).invariant_factors == invariant_factors_via_minors(A)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_integer_kernel_is_saturated(A):
    K = integer_kernel(A)
    prod = mat_mul(A, K)
    assert all(prod[i, j] == 0 for i in range(prod.shape[0]) for j in range(prod.shape[1]))
    assert K.shape[1] == A.shape[1] - smith_normal_form(A).rank
    if K.shape[1]:
        assert all(f == 1 for f in smith_normal_form(K).invariant_factors)


@settings(max_examples=40, deadline=None)
@given(matrices, st.lists(small_int, min_size=4, max_size=4))
def test_integer_solve_roundtrip(A, xs):
    x = as_matrix([[v] for v in xs[: A.shape[1]]])
    b = mat_mul(A, x)
    y = integer_solve(A, b)
    assert y is not None
    assert mat_eq(mat_mul(A, y), b)


def test_integer_solve_unsolvable():
    A = as_matrix([[2]])
    assert integer_solve(A, as_matrix([[3]])) is None
    assert integer_solve(zeros(1, 1), as_matrix([[1]])) is None


def test_field_rref_gf2():
    F2 = GF(2)
    R, pivots = field_rref(as_matrix([[1, 1, 0], [1, 1, 1]]), F2)
    assert pivots == [0, 2]
    assert [list(R[i]) for i in range(2)] == [[1, 1, 0], [0, 0, 1]]
    assert field_rank(as_matrix([[2, 4], [1, 1]]), F2) == 1


def test_field_kernel_and_solve():
    F5 = GF(5)
    A = as_matrix([[1, 2, 3], [2, 4, 6]])
    K = field_kernel(A, F5)
    assert K.shape == (3, 2)
    prod = mat_mul(A, K)
    assert all(F5.convert(prod[i, j]) == 0 for i in range(2) for j in range(2))
    b = as_matrix([[1], [2]])
    x = field_solve(A, b, F5)
    prod = mat_mul(A, x)
    assert [F5.convert(prod[i, 0]) for i in range(2)] == [1, 2]
    assert field_solve(as_matrix([[1], [1]]), as_matrix([[0], [1]]), QQ) is None


def test_rationals_use_fractions():
    from fractions import Fraction

    A = as_matrix([[2, 1], [0, 3]])
    x = field_solve(A, as_matrix([[1], [1]]), QQ)
    assert x[0, 0] == Fraction(1, 3) and x[1, 0] == Fraction(1, 3)


def test_cohomology_circle_over_Z():
    # two vertices, two edges glued into a circle: d(e) = head - tail
    d0 = as_matrix([[-1, 1], [1, -1]])  # C^0 -> C^1
    h0 = cohomology_group(ZZ, d_out=d0, d_in=None)
    h1 = cohomology_group(ZZ, d_out=None, d_in=d0)
    assert (h0.free_rank, h0.torsion) == (1, ())
    assert (h1.free_rank, h1.torsion) == (1, ())
    assert h0.describe() == "Z" and h1.describe() == "Z"


def test_cohomology_torsion():
    # 0 -> Z --2--> Z -> 0 has cokernel Z/2 in degree one
    d = as_matrix([[2]])
    h0 = cohomology_group(ZZ, d_out=d, d_in=None)
    h1 = cohomology_group(ZZ, d_out=None, d_in=d)
    assert h0.is_trivial()
    assert (h1.free_rank, h1.torsion) == (0, (2,))
    assert h1.describe() == "Z/2"
    # same complex over F_2: both groups are one-dimensional
    h0 = cohomology_group(GF(2), d_out=d, d_in=None)
    h1 = cohomology_group(GF(2), d_out=None, d_in=d)
    assert h0.free_rank == 1 and h1.free_rank == 1


def test_cohomology_coordinates():
    d0 = as_matrix([[-1, 1], [1, -1]])
    h1 = cohomology_group(ZZ, d_out=None, d_in=d0)
    gen = h1.generators[:, 0]
    assert h1.coordinates(gen) == [1]
    shifted = gen + d0[:, 0]
    assert h1.coordinates(np.asarray(shifted, dtype=object)) == [1]
    doubled = np.asarray([2 * v for v in gen], dtype=object)
    assert h1.coordinates(doubled) == [2]


def test_torsion_coordinates():
    d = as_matrix([[2]])
    h1 = cohomology_group(ZZ, d_out=None, d_in=d)
    g = h1.generators[:, 0]
    assert h1.coordinates(g) == [1]
    assert h1.coordinates(np.asarray([2 * g[0]], dtype=object)) == [0]


def test_induced_matrix():
    d0 = as_matrix([[-1, 1], [1, -1]])
    h1 = cohomology_group(ZZ, d_out=None, d_in=d0)
    double = as_matrix([[2, 0], [0, 2]])
    M = induced_matrix(h1, h1, double)
    assert M.shape == (1, 1) and M[0, 0] == 2


def test_cohomology_empty_degree():
    h = cohomology_group(ZZ, d_out=zeros(0, 0), d_in=None)
    assert h.is_trivial() and h.describe() == "0"


def test_ring_basics():
    F3 = GF(3)
    assert F3.convert(-1) == 2
    assert F3.invert(2) == 2
    with pytest.raises(ValueError):
        GF(6)
    R = ZMod(4)
    assert R.convert(7) == 3 and not R.is_field
    assert ZZ.convert(5) == 5
    with pytest.raises(ValueError):
        ZZ.convert(__import__("fractions").Fraction(1, 2))


# ---------------------------------------------------------------------------
# sparse elimination


def to_columns(A):
    cols = []
    for j in range(A.shape[1]):
        cols.append({i: int(A[i, j]) for i in range(A.shape[0]) if A[i, j] != 0})
    return cols


def lattices_equal(K1, K2):
    if K1.shape[1] != K2.shape[1]:
        return False
    return integer_solve(K1, K2) is not None and integer_solve(K2, K1) is not None


@given(
    st.integers(2, 4),
    st.integers(2, 4),
    st.data(),
)
@settings(max_examples=60, deadline=None)
def test_sparse_kernel_matches_dense(m, n, data):
    A = as_matrix(
        [
            [data.draw(st.integers(-4, 4)) for _ in range(n)]
            for _ in range(m)
        ]
    )
    K_sparse = sparse_kernel(to_columns(A), m, ZZ)
    K_dense = integer_kernel(A)
    assert mat_eq(mat_mul(A, K_sparse), zeros(m, K_sparse.shape[1]))
    assert lattices_equal(K_sparse, K_dense)


def test_sparse_kernel_saturated():
    A = as_matrix([[2, 4]])
    K = sparse_kernel(to_columns(A), 1, ZZ)
    assert K.shape == (2, 1)
    assert sorted(abs(int(v)) for v in K[:, 0]) == [1, 2]


def test_sparse_kernel_field():
    A = as_matrix([[1, 1, 0], [0, 1, 1]])
    K = sparse_kernel(to_columns(A), 2, GF(2))
    assert K.shape == (3, 1)
    assert all(int(v) == 1 for v in K[:, 0])


@given(
    st.integers(2, 4),
    st.integers(2, 4),
    st.data(),
)
@settings(max_examples=60, deadline=None)
def test_sparse_solve_matches_dense(m, n, data):
    A = as_matrix(
        [
            [data.draw(st.integers(-3, 3)) for _ in range(n)]
            for _ in range(m)
        ]
    )
    x = as_matrix([[data.draw(st.integers(-3, 3))] for _ in range(n)])
    b = mat_mul(A, x)[:, 0]
    rhs = {i: int(b[i]) for i in range(m) if b[i] != 0}
    got = sparse_solve(to_columns(A), m, rhs, ZZ)
    assert got is not None
    assert mat_eq(mat_mul(A, got.reshape(-1, 1)), b.reshape(-1, 1))


def test_sparse_solve_unsolvable():
    A = as_matrix([[2, 0], [0, 2]])
    assert sparse_solve(to_columns(A), 2, {0: 1}, ZZ) is None
    got = sparse_solve(to_columns(A), 2, {0: 1}, QQ)
    assert got is not None and got[0] == Fraction(1, 2)
