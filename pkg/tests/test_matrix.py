from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from permlab import GaussianRational as G
from permlab import Matrix
from permlab.errors import DimensionError, DomainError, NotHermitianError
from permlab.matrix import (
    CorrelationMatrix,
    PartitionedView,
    constant_correlation,
    det,
    eigenvalues_hermitian,
    entrywise_abs,
    float_det_bound,
    gram_from_rows,
    hadamard,
    hadamard_power,
    is_correlation,
    is_doubly_stochastic,
    is_psd,
    kronecker,
    normalize_to_correlation,
    rank,
    submatrix_delete,
)
from permlab.numeric import cyclo_make

from strategies import as_complex_rows, det_bruteforce, gaussians, psd, square


@given(square())
def test_det_matches_leibniz(A):
    assert det(A) == det_bruteforce(A.rows)


@given(square(), square())
def test_det_multiplicative(A, B):
    if A.n == B.n:
        assert det(A @ B) == det(A) * det(B)


@given(square(max_n=3), square(max_n=3))
def test_kronecker_mixed_product(A, B):
    np_k = np.kron(np.array(as_complex_rows(A)), np.array(as_complex_rows(B)))
    K = kronecker(A, B)
    assert K.n == A.n * B.n
    assert np.allclose(np.array(as_complex_rows(K)), np_k)


@given(square(), st.data())
def test_hadamard_entrywise(A, data):
    B = data.draw(square(min_n=A.n, max_n=A.n))
    H = hadamard(A, B)
    assert all(H[i, j] == A[i, j] * B[i, j] for i in range(A.n) for j in range(A.n))
    assert hadamard_power(A, 3) == hadamard(hadamard(A, A), A)


def test_hadamard_size_mismatch():
    with pytest.raises(DimensionError):
        hadamard(Matrix.identity(2), Matrix.identity(3))


def test_field_join():
    A = Matrix([[1, 2], [3, 4]], "rational")
    B = Matrix([[G(0, 1), 0], [0, 1]], "gaussian")
    assert (A + B).field == "gaussian"
    C = Matrix([[cyclo_make(5, 1), 0], [0, 1]], "cycN:5")
    # i and zeta_5 both live in Q(zeta_20)
    S = B + C
    assert S.field == "cycN:20"
    assert S[0, 0] == cyclo_make(20, 5) + cyclo_make(20, 4)


def test_gram_from_rows_convention():
    u = [G(1, 1), G(2)]
    M = gram_from_rows([u])
    # (u* u)_jk = conj(u_j) u_k
    assert M[0, 1] == G(1, -1) * 2
    assert M.is_hermitian()


@given(psd())
def test_gram_matrices_are_psd(A):
    assert is_psd(A)
    ev = eigenvalues_hermitian(A)
    assert all(float(e.value.real) >= -e.radius for e in ev)


@given(psd(min_n=2))
def test_negative_shift_not_psd(A):
    B = A - Matrix.identity(A.n, A.field).scale(A.trace() + 1)
    assert not is_psd(B)


def test_singular_psd_pivoting():
    A = Matrix([[0, 0, 0], [0, 1, 1], [0, 1, 1]], "rational")
    assert is_psd(A)
    B = Matrix([[0, 1], [1, 0]], "rational")
    r = is_psd(B)
    assert not r and "zero diagonal" in r.reason


def test_is_psd_requires_hermitian():
    with pytest.raises(NotHermitianError):
        is_psd(Matrix([[1, 2], [3, 4]], "rational"))


@given(psd(max_rank=2, min_n=2))
def test_rank_exact_vs_float(A):
    r = rank(A)
    assert r <= 2
    assert r == np.linalg.matrix_rank(np.array(as_complex_rows(A)), tol=1e-8 * max(1, np.abs(as_complex_rows(A)).max()))


def test_submatrix_delete_one_based():
    A = Matrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]], "rational")
    assert submatrix_delete(A, 1, 2) == Matrix([[4, 6], [7, 9]], "rational")


def test_partitioned_view():
    A = Matrix([[i * 4 + j for j in range(4)] for i in range(4)], "rational")
    P = PartitionedView(A, 2, 2)
    assert P.block(1, 0) == Matrix([[8, 9], [12, 13]], "rational")
    with pytest.raises(DimensionError):
        PartitionedView(A, 3, 1)


def test_correlation_validation():
    C = CorrelationMatrix([[1, Fraction(1, 2)], [Fraction(1, 2), 1]], "rational")
    assert is_correlation(C)
    with pytest.raises(DomainError):
        CorrelationMatrix([[1, 2], [2, 1]], "rational")
    with pytest.raises(DomainError):
        CorrelationMatrix([[2, 0], [0, 1]], "rational")


def test_constant_correlation_range():
    assert constant_correlation(3, Fraction(-1, 2))[0, 1] == Fraction(-1, 2)
    with pytest.raises(DomainError):
        constant_correlation(3, Fraction(-3, 5))


def test_normalize_to_correlation_exact_and_float():
    A = Matrix([[4, 2], [2, 9]], "rational")
    C = normalize_to_correlation(A)
    assert C.is_exact() and C[0, 1] == Fraction(1, 3)
    B = Matrix([[2, 1], [1, 3]], "rational")
    F = normalize_to_correlation(B)
    assert F.field == "float"
    assert abs(float(F[0, 1].value.real) - 1 / np.sqrt(6)) < 1e-15


def test_entrywise_abs_exact_when_rational():
    A = Matrix([[G(3, 4), G(0, -2)], [1, G(-1)]], "gaussian")
    B = entrywise_abs(A)
    assert B[0, 0] == 5 and B[0, 1] == 2 and B[1, 1] == 1


def test_doubly_stochastic():
    h = Fraction(1, 2)
    assert is_doubly_stochastic(Matrix([[h, h], [h, h]], "rational"))
    assert not is_doubly_stochastic(Matrix([[1, 0], [1, 0]], "rational"))


@given(psd(field="rational", max_n=5))
def test_float_det_bound_encloses_exact(A):
    M, err = A.to_numpy()
    d, e = float_det_bound(M, err, hermitian=True)
    exact = float(det(A))
    assert abs(d.real - exact) <= e + 1e-9 * max(1, abs(exact))


def test_float_matrix_round_trip_through_numpy():
    arr = np.array([[1.5, 2 - 1j], [2 + 1j, 0.25]])
    M = Matrix.from_numpy(arr)
    back, err = M.to_numpy()
    assert np.array_equal(back, arr) and err >= 0


def test_matrix_power_and_trace():
    A = Matrix([[1, 1], [0, 1]], "rational")
    assert (A**5)[0, 1] == 5
    assert A.trace() == 2


def test_digest_depends_on_field():
    A = Matrix([[1]], "rational")
    assert A.digest() != A.with_field("gaussian").digest()
    assert A.digest() == Matrix([[Fraction(2, 2)]], "rational").digest()


@given(gaussians)
def test_one_by_one(z):
    A = Matrix([[z]], "gaussian")
    assert det(A) == z
