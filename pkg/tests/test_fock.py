import numpy as np
import pytest

from pseudoherm.config import DEFAULT_TOLS
from pseudoherm.errors import (
    DimensionMismatchError,
    MatrixExpOverflowError,
    NotPositiveDefiniteError,
)
from pseudoherm.fock import (
    FockBasis,
    OperatorMatrix,
    adjoint,
    build_annihilation,
    build_creation,
    build_momentum,
    build_position,
    commutator,
    hermitian_sqrt,
    is_hermitian,
    matrix_exp,
    residual_hermiticity,
)

SQ2 = np.sqrt(2)


def test_basis_validation():
    with pytest.raises(ValueError):
        FockBasis(1)
    assert FockBasis(2).dim == 2


def test_annihilation_n3():
    a = build_annihilation(FockBasis(3)).mat
    expected = np.array([[0, 1, 0], [0, 0, SQ2], [0, 0, 0]], dtype=complex)
    np.testing.assert_array_equal(a, expected)


def test_annihilation_n2_and_sqrt_rule():
    a = build_annihilation(FockBasis(2)).mat
    np.testing.assert_array_equal(a, np.array([[0, 1], [0, 0]], dtype=complex))
    a4 = build_annihilation(FockBasis(4)).mat
    assert a4[2, 3] == np.sqrt(3)


def test_creation_is_exact_adjoint():
    for n in (2, 3, 7, 16):
        b = FockBasis(n)
        create = build_creation(b).mat
        a_dag = adjoint(build_annihilation(b)).mat
        np.testing.assert_array_equal(create, a_dag)
    assert build_creation(FockBasis(2)).mat[1, 0] == 1.0


def test_creation_n3():
    c = build_creation(FockBasis(3)).mat
    expected = np.array([[0, 0, 0], [1, 0, 0], [0, SQ2, 0]], dtype=complex)
    np.testing.assert_array_equal(c, expected)


def test_position_momentum_entries_n2():
    b = FockBasis(2)
    x = build_position(b).mat
    p = build_momentum(b).mat
    np.testing.assert_allclose(x, [[0, 1 / SQ2], [1 / SQ2, 0]], atol=1e-16)
    np.testing.assert_allclose(p, [[0, -1j / SQ2], [1j / SQ2, 0]], atol=1e-16)


def test_position_momentum_exactly_hermitian():
    for n in (2, 5, 33):
        b = FockBasis(n)
        assert residual_hermiticity(build_position(b)) == 0.0
        assert residual_hermiticity(build_momentum(b)) == 0.0


def test_ladder_commutator_truncation_defect():
    # [a, a^dag] = diag(1, ..., 1, 1-N): defect confined to the last entry
    for n in (4, 9, 30):
        b = FockBasis(n)
        c = commutator(build_annihilation(b), build_creation(b)).mat
        expected = np.diag(np.concatenate([np.ones(n - 1), [1.0 - n]]))
        np.testing.assert_allclose(c, expected, atol=1e-13)
        block = c[: n - 2, : n - 2] - np.eye(n - 2)
        assert np.abs(block).max() < 1e-14


def test_commutator_px():
    b = FockBasis(3)
    c = commutator(build_momentum(b), build_position(b)).mat
    np.testing.assert_allclose(c, -1j * np.diag([1.0, 1.0, -2.0]), atol=1e-14)


def test_commutator_px_block_vanishes():
    n = 12
    b = FockBasis(n)
    c = commutator(build_momentum(b), build_position(b)).mat + 1j * np.eye(n)
    assert np.abs(c[: n - 1, : n - 1]).max() < 1e-14


def test_commutator_self_is_zero():
    b = FockBasis(6)
    x = build_position(b)
    assert np.abs(commutator(x, x).mat).max() == 0.0


def test_commutator_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        commutator(build_position(FockBasis(3)), build_position(FockBasis(4)))


def test_matrix_exp_zero_and_diagonal():
    b = FockBasis(4)
    z = OperatorMatrix(b, np.zeros((4, 4)))
    np.testing.assert_array_equal(matrix_exp(z).mat, np.eye(4))
    d = OperatorMatrix(b, np.diag([0.3, -1.0, 2.5, 0.0]))
    np.testing.assert_allclose(
        matrix_exp(d).mat, np.diag(np.exp([0.3, -1.0, 2.5, 0.0])), rtol=1e-14
    )


def test_matrix_exp_bch_factorization():
    # exp(l(a^dag + a)) = exp(l a^dag) exp(l a) e^{l^2/2}: exact for the
    # untruncated algebra; holds on the window of the truncated matrices
    b = FockBasis(16)
    lam = 0.5
    a = build_annihilation(b).mat
    ad = a.conj().T
    lhs = matrix_exp(OperatorMatrix(b, lam * (ad + a))).mat
    rhs = (
        matrix_exp(OperatorMatrix(b, lam * ad)).mat
        @ matrix_exp(OperatorMatrix(b, lam * a)).mat
        * np.exp(lam**2 / 2)
    )
    assert np.abs((lhs - rhs)[:8, :8]).max() < 1e-10


def test_matrix_exp_inverse_identity():
    rng = np.random.default_rng(7)
    b = FockBasis(10)
    m = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
    m *= 10 / np.linalg.norm(m, 2)
    prod = matrix_exp(OperatorMatrix(b, m)).mat @ matrix_exp(OperatorMatrix(b, -m)).mat
    assert np.abs(prod - np.eye(10)).max() < 1e-10


def test_matrix_exp_overflow_is_explicit():
    b = FockBasis(2)
    with pytest.raises(MatrixExpOverflowError):
        matrix_exp(OperatorMatrix(b, np.diag([800.0, 0.0])))


def test_hermitian_sqrt_simple():
    b = FockBasis(2)
    np.testing.assert_allclose(
        hermitian_sqrt(OperatorMatrix(b, np.eye(2))).mat, np.eye(2), atol=1e-15
    )
    s = hermitian_sqrt(OperatorMatrix(b, np.diag([4.0, 9.0]))).mat
    np.testing.assert_allclose(s, np.diag([2.0, 3.0]), rtol=1e-14)


def test_hermitian_sqrt_exponential_identity():
    rng = np.random.default_rng(3)
    n = 8
    s = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    s = (s + s.conj().T) / 2
    s *= 1.0 / np.linalg.norm(s, 2)
    b = FockBasis(n)
    lhs = hermitian_sqrt(matrix_exp(OperatorMatrix(b, s))).mat
    rhs = matrix_exp(OperatorMatrix(b, s / 2)).mat
    assert np.abs(lhs - rhs).max() < 1e-10


def test_hermitian_sqrt_contract():
    rng = np.random.default_rng(11)
    n = 12
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    spd = g @ g.conj().T + 0.5 * np.eye(n)
    b = FockBasis(n)
    root = hermitian_sqrt(OperatorMatrix(b, spd))
    assert residual_hermiticity(root) < 1e-13
    err = np.linalg.norm(root.mat @ root.mat - spd) / np.linalg.norm(spd)
    assert err < 1e-12
    comm = root.mat @ spd - spd @ root.mat
    assert np.linalg.norm(comm) / np.linalg.norm(spd) < 1e-10


def test_hermitian_sqrt_rejects_indefinite():
    b = FockBasis(2)
    with pytest.raises(NotPositiveDefiniteError) as err:
        hermitian_sqrt(OperatorMatrix(b, np.diag([1.0, -2.0])))
    assert err.value.eigenvalue == pytest.approx(-2.0)


def test_residual_hermiticity_values():
    b = FockBasis(2)
    assert residual_hermiticity(build_position(b)) == 0.0
    # ||A - A^dag||_F / max(1, ||A||_F) = sqrt(2) / max(1, 1) for the
    # nilpotent unit: its Frobenius norm is 1, so the max clamps to 1
    j = OperatorMatrix(b, np.array([[0, 1], [0, 0]], dtype=complex))
    assert residual_hermiticity(j) == pytest.approx(np.sqrt(2.0))
    assert not is_hermitian(j)
    assert is_hermitian(build_position(b), tol=DEFAULT_TOLS.hermiticity)


def test_operator_matrix_immutability_and_checks():
    b = FockBasis(3)
    m = OperatorMatrix(b, np.eye(3))
    with pytest.raises(ValueError):
        m.mat[0, 0] = 2.0
    with pytest.raises(ValueError):
        OperatorMatrix(b, np.ones((2, 3)))
    with pytest.raises(ValueError):
        OperatorMatrix(b, np.full((3, 3), np.nan))
    with pytest.raises(DimensionMismatchError):
        OperatorMatrix(FockBasis(4), np.eye(3))
