import numpy as np
import pytest

from pseudoherm.eigen import (
    biorthogonal_pair,
    classify_reality,
    decompose,
    eig_left,
    eig_right,
)
from pseudoherm.errors import QuasiDefectivePairError
from pseudoherm.fock import FockBasis, OperatorMatrix
from pseudoherm.models import ExtendedOscillatorSpec, build_extended_oscillator

from oracles import eigenvalues_oracle, match_multisets


def wrap(m):
    return OperatorMatrix(FockBasis(m.shape[0]), m) if m.shape[0] >= 2 else m


def test_eig_right_diagonal_sorted():
    w, v = eig_right(np.diag([3.0, 1.0, 2.0]).astype(complex))
    np.testing.assert_allclose(w, [1.0, 2.0, 3.0], atol=1e-14)
    for col, idx in zip(v.T, (1, 2, 0)):
        assert abs(abs(col[idx]) - 1.0) < 1e-14


def test_eig_right_truncation_double_eigenvalue():
    # N=2 truncation artifact of the extended oscillator at beta=2:
    # characteristic polynomial (l-2)^2, even though the true lowest
    # eigenvalues are 1.5 and 3.5
    m = np.array([[1.0, 1.0], [-1.0, 3.0]], dtype=complex)
    w, _ = eig_right(m)
    np.testing.assert_allclose(w, [2.0, 2.0], atol=1e-6)


def test_eig_right_against_charpoly_oracle():
    rng = np.random.default_rng(5)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    w, _ = eig_right(a)
    assert match_multisets(w, eigenvalues_oracle(a)) < 1e-8


def test_eig_right_residual_contract():
    rng = np.random.default_rng(17)
    a = rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))
    w, v = eig_right(a)
    norm = np.linalg.norm(a, 2)
    for j in range(20):
        res = np.linalg.norm(a @ v[:, j] - w[j] * v[:, j])
        assert res <= 1e-10 * norm * np.linalg.norm(v[:, j])


def test_eig_left_is_adjoint_problem():
    rng = np.random.default_rng(23)
    a = rng.standard_normal((8, 8)) + 1j * rng.standard_normal((8, 8))
    w, vl = eig_left(a)
    wr, _ = eig_right(a)
    np.testing.assert_allclose(w, wr, atol=1e-10)
    for j in range(8):
        res = np.linalg.norm(a.conj().T @ vl[:, j] - np.conj(w[j]) * vl[:, j])
        assert res <= 1e-10 * np.linalg.norm(a, 2)


def test_eig_left_hermitian_matches_right():
    rng = np.random.default_rng(2)
    a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
    a = (a + a.conj().T) / 2
    w, vl = eig_left(a)
    wr, vr = eig_right(a)
    np.testing.assert_allclose(w.imag, 0, atol=1e-12)
    for j in range(6):
        overlap = abs(np.vdot(vl[:, j], vr[:, j]))
        assert overlap == pytest.approx(1.0, abs=1e-10)


def test_eig_left_diag_unit_vectors():
    w, vl = eig_left(np.diag([1.0, 2.0]).astype(complex))
    np.testing.assert_allclose(w, [1.0, 2.0], atol=1e-14)
    np.testing.assert_allclose(np.abs(vl), np.eye(2), atol=1e-14)


def test_left_spectrum_equals_right_extended_osc():
    h = build_extended_oscillator(ExtendedOscillatorSpec(beta=2.0, dim=32))
    wl, _ = eig_left(h)
    wr, _ = eig_right(h)
    assert match_multisets(wl, wr) < 1e-8


def test_pair_hermitian_identity():
    h = np.diag([1.0, 2.0, 3.0]).astype(complex)
    dec = biorthogonal_pair(eig_right(h), eig_left(h), h=h)
    np.testing.assert_allclose(dec.pair_condition, 1.0, atol=1e-12)
    assert dec.cross_orthogonality() < 1e-12
    np.testing.assert_allclose(dec.eigenvalues, [1, 2, 3], atol=1e-14)


def test_pair_jordan_block_fails():
    h = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    with pytest.raises(QuasiDefectivePairError):
        biorthogonal_pair(eig_right(h), eig_left(h))


def test_pair_degenerate_truncation_artifact_fails():
    h = np.array([[1.0, 1.0], [-1.0, 3.0]], dtype=complex)  # M_beta, beta=2, N=2
    with pytest.raises(QuasiDefectivePairError) as err:
        biorthogonal_pair(eig_right(h), eig_left(h))
    assert err.value.eigenvalue == pytest.approx(2.0, abs=1e-6)


def test_pair_extended_osc_window():
    h = build_extended_oscillator(ExtendedOscillatorSpec(beta=2.0, dim=32))
    dec = decompose(h)
    assert dec.cross_orthogonality(window=10) < 1e-8
    np.testing.assert_allclose(
        dec.eigenvalues[:5].real, [1.5, 3.5, 5.5, 7.5, 9.5], atol=1e-9
    )


def test_decompose_right_vectors_unit_norm():
    rng = np.random.default_rng(31)
    a = rng.standard_normal((9, 9)) + 1j * rng.standard_normal((9, 9))
    dec = decompose(a)
    np.testing.assert_allclose(
        np.linalg.norm(dec.right_vectors, axis=0), 1.0, atol=1e-13
    )
    g = dec.left_vectors.conj().T @ dec.right_vectors
    np.testing.assert_allclose(np.diag(g), 1.0, atol=1e-12)


def test_completeness_reconstruction():
    rng = np.random.default_rng(13)
    a = rng.standard_normal((12, 12)) + 1j * rng.standard_normal((12, 12))
    dec = decompose(a)
    err = np.linalg.norm(dec.reconstruct() - a) / np.linalg.norm(a)
    assert err < 1e-8


def test_similarity_invariance_of_spectra():
    rng = np.random.default_rng(19)
    for _ in range(5):
        a = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
        while True:
            s = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
            if np.linalg.cond(s) <= 1e6:
                break
        b = s @ a @ np.linalg.inv(s)
        wa, _ = eig_right(a)
        wb, _ = eig_right(b)
        assert match_multisets(wa, wb) < 1e-6


def test_trace_equals_eigenvalue_sum():
    rng = np.random.default_rng(29)
    a = rng.standard_normal((15, 15)) + 1j * rng.standard_normal((15, 15))
    w, _ = eig_right(a)
    assert abs(w.sum() - np.trace(a)) <= 1e-10 * np.linalg.norm(a, 2)


def test_eig_right_hermitian_real_spectrum():
    rng = np.random.default_rng(37)
    a = rng.standard_normal((10, 10)) + 1j * rng.standard_normal((10, 10))
    a = (a + a.conj().T) / 2
    w, v = eig_right(a)
    assert np.abs(w.imag).max() < 1e-12
    # orthonormalizable: Gram matrix well conditioned
    g = v.conj().T @ v
    assert np.linalg.cond(g) < 1e6


def test_residuals_recorded():
    h = build_extended_oscillator(ExtendedOscillatorSpec(beta=2.0, dim=16))
    dec = decompose(h)
    assert dec.residuals is not None
    assert dec.residuals.max() <= 1e-10 * np.linalg.norm(h.mat, 2)
    assert dec.basis == h.basis


def test_classify_reality_trivial():
    real_count, pairs = classify_reality(np.array([1.0, 2.0 + 1e-14j]), im_tol=1e-10)
    assert real_count == 2 and pairs == []


def test_classify_reality_conjugate_pair():
    real_count, pairs = classify_reality(np.array([1 + 1j, 1 - 1j]))
    assert real_count == 0
    assert len(pairs) == 1
    a, b = pairs[0]
    assert a == pytest.approx(np.conj(b))


def test_classify_reality_mixed():
    w = np.array([0.5, 2 + 3j, 2 - 3j, 7.0])
    real_count, pairs = classify_reality(w, im_tol=1e-8)
    assert real_count == 2
    assert len(pairs) == 1
