"""Tests of the matrix primitives: SVD, pinv, PSD square root."""

import numpy as np
import pytest

from opeq import EmptyMatrix, NotPSD, ToleranceConfig, as_matrix, pinv, psd_sqrt, svd
from opeq.harness import ranked_matrix
from opeq.rng import Xoshiro256StarStar


def herm2x2_eig(m):
    """Closed-form eigenvalues of a Hermitian 2x2 matrix, descending."""
    a, d, b = m[0, 0].real, m[1, 1].real, m[0, 1]
    mid = (a + d) / 2.0
    rad = np.sqrt(((a - d) / 2.0) ** 2 + abs(b) ** 2)
    return mid + rad, mid - rad


def test_svd_identity():
    np.testing.assert_allclose(svd(np.eye(2)).singular_values, [1.0, 1.0])


def test_svd_diagonal():
    np.testing.assert_allclose(svd(np.diag([3.0, 0.0])).singular_values, [3.0, 0.0])


def test_svd_nilpotent_matches_hand_oracle():
    m = np.array([[0.0, 1.0], [0.0, 0.0]])
    # oracle: singular values are the square roots of the eigenvalues of m* m
    hi, lo = herm2x2_eig(m.conj().T @ m)
    expected = np.sqrt([hi, lo])
    np.testing.assert_allclose(expected, [1.0, 0.0], atol=1e-15)
    np.testing.assert_allclose(svd(m).singular_values, expected, atol=1e-14)


def test_svd_factors_random():
    rng = Xoshiro256StarStar(11)
    for m_dim, n_dim, r in [(5, 3, 2), (4, 6, 3), (7, 7, 5)]:
        m = ranked_matrix(rng, m_dim, n_dim, r)
        f = svd(m)
        k = min(m_dim, n_dim)
        np.testing.assert_allclose(f.u.conj().T @ f.u, np.eye(k), atol=1e-12 * k)
        np.testing.assert_allclose(f.v.conj().T @ f.v, np.eye(k), atol=1e-12 * k)
        recon = f.u @ np.diag(f.singular_values) @ f.v.conj().T
        assert np.linalg.norm(recon - m) <= 1e-12 * np.linalg.norm(m)
        assert (np.diff(f.singular_values) <= 1e-15).all()


def test_svd_empty_raises():
    with pytest.raises(EmptyMatrix):
        svd(np.zeros((0, 3)))


def penrose_defects(m, x):
    mx, xm = m @ x, x @ m
    return (
        np.linalg.norm(m @ xm - m),
        np.linalg.norm(x @ mx - x),
        np.linalg.norm(mx.conj().T - mx),
        np.linalg.norm(xm.conj().T - xm),
    )


def test_pinv_identity():
    np.testing.assert_allclose(pinv(np.eye(2)), np.eye(2), atol=1e-14)


def test_pinv_scalar():
    np.testing.assert_allclose(pinv(np.array([[2.0]])), [[0.5]], atol=1e-15)


def test_pinv_projector_all_penrose_identities():
    m = np.array([[1.0, 0.0], [0.0, 0.0]])
    x = pinv(m)
    np.testing.assert_allclose(x, m, atol=1e-14)
    for defect in penrose_defects(m, x):
        assert defect <= 1e-12


def test_pinv_zero_matrix():
    x = pinv(np.zeros((3, 2)))
    assert x.shape == (2, 3)
    assert not x.any()


def test_pinv_penrose_random():
    rng = Xoshiro256StarStar(23)
    for _ in range(30):
        m_dim = 2 + rng.next_u64() % 7
        n_dim = 2 + rng.next_u64() % 7
        r = 1 + rng.next_u64() % min(m_dim, n_dim)
        m = ranked_matrix(rng, m_dim, n_dim, r)
        x = pinv(m)
        d1, d2, d3, d4 = penrose_defects(m, x)
        assert d1 <= 1e-10 * np.linalg.norm(m)
        assert d2 <= 1e-10 * np.linalg.norm(x)
        assert d3 <= 1e-10 and d4 <= 1e-10


def test_pinv_commutes_with_adjoint():
    rng = Xoshiro256StarStar(5)
    for _ in range(10):
        m = ranked_matrix(rng, 5, 4, 3)
        np.testing.assert_allclose(pinv(m.conj().T), pinv(m).conj().T, atol=1e-12)


def test_psd_sqrt_identity():
    np.testing.assert_allclose(psd_sqrt(np.eye(3)), np.eye(3), atol=1e-14)


def test_psd_sqrt_diagonal():
    np.testing.assert_allclose(psd_sqrt(np.diag([4.0, 0.0])), np.diag([2.0, 0.0]), atol=1e-14)


def test_psd_sqrt_rank_one_projector_matches_eigen_oracle():
    m = 0.5 * np.ones((2, 2))
    # oracle: eigenvalues (1, 0) with unit eigenvector (1, 1)/sqrt(2), so the
    # square root is sqrt(1) times the same rank-one projector, i.e. m itself
    hi, lo = herm2x2_eig(m)
    np.testing.assert_allclose([hi, lo], [1.0, 0.0], atol=1e-15)
    v = np.array([[1.0], [1.0]]) / np.sqrt(2.0)
    oracle = np.sqrt(hi) * (v @ v.conj().T)
    np.testing.assert_allclose(psd_sqrt(m), oracle, atol=1e-14)
    np.testing.assert_allclose(psd_sqrt(m), m, atol=1e-14)


def test_psd_sqrt_rejects_indefinite():
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -1.0]))


def test_psd_sqrt_rejects_non_hermitian():
    with pytest.raises(NotPSD):
        psd_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_psd_sqrt_clamps_eigenvalue_dust():
    q = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    m = q @ np.diag([1.0, -1e-13]) @ q.conj().T
    s = psd_sqrt(m)
    assert np.linalg.eigvalsh(s)[0] >= -1e-14
    assert np.linalg.norm(s @ s - m) <= 1e-10 * np.linalg.norm(m)


def test_psd_sqrt_squares_back_and_commutes():
    rng = Xoshiro256StarStar(9)
    for _ in range(10):
        g = ranked_matrix(rng, 5, 5, 4)
        m = g @ g.conj().T
        s = psd_sqrt(m)
        norm = np.linalg.norm(m)
        assert np.linalg.norm(s @ s - m) <= 1e-10 * norm
        assert np.linalg.norm(s @ m - m @ s) <= 1e-10 * norm ** 2


@pytest.mark.parametrize("bad", [{"rank_rel": 0.0}, {"rank_rel": 1.0},
                                 {"residual_rel": -1e-3}, {"residual_rel": 2.0}])
def test_tolerance_config_validation(bad):
    with pytest.raises(ValueError):
        ToleranceConfig(**bad)


def test_as_matrix_rejects_bad_input():
    with pytest.raises(ValueError):
        as_matrix(np.array([1.0, 2.0]))
    with pytest.raises(ValueError):
        as_matrix(np.array([[np.nan, 0.0], [0.0, 0.0]]))
    with pytest.raises(ValueError):
        as_matrix(np.array([[np.inf, 0.0], [0.0, 0.0]]))
