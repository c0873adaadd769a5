import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relbound import core_linalg as cl
from relbound.config import Tolerances
from relbound.core_linalg import Ordering
from relbound.errors import InvalidMatrix, NoConvergence, NotHermitian
from relbound.singular import jordan_wielandt

from conftest import hermitian_with_spectrum, random_dense, random_hermitian, seeds, rank_deficient_hermitian


def _unitary_defect(V):
    return np.linalg.norm(V.conj().T @ V - np.eye(V.shape[1]), 2)


# --- validation -----------------------------------------------------------


def test_as_hermitian_rejects_skew_input():
    with pytest.raises(NotHermitian):
        cl.as_hermitian(np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_as_hermitian_rejects_rectangular():
    with pytest.raises(NotHermitian):
        cl.as_hermitian(np.ones((2, 3)))


@pytest.mark.parametrize("bad", [np.ones(3), np.ones((2, 2, 2)), np.array([[np.nan]]), np.zeros((0, 0))])
def test_as_matrix_rejects_malformed(bad):
    with pytest.raises(InvalidMatrix):
        cl.as_matrix(bad)


def test_as_hermitian_output_is_exactly_hermitian():
    A = random_hermitian(6, 1)
    A = A + 1e-14 * random_dense(6, 6, 2)
    H = cl.as_hermitian(A)
    assert np.array_equal(H, H.conj().T)


# --- hermitian_eig --------------------------------------------------------


def test_eig_identity():
    dec = cl.hermitian_eig(np.eye(3))
    assert np.array_equal(dec.eigenvalues, [1.0, 1.0, 1.0])
    assert dec.rank == 3
    assert _unitary_defect(dec.V) < 1e-15


def test_eig_inertia_default_puts_zero_last():
    dec = cl.hermitian_eig(np.diag([4.0, -2.0, 0.0]))
    assert np.array_equal(dec.eigenvalues, [4.0, -2.0, 0.0])
    assert dec.rank == 2


def test_eig_inertia_vs_decreasing():
    A = np.diag([0.0, -3.0, 5.0, 0.0, 1.0])
    inert = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT).eigenvalues
    dec = cl.hermitian_eig(A, Ordering.DECREASING).eigenvalues
    assert list(inert) == [5.0, 1.0, -3.0, 0.0, 0.0]
    assert list(dec) == [5.0, 1.0, 0.0, 0.0, -3.0]


def test_eig_known_spectrum_recovered():
    A = hermitian_with_spectrum([3.0, 1.0, -1.0, -3.0], seed=7)
    dec = cl.hermitian_eig(A)
    assert np.max(np.abs(dec.eigenvalues - [3.0, 1.0, -1.0, -3.0])) < 1e-12


def test_eig_flushes_tiny_eigenvalues():
    A = hermitian_with_spectrum([2.0, 1e-20], seed=3, n=3)
    dec = cl.hermitian_eig(A)
    assert dec.rank == 1
    assert dec.eigenvalues[1] == 0.0 and dec.eigenvalues[2] == 0.0


def test_eig_results_are_frozen():
    dec = cl.hermitian_eig(np.eye(2))
    with pytest.raises(ValueError):
        dec.eigenvalues[0] = 2.0


def test_eig_no_convergence_raised():
    tol = Tolerances(max_sweeps=1, eig_tol=1e-300)
    with pytest.raises(NoConvergence):
        cl.hermitian_eig(random_hermitian(8, 4), tol=tol)


@given(st.integers(1, 24), seeds)
def test_eig_matches_numpy(n, seed):
    A = random_hermitian(n, seed)
    dec = cl.hermitian_eig(A, Ordering.DECREASING)
    ref = np.linalg.eigvalsh(A)[::-1]
    scale = np.linalg.norm(A, 2)
    assert np.max(np.abs(dec.eigenvalues - ref)) <= 1e-12 * n * scale
    assert np.linalg.norm(A @ dec.V - dec.V * dec.eigenvalues, 2) <= 1e-12 * n * scale
    assert _unitary_defect(dec.V) <= 1e-12 * n


@given(rank_deficient_hermitian())
def test_eig_rank_matches_construction(case):
    A, n, spectrum = case
    dec = cl.hermitian_eig(A)
    assert dec.rank == len(spectrum)
    assert np.allclose(np.sort(dec.Dr), np.sort(spectrum), rtol=1e-10, atol=1e-12 * np.abs(spectrum).max())


def test_eigvals_decreasing_matches_full_decomposition():
    A = random_hermitian(9, 5)
    a = cl.eigvals_decreasing(A)
    b = cl.hermitian_eig(A, Ordering.DECREASING).eigenvalues
    assert np.max(np.abs(a - b)) < 1e-13 * np.abs(b).max()


# --- svd ------------------------------------------------------------------


def test_svd_diag():
    f = cl.svd(np.diag([3.0, 1.0]))
    assert np.allclose(f.sigma, [3.0, 1.0], atol=0, rtol=1e-15)
    assert f.rank == 2


def test_svd_zero():
    f = cl.svd(np.zeros((3, 2)))
    assert np.array_equal(f.sigma, [0.0, 0.0])
    assert f.rank == 0
    assert _unitary_defect(f.U) < 1e-15 and _unitary_defect(f.V) < 1e-15


def test_svd_rank_two_recovered():
    rng = np.random.default_rng(11)
    U, _ = np.linalg.qr(rng.standard_normal((5, 2)))
    V, _ = np.linalg.qr(rng.standard_normal((3, 2)))
    A = (U * [4.0, 0.5]) @ V.T
    f = cl.svd(A)
    assert f.rank == 2
    assert np.max(np.abs(f.sigma[:2] - [4.0, 0.5])) < 1e-12


@given(st.integers(1, 12), st.integers(1, 12), seeds)
def test_svd_matches_numpy(m, n, seed):
    A = random_dense(m, n, seed)
    f = cl.svd(A)
    ref = np.linalg.svd(A, compute_uv=False)
    assert np.max(np.abs(f.sigma - ref)) <= 1e-12 * ref[0]
    S = np.zeros((m, n))
    S[np.arange(min(m, n)), np.arange(min(m, n))] = f.sigma
    assert np.linalg.norm(f.U @ S @ f.V.conj().T - A, 2) <= 1e-12 * ref[0] * max(m, n)
    assert _unitary_defect(f.U) < 1e-12 * m and _unitary_defect(f.V) < 1e-12 * n


# --- norms ----------------------------------------------------------------


def test_spectral_norm_trivial():
    assert cl.spectral_norm(np.zeros((2, 3))) == 0.0
    assert cl.spectral_norm(np.diag([1.0, -3.0])) == pytest.approx(3.0, rel=1e-15)


def test_spectral_norm_via_embedding():
    A = random_dense(4, 3, 21)
    J = jordan_wielandt(A)
    emb = np.max(np.abs(np.linalg.eigvalsh(J)))
    assert cl.spectral_norm(A) == pytest.approx(emb, rel=1e-12)


# --- pseudo-inverse -------------------------------------------------------


def test_pinv_diag():
    assert np.allclose(cl.pseudo_inverse(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]), atol=1e-16)


def test_pinv_invertible_is_inverse():
    A = np.array([[2.0, 1.0], [1.0, 3.0]])
    assert np.linalg.norm(A @ cl.pseudo_inverse(A) - np.eye(2), 2) < 1e-14


def test_pinv_zero_is_zero():
    assert np.array_equal(cl.pseudo_inverse(np.zeros((2, 3))), np.zeros((3, 2)))


@given(st.integers(2, 10), seeds)
def test_moore_penrose_identities(n, seed):
    r = max(1, n // 2)
    A = hermitian_with_spectrum(np.linspace(1.0, 5.0, r) * np.resize([1, -1], r), seed, n)
    X = cl.pseudo_inverse(A)
    a = np.linalg.norm(A, 2)
    tol = 1e-12 * a
    assert np.linalg.norm(A @ X @ A - A, 2) <= tol
    assert np.linalg.norm(X @ A @ X - X, 2) <= tol
    assert np.linalg.norm(A @ X - (A @ X).conj().T, 2) <= tol
    assert np.linalg.norm(X @ A - (X @ A).conj().T, 2) <= tol
    assert np.linalg.norm(X - np.linalg.pinv(A, rcond=1e-10, hermitian=True), 2) <= 1e-11 * np.linalg.norm(X, 2)


# --- polar factor and square roots ----------------------------------------


def test_polar_diag():
    pf = cl.polar_factor(cl.hermitian_eig(np.diag([4.0, -2.0, 0.0])))
    assert np.allclose(pf.P, np.diag([4.0, 2.0, 0.0]), atol=1e-15)
    assert np.allclose(pf.S, np.diag([1.0, -1.0, 1.0]), atol=1e-15)


def test_polar_of_psd_is_itself():
    A = hermitian_with_spectrum([3.0, 1.0, 0.5], 5, n=4)
    pf = cl.polar_factor(cl.hermitian_eig(A))
    assert np.linalg.norm(pf.P - A, 2) < 1e-13
    assert np.linalg.norm(pf.S - np.eye(4), 2) < 1e-13


@given(rank_deficient_hermitian())
def test_polar_reconstruction(case):
    A, n, _ = case
    pf = cl.polar_factor(cl.hermitian_eig(A))
    a = np.linalg.norm(A, 2)
    assert np.linalg.norm(pf.P @ pf.S - A, 2) <= 1e-12 * a * n
    assert np.linalg.norm(pf.S @ pf.P - A, 2) <= 1e-12 * a * n
    assert np.min(np.linalg.eigvalsh(pf.P)) >= -1e-12 * a * n


def test_pinv_sqrt_examples():
    assert np.allclose(cl.pinv_sqrt(cl.hermitian_eig(np.diag([4.0, 0.0]))), np.diag([0.5, 0.0]))
    assert np.allclose(cl.pinv_sqrt(cl.hermitian_eig(np.eye(3))), np.eye(3))
    R = cl.pinv_sqrt(cl.hermitian_eig(np.array([[-4.0]])))
    assert R[0, 0] == pytest.approx(-0.5j)
    # squaring the inverse root gives back the inverse of A on its range
    assert np.linalg.inv(R @ R)[0, 0] == pytest.approx(-4.0)


def test_pinv_sqrt_polar_examples():
    got = cl.pinv_sqrt_polar(cl.hermitian_eig(np.diag([4.0, -2.0, 0.0])))
    assert np.allclose(got, np.diag([0.5, 2**-0.5, 0.0]), atol=1e-15)
    assert np.allclose(cl.pinv_sqrt_polar(cl.hermitian_eig(np.eye(2))), np.eye(2))


@given(rank_deficient_hermitian())
def test_pinv_sqrt_polar_projector_identity(case):
    A, n, _ = case
    dec = cl.hermitian_eig(A)
    R = cl.pinv_sqrt_polar(dec)
    P = cl.polar_factor(dec).P
    assert np.linalg.norm(R - R.conj().T, 2) == 0.0
    assert np.linalg.norm(R @ P @ R - dec.range_projector(), 2) <= 1e-11 * n


@given(rank_deficient_hermitian())
def test_shift_identity(case):
    A, n, _ = case
    dec = cl.hermitian_eig(A)
    P = cl.polar_factor(dec).P
    r = dec.rank
    lam = dec.eigenvalues[:r]
    for k in (0.0, 0.3, 0.999):
        for sgn in (1.0, -1.0):
            got = cl.hermitian_eig(A + sgn * k * P).eigenvalues[:r]
            assert np.max(np.abs(got - (lam + sgn * k * np.abs(lam)))) <= 1e-11 * dec.norm
    # at k = 1 eigenvalues may hit zero and move position, so compare multisets
    for sgn in (1.0, -1.0):
        got = np.sort(np.linalg.eigvalsh(A + sgn * P))
        want = np.sort(np.concatenate([lam + sgn * np.abs(lam), np.zeros(n - r)]))
        assert np.max(np.abs(got - want)) <= 1e-11 * dec.norm


def test_shift_identity_fails_for_k_above_one():
    A = np.diag([-10.0, 1.0])
    dec = cl.hermitian_eig(A)
    P = cl.polar_factor(dec).P
    k = 2.0
    lam1 = dec.eigenvalues[0]
    got = cl.hermitian_eig(A + k * P).eigenvalues[0]
    assert lam1 == 1.0
    assert got == pytest.approx(10.0)
    assert abs(got - (lam1 + k * abs(lam1))) > 1.0


def test_is_psd():
    assert cl.is_psd(cl.hermitian_eig(np.diag([1.0, 0.0])))
    assert not cl.is_psd(cl.hermitian_eig(np.diag([1.0, -1e-3])))
