import dataclasses

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from relbound import bounds as bd
from relbound import singular as sv
from relbound.bounds import KFormula
from relbound.errors import DimensionMismatch, KTooLarge, NotSquare, OrientationError
from relbound.harness.generators import InstanceSpec, LogUniform, gen_rectangular, gen_singular_perturbation

from conftest import hermitian_with_spectrum, random_dense, seeds


def _k_oracle(A, E):
    U, s, Vh = np.linalg.svd(A)
    r = int(np.sum(s > 1e-12 * max(A.shape) * s[0]))
    Ur, Vr = U[:, :r], Vh[:r].conj().T
    return np.linalg.norm((Ur.conj().T @ E @ Vr) / np.sqrt(np.outer(s[:r], s[:r])), 2)


def test_jordan_wielandt_examples():
    J = sv.jordan_wielandt(np.array([[2.0]]))
    assert np.array_equal(J, [[0, 2], [2, 0]])
    assert np.allclose(np.linalg.eigvalsh(J), [-2, 2])
    assert not np.any(sv.jordan_wielandt(np.zeros((2, 3))))


def test_jordan_wielandt_spectrum():
    A = random_dense(4, 3, 5)
    w = np.sort(np.linalg.eigvalsh(sv.jordan_wielandt(A)))
    s = np.linalg.svd(A, compute_uv=False)
    want = np.sort(np.concatenate([s, -s, [0.0]]))
    assert np.max(np.abs(w - want)) < 1e-12 * s[0]


def test_pseudo_half_pinv_examples():
    assert np.allclose(sv.pseudo_half_pinv(np.diag([4.0, 1.0])), np.diag([0.5, 1.0]))
    assert not np.any(sv.pseudo_half_pinv(np.zeros((3, 2))))
    with pytest.raises(OrientationError):
        sv.pseudo_half_pinv(np.zeros((2, 3)))


def test_pseudo_half_pinv_polar_oracle():
    A = gen_rectangular(InstanceSpec(n=4, m=6, rank=3, spectrum=LogUniform(0.1, 10), seed=3))
    Sp = sv.pseudo_half_pinv(A)
    assert Sp.shape == (4, 6)
    # independent SVD from numpy
    U, s, Vh = np.linalg.svd(A)
    want = (Vh[:3].conj().T / np.sqrt(s[:3])) @ U[:, :3].conj().T
    assert np.linalg.norm(Sp - want, 2) < 1e-10 / np.sqrt(s[2])


def test_k_singular_examples():
    k = sv.k_singular(np.diag([3.0, 1.0]), np.diag([0.3, 0.0]))
    assert k.value == pytest.approx(0.1, rel=1e-14)
    assert k.formula is KFormula.PSEUDO_HALF
    assert sv.k_singular(np.diag([3.0, 1.0]), np.zeros((2, 2))).value == 0.0
    assert sv.k_singular_polar(np.diag([3.0, 1.0]), np.diag([0.3, 0.0])).value == pytest.approx(0.1)


def test_k_singular_polar_psd_matches_k_sqrt():
    A = hermitian_with_spectrum([3.0, 0.5, 0.1], 4, n=4)
    E = random_dense(4, 4, 5)
    E = 0.01 * (E + E.conj().T)
    assert sv.k_singular_polar(A, E).value == pytest.approx(bd.k_sqrt(A, E).value, rel=1e-10)


def test_k_singular_errors():
    with pytest.raises(DimensionMismatch):
        sv.k_singular(np.eye(2), np.eye(3))
    with pytest.raises(NotSquare):
        sv.k_singular_polar(np.ones((3, 2)), np.ones((3, 2)))


@given(st.integers(1, 8), st.integers(1, 8), st.integers(1, 8), seeds)
def test_k_singular_oracles(m, n, r, seed):
    r = min(r, m, n)
    A = gen_rectangular(InstanceSpec(n=n, m=m, rank=r, spectrum=LogUniform(0.1, 10), seed=seed))
    E = random_dense(m, n, seed + 1)
    k = sv.k_singular(A, E).value
    kj = bd.k_sqrt(sv.jordan_wielandt(A), sv.jordan_wielandt(E)).value
    assert kj == pytest.approx(k, rel=1e-10)
    assert _k_oracle(A, E) == pytest.approx(k, rel=1e-10)
    if m == n:
        assert sv.k_singular_polar(A, E).value == pytest.approx(k, rel=1e-10)


def test_singular_bounds_diag():
    A, E = np.diag([3.0, 1.0]), np.diag([0.3, 0.0])
    rep = sv.singular_bounds(A, E)
    assert rep.r == 2 and rep.k.value == pytest.approx(0.1)
    assert [(u.index, u.target_index) for u in rep.upper_entries] == [(1, 1), (2, 2)]
    assert [u.ceiling for u in rep.upper_entries] == pytest.approx([3.3, 1.1])
    assert [f.floor for f in rep.lower_entries] == pytest.approx([2.7, 0.9])
    v = sv.verify_singular_bounds(A, E, rep)
    assert v.holds and v.worst_violation == pytest.approx(0.0, abs=1e-14)


def test_singular_bounds_zero_perturbation():
    A = gen_rectangular(InstanceSpec(n=3, m=5, rank=3, spectrum=(2.0, 1.0, 0.5), seed=1))
    rep = sv.singular_bounds(A, np.zeros((5, 3)))
    for u in rep.upper_entries:
        assert u.ceiling == u.sigma_i
    for f in rep.lower_entries:
        assert f.floor == f.sigma_i
    assert sv.verify_singular_bounds(A, np.zeros((5, 3)), rep).holds


def test_singular_upper_range_is_empty_when_rank_small():
    # 2r - max(m, n) <= 0 leaves no ceilings, only floors
    A = gen_rectangular(InstanceSpec(n=4, m=6, rank=3, spectrum=LogUniform(1, 2), seed=2))
    rep = sv.singular_bounds(A, np.zeros((6, 4)))
    assert rep.upper_entries == () and len(rep.lower_entries) == 3


def test_singular_bounds_random_6x4():
    A = gen_rectangular(InstanceSpec(n=4, m=6, rank=3, spectrum=LogUniform(0.1, 10), seed=4))
    E = gen_singular_perturbation(A, 0.4, seed=5)
    rep = sv.singular_bounds(A, E)
    assert rep.k.value == pytest.approx(0.4, rel=1e-12)
    s = np.linalg.svd(A + E, compute_uv=False)
    slack = 1e-10 * np.linalg.norm(A, 2)
    for f in rep.lower_entries:
        assert s[f.index - 1] >= f.floor - slack
    for u in rep.upper_entries:
        assert s[u.target_index - 1] <= u.ceiling + slack


def test_singular_bounds_k_gate():
    with pytest.raises(KTooLarge):
        sv.singular_bounds(np.diag([1.0, 0.0]), np.diag([2.0, 0.0]))


def test_verify_singular_detects_shrunk_floors():
    A = gen_rectangular(InstanceSpec(n=5, m=5, rank=4, spectrum=LogUniform(0.1, 10), seed=6))
    E = gen_singular_perturbation(A, 0.5, seed=7)
    rep = sv.singular_bounds(A, E)
    k = rep.k.value
    bad = dataclasses.replace(
        rep, lower_entries=tuple(dataclasses.replace(f, floor=f.floor + 2 * k * f.sigma_i) for f in rep.lower_entries)
    )
    assert sv.verify_singular_bounds(A, E, rep).holds
    assert not sv.verify_singular_bounds(A, E, bad).holds


@given(st.integers(1, 9), st.integers(1, 9), st.integers(1, 9), st.sampled_from([0.1, 0.5, 1.0]), seeds, st.booleans())
def test_singular_bounds_sound(m, n, r, target, seed, relative):
    r = min(r, m, n)
    A = gen_rectangular(InstanceSpec(n=n, m=m, rank=r, spectrum=LogUniform(1e-3, 1e3), seed=seed))
    E = gen_singular_perturbation(A, target, seed, relative=relative)
    rep = sv.singular_bounds(A, E)
    s = np.linalg.svd(A + E, compute_uv=False)
    slack = 1e-10 * np.linalg.norm(A, 2)
    for f in rep.lower_entries:
        assert s[f.index - 1] >= f.floor - slack
    for u in rep.upper_entries:
        assert s[u.target_index - 1] <= u.ceiling + slack
