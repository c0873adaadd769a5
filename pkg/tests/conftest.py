import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from relbound.harness.generators import haar_unitary, make_rng

settings.register_profile(
    "default",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def hermitian_with_spectrum(values, seed, n=None):
    """Q diag(values, 0...) Q* with Q Haar; numpy-only construction."""
    values = np.asarray(values, dtype=float)
    n = len(values) if n is None else n
    Q = haar_unitary(n, make_rng(seed, 9000))
    Qr = Q[:, : len(values)]
    A = (Qr * values) @ Qr.conj().T
    return 0.5 * (A + A.conj().T)


def random_hermitian(n, seed, scale=1.0):
    rng = make_rng(seed, 9001)
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return scale * 0.5 * (X + X.conj().T)


def random_dense(m, n, seed):
    rng = make_rng(seed, 9002)
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


seeds = st.integers(min_value=0, max_value=2**31 - 1)


@st.composite
def rank_deficient_hermitian(draw, n_max=10, signed=True):
    """(A, n, spectrum) with rank r in 1..n and magnitudes in [1e-2, 1e2]."""
    n = draw(st.integers(1, n_max))
    r = draw(st.integers(1, n))
    mags = draw(st.lists(st.floats(-2, 2), min_size=r, max_size=r))
    signs = draw(st.lists(st.sampled_from([-1.0, 1.0] if signed else [1.0]), min_size=r, max_size=r))
    spectrum = np.array([s * 10.0**m for s, m in zip(signs, mags)])
    A = hermitian_with_spectrum(spectrum, draw(seeds), n)
    return A, n, spectrum


@pytest.fixture
def diag_example():
    A = np.diag([4.0, 1.0, 0.0]).astype(complex)
    E = np.diag([0.4, 0.1, 0.0]).astype(complex)
    return A, E
