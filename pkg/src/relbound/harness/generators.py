"""Seeded random instances with controllable rank, spectrum and k.

All randomness flows through :func:`make_rng`, a numpy ``Generator`` on the
counter-based Philox4x64 bit generator keyed by a ``SeedSequence`` built
from integer keys. Identical keys give bit-identical draws.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .. import core_linalg as cl
from ..config import Tolerances, resolve
from ..core_linalg import Ordering
from ..errors import SpecInvalid, ZeroMatrix


def make_rng(*keys: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([int(k) for k in keys])))


def derive_seed(*keys: int) -> int:
    """Stable 63-bit integer seed derived from integer keys."""
    return int(np.random.SeedSequence([int(k) for k in keys]).generate_state(1, np.uint64)[0] >> 1)


def haar_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Ginibre matrix, R's diagonal made positive."""
    Z = (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))) / np.sqrt(2.0)
    Q, R = np.linalg.qr(Z)
    d = R.diagonal()
    return Q * (d / np.abs(d))


def random_hermitian(n: int, rng: np.random.Generator) -> np.ndarray:
    X = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (X + X.conj().T)


# --------------------------------------------------------------------------
# spectra


@dataclass(frozen=True)
class LogUniform:
    lo: float
    hi: float

    def sample(self, r: int, rng: np.random.Generator) -> np.ndarray:
        return np.exp(rng.uniform(np.log(self.lo), np.log(self.hi), size=r))


@dataclass(frozen=True)
class Signed:
    """Log-uniform magnitudes in [lo, hi] with random signs."""

    lo: float
    hi: float
    neg_fraction: float = 0.5

    def sample(self, r: int, rng: np.random.Generator) -> np.ndarray:
        mags = LogUniform(self.lo, self.hi).sample(r, rng)
        signs = np.where(rng.uniform(size=r) < self.neg_fraction, -1.0, 1.0)
        return mags * signs


@dataclass(frozen=True)
class Clustered:
    """``mult`` copies of ``value``; the rest log-uniform in [|value|, spread |value|].

    ``value`` is therefore the smallest magnitude in the spectrum.
    """

    value: float
    mult: int
    spread: float = 10.0

    def sample(self, r: int, rng: np.random.Generator) -> np.ndarray:
        if self.mult > r:
            raise SpecInvalid(f"cluster multiplicity {self.mult} exceeds rank {r}")
        a = abs(self.value)
        rest = LogUniform(a * 1.5, a * self.spread).sample(r - self.mult, rng)
        rest = rest * np.sign(self.value)
        return np.concatenate([np.full(self.mult, float(self.value)), rest])


SpectrumDist = Union[LogUniform, Signed, Clustered]


def parse_spectrum(text: str) -> Union[SpectrumDist, tuple[float, ...]]:
    """Parse ``loguniform:lo:hi``, ``signed:lo:hi[:neg]``, ``clustered:v:mult[:spread]``
    or an explicit comma-separated list."""
    head, *rest = text.strip().split(":")
    head = head.lower()
    try:
        if head == "loguniform":
            return LogUniform(float(rest[0]), float(rest[1]))
        if head == "signed":
            return Signed(float(rest[0]), float(rest[1]), *(float(x) for x in rest[2:3]))
        if head == "clustered":
            return Clustered(float(rest[0]), int(rest[1]), *(float(x) for x in rest[2:3]))
        return tuple(float(x) for x in text.split(","))
    except (IndexError, ValueError) as exc:
        raise SpecInvalid(f"cannot parse spectrum {text!r}: {exc}") from None


@dataclass(frozen=True)
class InstanceSpec:
    n: int
    rank: int
    spectrum: Union[SpectrumDist, Sequence[float]]
    m: int | None = None
    target_k: float | None = None
    psd: bool = False
    seed: int = 0

    def validate(self) -> None:
        dims = [self.n] + ([self.m] if self.m is not None else [])
        if min(dims) < 1:
            raise SpecInvalid("dimensions must be >= 1")
        if not 0 <= self.rank <= min(dims):
            raise SpecInvalid(f"rank {self.rank} outside 0..{min(dims)}")
        if not hasattr(self.spectrum, "sample"):
            vals = list(self.spectrum)
            if len(vals) != self.rank:
                raise SpecInvalid(f"spectrum has {len(vals)} values, rank is {self.rank}")
            if any(v == 0.0 for v in vals):
                raise SpecInvalid("explicit spectrum entries must be nonzero")
        if self.target_k is not None and not 0.0 < self.target_k <= 1.0:
            raise SpecInvalid(f"target_k must lie in (0, 1], got {self.target_k}")

    def sample_spectrum(self, rng: np.random.Generator) -> np.ndarray:
        if hasattr(self.spectrum, "sample"):
            vals = self.spectrum.sample(self.rank, rng)
        else:
            vals = np.asarray(list(self.spectrum), dtype=float)
        return np.abs(vals) if self.psd else vals

    def describe(self) -> dict:
        spec = self.spectrum
        if hasattr(spec, "sample"):
            spectrum = {"kind": type(spec).__name__, **spec.__dict__}
        else:
            spectrum = [float(x) for x in spec]
        return {
            "n": self.n,
            "m": self.m,
            "rank": self.rank,
            "spectrum": spectrum,
            "target_k": self.target_k,
            "psd": self.psd,
            "seed": self.seed,
            "rng": "numpy Philox4x64 keyed by SeedSequence",
        }


# --------------------------------------------------------------------------
# matrices


def gen_hermitian(spec: InstanceSpec) -> np.ndarray:
    """A = Q diag(spectrum, 0) Q* with Q Haar unitary."""
    spec.validate()
    rng = make_rng(spec.seed, 0)
    Q = haar_unitary(spec.n, rng)
    lam = spec.sample_spectrum(rng)
    Qr = Q[:, : spec.rank]
    A = (Qr * lam) @ Qr.conj().T
    return 0.5 * (A + A.conj().T)


def gen_rectangular(spec: InstanceSpec) -> np.ndarray:
    """m x n matrix U_r diag(|spectrum|) V_r* with Haar singular vectors."""
    spec.validate()
    m = spec.m if spec.m is not None else spec.n
    rng = make_rng(spec.seed, 0)
    U = haar_unitary(m, rng)
    V = haar_unitary(spec.n, rng)
    sig = np.abs(spec.sample_spectrum(rng))
    r = spec.rank
    return (U[:, :r] * sig) @ V[:, :r].conj().T


def _kernel_component(dec, scale: float, rng: np.random.Generator) -> np.ndarray:
    idx = np.setdiff1d(np.arange(dec.n), dec.range_indices)
    if idx.size == 0:
        return np.zeros((dec.n, dec.n), dtype=np.complex128)
    K = dec.V[:, idx]
    X = random_hermitian(idx.size, rng)
    X *= scale / max(np.linalg.norm(X, 2), 1e-300)
    M = K @ X @ K.conj().T
    return 0.5 * (M + M.conj().T)


def gen_perturbation(
    A,
    target_k: float,
    seed: int,
    kernel_component: bool = False,
    M=None,
    tol: Tolerances | None = None,
) -> np.ndarray:
    """Hermitian E = c P^{1/2} M P^{1/2} with c chosen so that k_sqrt(A, E) = target_k.

    ``kernel_component`` adds a Hermitian term supported on ker(A), which
    leaves k unchanged.
    """
    from ..bounds import compressed_k_matrix

    tol = resolve(tol)
    if not 0.0 < target_k <= 1.0:
        raise SpecInvalid(f"target_k must lie in (0, 1], got {target_k}")
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    if dec.rank == 0:
        raise ZeroMatrix("cannot scale a perturbation relative to the zero matrix")
    rng = make_rng(seed, 1)
    if M is None:
        M = random_hermitian(dec.n, rng)
    M = cl.as_hermitian(M, "M", tol)
    half = cl.sqrt_polar(dec)
    E0 = half @ M @ half
    E0 = 0.5 * (E0 + E0.conj().T)
    k0 = cl.hermitian_norm(compressed_k_matrix(dec, E0), tol)
    if k0 == 0.0:
        raise ZeroMatrix("drawn perturbation vanishes on range(A)")
    E = E0 * (target_k / k0)
    if kernel_component:
        E = E + _kernel_component(dec, float(np.linalg.norm(E, 2)), rng)
    return E


def gen_psd_perturbation(A, k: float, seed: int, kernel_component: bool = False,
                         tol: Tolerances | None = None) -> np.ndarray:
    """E with k_sqrt(A, E) = k (any k > 0) keeping A + E positive semi-definite.

    E = V_r |D_r|^{1/2} M_r |D_r|^{1/2} V_r* with the spectrum of M_r in [-min(1, k), k].
    """
    tol = resolve(tol)
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    if not cl.is_psd(dec):
        raise SpecInvalid("A must be positive semi-definite")
    r = dec.rank
    if r == 0:
        raise ZeroMatrix("A has rank 0")
    rng = make_rng(seed, 2)
    mu = rng.uniform(-min(1.0, k), k, size=r)
    mu[0] = k
    Q = haar_unitary(r, rng)
    Mr = (Q * mu) @ Q.conj().T
    B = dec.Vr * np.sqrt(np.abs(dec.Dr))
    E = B @ Mr @ B.conj().T
    E = 0.5 * (E + E.conj().T)
    if kernel_component:
        # positive semi-definite kernel term keeps A + E PSD
        idx = np.setdiff1d(np.arange(dec.n), dec.range_indices)
        if idx.size:
            K = dec.V[:, idx]
            w = rng.uniform(0.0, dec.norm, size=idx.size)
            E = E + 0.5 * ((K * w) @ K.conj().T + ((K * w) @ K.conj().T).conj().T)
    return E


def gen_singular_perturbation(A, target_k: float, seed: int, relative: bool = True,
                              tol: Tolerances | None = None) -> np.ndarray:
    """m x n E with k_singular(A, E) = target_k.

    ``relative`` draws E = S X S with S = U_r Sigma_r^{1/2} V_r*; otherwise E is
    a plain complex Gaussian matrix before scaling.
    """
    from ..singular import k_singular

    tol = resolve(tol)
    A = cl.as_matrix(A, "A")
    m, n = A.shape
    rng = make_rng(seed, 3)
    if relative:
        f = cl.svd(A, tol)
        if f.rank == 0:
            raise ZeroMatrix("A has rank 0")
        S = (f.Ur * np.sqrt(f.sigma_r)) @ f.Vr.conj().T
        X = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
        E0 = S @ X @ S
    else:
        E0 = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    k0 = k_singular(A, E0, tol).value
    if k0 == 0.0:
        raise ZeroMatrix("drawn perturbation vanishes on the singular subspaces of A")
    return E0 * (target_k / k0)
