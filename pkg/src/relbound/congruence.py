"""Invariance of k under congruence A -> D A D*, E -> D E D*.

k is unchanged whenever D is invertible and D*D commutes with the range
projector V_r V_r* of A. For full-rank A the projector is I and every
invertible D qualifies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core_linalg as cl
from .bounds import EigenBoundReport, _pair, bound_entries, k_sqrt
from .config import Tolerances, resolve
from .core_linalg import Ordering, SpectralDecomposition
from .errors import DimensionMismatch, NotAdmissible, NotInvertible, NotPsd
from .harness.generators import haar_unitary, make_rng

_GAP_FLOOR = 1e-300


@dataclass(frozen=True)
class CongruenceCheck:
    commute_residual: float
    admissible: bool
    k_original: float | None = None
    k_transformed: float | None = None
    invariance_gap: float | None = None


def _square(D, n: int, tol: Tolerances) -> np.ndarray:
    D = cl.as_matrix(D, "D")
    if D.shape != (n, n):
        raise DimensionMismatch(f"D must be {n}x{n}, got {D.shape}")
    f = cl.svd(D, tol)
    if f.rank < n:
        raise NotInvertible(f"D is numerically singular (sigma_min = {f.sigma[-1]:.3e})")
    return D


def check_admissible(D, dec: SpectralDecomposition, tol: Tolerances | None = None) -> CongruenceCheck:
    """Does D*D commute with the range projector of the decomposed matrix?"""
    tol = resolve(tol)
    D = _square(D, dec.n, tol)
    G = D.conj().T @ D
    Pr = dec.range_projector()
    residual = cl.spectral_norm(G @ Pr - Pr @ G, tol)
    scale = cl.spectral_norm(G, tol)
    return CongruenceCheck(residual, bool(residual <= tol.commute_tol * scale))


def congruent(D: np.ndarray, M: np.ndarray) -> np.ndarray:
    X = D @ M @ D.conj().T
    return 0.5 * (X + X.conj().T)


def transformed_k(A, E, D, tol: Tolerances | None = None) -> float:
    """k over the transformed pair, with D P D* in place of the polar factor.

    D P D* = C C* for C = D V_r S, S = |D_r|^{1/2}, so the quantity is
    ||C^+ (D E D*) C^{+*}||. In the eigenbasis W = [V_r, V_k] of A,
    C^+ D = S^{-1} [I, Y] W* with Y = (D V_r)^+ D V_k, and Y = 0 exactly when
    D is admissible. Working in that form keeps the range block identical to
    the untransformed computation, so rounding in Y (amplified by kappa(D)^2)
    only enters at second order. Performs no admissibility check.
    """
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    D = _square(D, A.shape[0], tol)
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    r = dec.rank
    if r == 0:
        return 0.0
    Vr = dec.Vr
    Vk = dec.V[:, np.setdiff1d(np.arange(dec.n), dec.range_indices)]
    Q, R = np.linalg.qr(D @ Vr)
    Y = np.linalg.solve(R, Q.conj().T @ (D @ Vk))
    W = np.hstack([Vr, Vk])
    T = np.hstack([np.eye(r), Y])
    M = T @ (W.conj().T @ E @ W) @ T.conj().T
    s = np.sqrt(np.abs(dec.Dr))
    K = M / np.outer(s, s)
    return cl.hermitian_norm(0.5 * (K + K.conj().T), tol)


def k_invariance(A, E, D, tol: Tolerances | None = None, enforce: bool = True) -> CongruenceCheck:
    """Compare k before and after the congruence.

    With ``enforce`` an inadmissible D raises :class:`NotAdmissible`;
    without it the gap is reported anyway (useful as a negative control).
    """
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    chk = check_admissible(D, dec, tol)
    if enforce and not chk.admissible:
        raise NotAdmissible(
            f"D*D does not commute with the range projector (residual {chk.commute_residual:.3e})"
        )
    k0 = k_sqrt(A, E, tol, dec=dec).value
    k1 = transformed_k(A, E, D, tol)
    gap = abs(k0 - k1) / max(k0, _GAP_FLOOR)
    return CongruenceCheck(chk.commute_residual, chk.admissible, k0, k1, gap)


def generate_admissible_D(
    dec: SpectralDecomposition, seed: int, kappa_max: float = 1e3
) -> np.ndarray:
    """Random D = U diag(sigma) (V S)* with condition number <= kappa_max.

    U is Haar unitary and S a permutation. D*D = V S diag(sigma^2) S* V* is
    diagonal in the eigenbasis V, so it commutes with V_r V_r*.
    """
    if kappa_max < 1.0:
        raise ValueError("kappa_max must be >= 1")
    rng = make_rng(seed)
    n = dec.n
    U = haar_unitary(n, rng)
    perm = rng.permutation(n)
    sigma = np.exp(rng.uniform(0.0, np.log(kappa_max), size=n))
    W = dec.V[:, perm]
    return (U * sigma) @ W.conj().T


def congruence_bounds(A, E, D, tol: Tolerances | None = None) -> EigenBoundReport:
    """Bounds for the spectrum of D(A + E)D* using the untransformed k.

    Requires D A D* and D (A + E) D* positive semi-definite.
    """
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    chk = check_admissible(D, dec, tol)
    if not chk.admissible:
        raise NotAdmissible(
            f"D*D does not commute with the range projector (residual {chk.commute_residual:.3e})"
        )
    D = cl.as_matrix(D, "D")
    At = congruent(D, A)
    Et = congruent(D, E)
    dec_t = cl.hermitian_eig(At, Ordering.INERTIA_DEFAULT, tol)
    if not cl.is_psd(dec_t):
        raise NotPsd("D A D* is not positive semi-definite")
    if not cl.is_psd(cl.hermitian_eig(At + Et, Ordering.DECREASING, tol)):
        raise NotPsd("D (A + E) D* is not positive semi-definite")
    k = k_sqrt(A, E, tol, dec=dec)
    entries = bound_entries(dec_t.eigenvalues, dec_t.n, dec_t.rank, k.value)
    return EigenBoundReport(dec_t.n, dec_t.rank, entries, k, psd_mode=True)
