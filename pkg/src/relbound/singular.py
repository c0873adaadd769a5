"""Relative bounds for singular values of rank-deficient m x n matrices.

With S^+ = V_r Sigma_r^{-1/2} U_r* and k = ||S^+ E S^+|| <= 1:

    sigma_{m+n-2r+i}(A + E) <= (1 + k) sigma_i(A),  i in 1..2r - max(m, n)
    sigma_i(A + E)          >= (1 - k) sigma_i(A),  i in 1..r

Both follow from the eigenvalue bounds applied to the Jordan-Wielandt
embeddings of A and E.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import core_linalg as cl
from .bounds import BoundVerdict, KEstimate, KFormula
from .config import Tolerances, resolve
from .errors import DimensionMismatch, KTooLarge, NotSquare, OrientationError


@dataclass(frozen=True)
class SingularUpper:
    index: int
    sigma_i: float
    ceiling: float
    target_index: int


@dataclass(frozen=True)
class SingularLower:
    index: int
    sigma_i: float
    floor: float


@dataclass(frozen=True)
class SingularBoundReport:
    m: int
    n: int
    r: int
    k: KEstimate
    upper_entries: tuple[SingularUpper, ...]
    lower_entries: tuple[SingularLower, ...]


def _pair(A, E):
    A = cl.as_matrix(A, "A")
    E = cl.as_matrix(E, "E")
    if A.shape != E.shape:
        raise DimensionMismatch(f"A is {A.shape} but E is {E.shape}")
    return A, E


def jordan_wielandt(A) -> np.ndarray:
    """The Hermitian embedding [[0, A], [A*, 0]]."""
    A = cl.as_matrix(A, "A")
    m, n = A.shape
    J = np.zeros((m + n, m + n), dtype=np.complex128)
    J[:m, m:] = A
    J[m:, :m] = A.conj().T
    return J


def pseudo_half_pinv(A, tol: Tolerances | None = None) -> np.ndarray:
    """S^+ = V_r Sigma_r^{-1/2} U_r* for tall or square A."""
    A = cl.as_matrix(A, "A")
    if A.shape[0] < A.shape[1]:
        raise OrientationError("pseudo_half_pinv needs rows >= cols; transpose first")
    f = cl.svd(A, tol)
    return (f.Vr / np.sqrt(f.sigma_r)) @ f.Ur.conj().T


def k_singular(A, E, tol: Tolerances | None = None) -> KEstimate:
    """k = ||S^+ E S^+||, computed on (A*, E*) when A is wide."""
    tol = resolve(tol)
    A, E = _pair(A, E)
    if A.shape[0] >= A.shape[1]:
        Sp = pseudo_half_pinv(A, tol)
        value = cl.spectral_norm(Sp @ E @ Sp, tol)
    else:
        St = pseudo_half_pinv(A.conj().T, tol)
        value = cl.spectral_norm(St @ E.conj().T @ St, tol)
    return KEstimate.of(value, KFormula.PSEUDO_HALF, tol)


def k_singular_polar(A, E, tol: Tolerances | None = None) -> KEstimate:
    """k = ||(P1^{1/2})^+ E (P2^{1/2})^+|| for square A = P1 Q = Q P2."""
    tol = resolve(tol)
    A, E = _pair(A, E)
    if A.shape[0] != A.shape[1]:
        raise NotSquare(f"two-sided polar variant needs square A, got {A.shape}")
    f = cl.svd(A, tol)
    w = 1.0 / np.sqrt(f.sigma_r)
    left = (f.Ur * w) @ f.Ur.conj().T
    right = (f.Vr * w) @ f.Vr.conj().T
    return KEstimate.of(cl.spectral_norm(left @ E @ right, tol), KFormula.TWO_SIDED_POLAR, tol)


def singular_bounds(
    A, E, tol: Tolerances | None = None, polar: bool = False, k: KEstimate | None = None
) -> SingularBoundReport:
    """Ceilings and floors for the singular values of A + E."""
    tol = resolve(tol)
    A, E = _pair(A, E)
    m, n = A.shape
    if k is None:
        k = k_singular_polar(A, E, tol) if polar else k_singular(A, E, tol)
    if not k.admissible:
        raise KTooLarge(f"k = {k.value:.6g} exceeds 1")
    f = cl.svd(A, tol)
    r = f.rank
    sig = f.sigma
    upper = tuple(
        SingularUpper(i, float(sig[i - 1]), (1.0 + k.value) * float(sig[i - 1]), m + n - 2 * r + i)
        for i in range(1, max(0, 2 * r - max(m, n)) + 1)
    )
    lower = tuple(
        SingularLower(i, float(sig[i - 1]), (1.0 - k.value) * float(sig[i - 1]))
        for i in range(1, r + 1)
    )
    return SingularBoundReport(m, n, r, k, upper, lower)


def check_singular_entries(
    s: np.ndarray, report: SingularBoundReport, slack: float
) -> BoundVerdict:
    margins = [b.ceiling - float(s[b.target_index - 1]) for b in report.upper_entries]
    margins += [float(s[b.index - 1]) - b.floor for b in report.lower_entries]
    worst = -min(margins) if margins else 0.0
    return BoundVerdict(all(x >= -slack for x in margins), worst, tuple(margins), slack)


def verify_singular_bounds(
    A, E, report: SingularBoundReport, tol: Tolerances | None = None
) -> BoundVerdict:
    """Recompute the SVD of A + E and check every ceiling and floor."""
    tol = resolve(tol)
    A, E = _pair(A, E)
    if A.shape != (report.m, report.n):
        raise DimensionMismatch(f"report is for {report.m}x{report.n}, matrices are {A.shape}")
    s = cl.svd(A + E, tol).sigma
    slack = tol.check_slack * max(cl.spectral_norm(A, tol), cl.spectral_norm(E, tol))
    return check_singular_entries(s, report, slack)
