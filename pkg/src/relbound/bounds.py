"""Bound constants k and relative eigenvalue bounds for A + E.

For Hermitian A of rank r (eigenvalues in inertia-default order) and
Hermitian E with a constant k <= 1, every i in 1..r satisfies

    lambda_{n-r+i}(A + E) <= lambda_i + k |lambda_i|
    lambda_i(A + E)       >= lambda_i - k |lambda_i|

with A + E in decreasing order. When A and A + E are both positive
semi-definite the restriction k <= 1 is dropped.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import core_linalg as cl
from .config import Tolerances, resolve
from .core_linalg import Ordering, SpectralDecomposition
from .errors import (
    DimensionMismatch,
    FactorizationInvalid,
    KTooLarge,
    NotPsd,
    PolarConditionInvalid,
)


class KFormula(enum.Enum):
    SQRT_PINV = "SqrtPinv"
    PINV_LEFT = "PinvLeft"
    PINV_RIGHT = "PinvRight"
    GENERAL_FACTOR = "GeneralFactor"
    TWO_SIDED_POLAR = "TwoSidedPolar"
    PSEUDO_HALF = "PseudoHalf"


class Side(enum.Enum):
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class KEstimate:
    value: float
    formula: KFormula
    admissible: bool

    @classmethod
    def of(cls, value: float, formula: KFormula, tol: Tolerances | None = None) -> "KEstimate":
        tol = resolve(tol)
        value = float(value)
        return cls(value, formula, value <= 1.0 + tol.k_slack)


@dataclass(frozen=True)
class EigenBound:
    index: int  # i, 1-based
    lambda_i: float
    lower: float  # floor for lambda_i(A + E)
    upper: float  # ceiling for lambda_{upper_index}(A + E)
    upper_index: int


@dataclass(frozen=True)
class EigenBoundReport:
    n: int
    r: int
    entries: tuple[EigenBound, ...]
    k: KEstimate
    psd_mode: bool


@dataclass(frozen=True)
class BoundVerdict:
    holds: bool
    worst_violation: float  # -(smallest margin); <= 0 means every check has room
    margins: tuple[float, ...] = field(default=(), repr=False)
    slack: float = 0.0


# --------------------------------------------------------------------------
# helpers


def _pair(A, E, tol: Tolerances):
    A = cl.as_hermitian(A, "A", tol)
    E = cl.as_hermitian(E, "E", tol)
    if A.shape != E.shape:
        raise DimensionMismatch(f"A is {A.shape} but E is {E.shape}")
    return A, E


def _decompose(A, dec: SpectralDecomposition | None, tol: Tolerances) -> SpectralDecomposition:
    if dec is not None and dec.ordering is Ordering.INERTIA_DEFAULT:
        return dec
    return cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)


def compressed_k_matrix(dec: SpectralDecomposition, E: np.ndarray) -> np.ndarray:
    """``|D_r|^{-1/2} V_r* E V_r |D_r|^{-1/2}``, an r x r Hermitian matrix.

    Its nonzero eigenvalues are those of ``(P^{1/2})^+ E (P^{1/2})^+``.
    """
    Vr = dec.Vr
    w = 1.0 / np.sqrt(np.abs(dec.Dr))
    K = (Vr.conj().T @ E @ Vr) * np.outer(w, w)
    return 0.5 * (K + K.conj().T)


def _hermitian_max_abs(M: np.ndarray, tol: Tolerances) -> float:
    if M.size == 0:
        return 0.0
    return cl.hermitian_norm(M, tol)


# --------------------------------------------------------------------------
# k estimates


def k_sqrt(A, E, tol: Tolerances | None = None, dec: SpectralDecomposition | None = None) -> KEstimate:
    """k = ||(P^{1/2})^+ E (P^{1/2})^+||, P the polar factor of A.

    Equal to ||(A^{1/2})^+ E (A^{1/2})^+|| for any normal square root; the
    real positive semi-definite route avoids complex branches.
    """
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    dec = _decompose(A, dec, tol)
    value = _hermitian_max_abs(compressed_k_matrix(dec, E), tol)
    return KEstimate.of(value, KFormula.SQRT_PINV, tol)


def k_sqrt_complex(A, E, tol: Tolerances | None = None) -> float:
    """||(A^{1/2})^+ E (A^{1/2})^+|| through the principal complex square root."""
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    R = cl.pinv_sqrt(cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol))
    return cl.spectral_norm(R @ E @ R, tol)


def hermitian_pinv(dec: SpectralDecomposition) -> np.ndarray:
    """``A^+ = V_r D_r^{-1} V_r*`` from a spectral decomposition."""
    Vr = dec.Vr
    M = (Vr / dec.Dr) @ Vr.conj().T
    return 0.5 * (M + M.conj().T)


def k_pinv(
    A,
    E,
    side: Side = Side.LEFT,
    tol: Tolerances | None = None,
    dec: SpectralDecomposition | None = None,
) -> KEstimate:
    """k = ||A^+ E|| (left) or ||E A^+|| (right)."""
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    Ap = hermitian_pinv(_decompose(A, dec, tol))
    if side is Side.LEFT:
        return KEstimate.of(cl.spectral_norm(Ap @ E, tol), KFormula.PINV_LEFT, tol)
    return KEstimate.of(cl.spectral_norm(E @ Ap, tol), KFormula.PINV_RIGHT, tol)


def _factor_pair(A: np.ndarray, A1, A2):
    A1 = cl.as_matrix(A1, "A1")
    A2 = cl.as_matrix(A2, "A2")
    if A1.shape != A.shape or A2.shape != A.shape:
        raise DimensionMismatch(
            f"factors must be {A.shape}, got {A1.shape} and {A2.shape}"
        )
    return A1, A2


def _k_factored(A1: np.ndarray, E: np.ndarray, A2: np.ndarray, tol: Tolerances) -> float:
    return cl.spectral_norm(cl.pseudo_inverse(A1, tol) @ E @ cl.pseudo_inverse(A2, tol), tol)


def k_general(A, E, A1, A2, tol: Tolerances | None = None) -> KEstimate:
    """k = ||A1^+ E A2^+|| for a commuting factorization A = A1 A2 = A2 A1."""
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    A1, A2 = _factor_pair(A, A1, A2)
    scale = cl.spectral_norm(A, tol)
    for label, prod in (("A1 A2", A1 @ A2), ("A2 A1", A2 @ A1)):
        gap = cl.spectral_norm(A - prod, tol)
        if gap > tol.factor_tol * scale:
            raise FactorizationInvalid(f"||A - {label}|| = {gap:.3e} exceeds tolerance")
    return KEstimate.of(_k_factored(A1, E, A2, tol), KFormula.GENERAL_FACTOR, tol)


def left_polar_factor(M, tol: Tolerances | None = None) -> np.ndarray:
    """P1 = (M M*)^{1/2} so that M = P1 S1."""
    f = cl.svd(M, tol)
    k = f.sigma.size
    U = f.U[:, :k]
    P = (U * f.sigma) @ U.conj().T
    return 0.5 * (P + P.conj().T)


def right_polar_factor(M, tol: Tolerances | None = None) -> np.ndarray:
    """P2 = (M* M)^{1/2} so that M = S2 P2."""
    f = cl.svd(M, tol)
    k = f.sigma.size
    V = f.V[:, :k]
    P = (V * f.sigma) @ V.conj().T
    return 0.5 * (P + P.conj().T)


def k_general_polar(A, E, A1, A2, tol: Tolerances | None = None) -> KEstimate:
    """k = ||A1^+ E A2^+|| when the polar factors satisfy P = P1 P2 = P2 P1.

    P1 is the left polar factor of A1 and P2 the right polar factor of A2.
    No relation between A and A1, A2 themselves is required.
    """
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    A1, A2 = _factor_pair(A, A1, A2)
    P = cl.polar_factor(cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)).P
    P1 = left_polar_factor(A1, tol)
    P2 = right_polar_factor(A2, tol)
    scale = cl.spectral_norm(P, tol)
    for label, prod in (("P1 P2", P1 @ P2), ("P2 P1", P2 @ P1)):
        gap = cl.spectral_norm(P - prod, tol)
        if gap > tol.factor_tol * scale:
            raise PolarConditionInvalid(f"||P - {label}|| = {gap:.3e} exceeds tolerance")
    return KEstimate.of(_k_factored(A1, E, A2, tol), KFormula.GENERAL_FACTOR, tol)


# --------------------------------------------------------------------------
# bounds


def bound_entries(eigenvalues: np.ndarray, n: int, r: int, k: float) -> tuple[EigenBound, ...]:
    out = []
    for i in range(1, r + 1):
        lam = float(eigenvalues[i - 1])
        rad = k * abs(lam)
        out.append(EigenBound(i, lam, lam - rad, lam + rad, n - r + i))
    return tuple(out)


def eigen_bounds(
    A,
    E,
    k: KEstimate,
    psd_mode: bool = False,
    tol: Tolerances | None = None,
    dec: SpectralDecomposition | None = None,
) -> EigenBoundReport:
    """Per-index relative bound intervals for the eigenvalues of A + E."""
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    dec = _decompose(A, dec, tol)
    if psd_mode:
        if not cl.is_psd(dec):
            raise NotPsd("A is not positive semi-definite")
        if not cl.is_psd(cl.hermitian_eig(A + E, Ordering.DECREASING, tol)):
            raise NotPsd("A + E is not positive semi-definite")
    elif not k.admissible:
        raise KTooLarge(f"k = {k.value:.6g} exceeds 1; only psd_mode drops this requirement")
    entries = bound_entries(dec.eigenvalues, dec.n, dec.rank, k.value)
    return EigenBoundReport(dec.n, dec.rank, entries, k, psd_mode)


def check_slack(A: np.ndarray, E: np.ndarray, tol: Tolerances) -> float:
    return tol.check_slack * max(cl.hermitian_norm(A, tol), cl.hermitian_norm(E, tol))


def check_eigen_entries(
    mu: np.ndarray, entries: tuple[EigenBound, ...], slack: float
) -> BoundVerdict:
    """Compare decreasing eigenvalues ``mu`` of A + E against bound entries."""
    margins = []
    for b in entries:
        margins.append(b.upper - float(mu[b.upper_index - 1]))
        margins.append(float(mu[b.index - 1]) - b.lower)
    worst = -min(margins) if margins else 0.0
    holds = all(m >= -slack for m in margins)
    return BoundVerdict(holds, worst, tuple(margins), slack)


def verify_eigen_bounds(A, E, report: EigenBoundReport, tol: Tolerances | None = None) -> BoundVerdict:
    """Re-diagonalize A + E and check every ceiling and floor in ``report``."""
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    if A.shape[0] != report.n:
        raise DimensionMismatch(f"report is for n = {report.n}, matrices are {A.shape}")
    mu = cl.eigvals_decreasing(A + E, tol)
    # every nonzero eigenvalue of A appears in the report, so ||A|| is free
    norm_A = max((abs(b.lambda_i) for b in report.entries), default=0.0)
    slack = tol.check_slack * max(norm_A, cl.hermitian_norm(E, tol))
    return check_eigen_entries(mu, report.entries, slack)
