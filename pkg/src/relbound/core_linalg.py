"""Dense complex factorizations used by the bound formulas.

Eigen- and singular value decompositions are computed with Jacobi methods
(two-sided for Hermitian matrices, one-sided for rectangular ones). Rotations
are applied in round-robin order so that each step updates ``n // 2``
disjoint index pairs at once with vectorized numpy operations.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .config import Tolerances, resolve
from .errors import DimensionMismatch, InvalidMatrix, NoConvergence, NotHermitian

_EPS = np.finfo(np.float64).eps


class Ordering(enum.Enum):
    DECREASING = "decreasing"
    # nonzero eigenvalues non-increasing, flushed zeros last
    INERTIA_DEFAULT = "inertia_default"


# --------------------------------------------------------------------------
# validation


def as_matrix(M, name: str = "matrix") -> np.ndarray:
    """Validate a dense 2-D matrix and return it as a complex128 array."""
    A = np.asarray(M)
    if A.ndim != 2:
        raise InvalidMatrix(f"{name} must be 2-D, got shape {A.shape}")
    if A.shape[0] < 1 or A.shape[1] < 1:
        raise InvalidMatrix(f"{name} must have at least one row and column")
    A = A.astype(np.complex128, copy=True)
    if not np.all(np.isfinite(A)):
        raise InvalidMatrix(f"{name} has non-finite entries")
    return A


def as_hermitian(M, name: str = "matrix", tol: Tolerances | None = None) -> np.ndarray:
    """Validate near-Hermitian input and return exactly ``(M + M*) / 2``."""
    tol = resolve(tol)
    A = as_matrix(M, name)
    if A.shape[0] != A.shape[1]:
        raise NotHermitian(f"{name} must be square, got shape {A.shape}")
    skew = A - A.conj().T
    if np.any(skew):
        asym = np.linalg.norm(skew, 2)
        if asym > tol.herm_tol * np.linalg.norm(A, 2):
            raise NotHermitian(f"{name} is not Hermitian: ||M - M*|| = {asym:.3e}")
    # (a + conj(b)) / 2 is bit-exactly Hermitian with a real diagonal
    return 0.5 * (A + A.conj().T)


def same_shape(*mats: np.ndarray) -> None:
    shape = mats[0].shape
    for M in mats[1:]:
        if M.shape != shape:
            raise DimensionMismatch(f"shape mismatch: {shape} vs {M.shape}")


# --------------------------------------------------------------------------
# Jacobi machinery


@lru_cache(maxsize=256)
def _round_robin(n: int) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
    """Circle-method tournament: n-1 (or n) rounds of disjoint index pairs."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        P, Q = [], []
        for i in range(m // 2):
            a, b = players[i], players[m - 1 - i]
            if a < n and b < n:
                P.append(min(a, b))
                Q.append(max(a, b))
        rounds.append((np.array(P, dtype=np.intp), np.array(Q, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _rotation(app: np.ndarray, aqq: np.ndarray, apq: np.ndarray):
    """Entries of G = diag(1, conj(phase)) @ [[c, s], [-s, c]].

    ``G* [[app, apq], [conj(apq), aqq]] G`` is diagonal.
    """
    mag = np.abs(apq)
    nz = mag > 0.0
    safe = np.where(nz, mag, 1.0)
    phase = np.where(nz, apq / safe, 1.0)
    tau = (aqq - app) / (2.0 * safe)
    sign = np.where(tau >= 0.0, 1.0, -1.0)
    t = np.where(nz, sign / (np.abs(tau) + np.hypot(1.0, tau)), 0.0)
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    ph = phase.conj()
    return c, s, -s * ph, c * ph  # g_pp, g_pq, g_qp, g_qq


def _apply_cols(X: np.ndarray, P, Q, gpp, gpq, gqp, gqq) -> None:
    Xp = X[:, P]
    Xq = X[:, Q]
    X[:, P] = Xp * gpp + Xq * gqp
    X[:, Q] = Xp * gpq + Xq * gqq


def _offdiag_norm(A: np.ndarray) -> float:
    off = A.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def jacobi_eigh(H: np.ndarray, tol: Tolerances | None = None, vectors: bool = True):
    """Two-sided cyclic Jacobi for a Hermitian matrix.

    Returns unsorted ``(eigenvalues, V)`` with ``H V = V diag(eigenvalues)``;
    ``V`` is None when ``vectors`` is false.
    """
    tol = resolve(tol)
    A = np.array(H, dtype=np.complex128, copy=True)
    n = A.shape[0]
    V = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(A))
    if n == 1 or fro == 0.0:
        return A.diagonal().real.copy(), V if vectors else None
    target = tol.eig_tol * fro
    rounds = _round_robin(n)
    for _ in range(tol.max_sweeps):
        if _offdiag_norm(A) <= target:
            break
        for P, Q in rounds:
            apq = A[P, Q]
            gpp, gpq, gqp, gqq = _rotation(A[P, P].real, A[Q, Q].real, apq)
            _apply_cols(A, P, Q, gpp, gpq, gqp, gqq)
            Ap = A[P, :]
            Aq = A[Q, :]
            A[P, :] = gpp.conj()[:, None] * Ap + gqp.conj()[:, None] * Aq
            A[Q, :] = gpq.conj()[:, None] * Ap + gqq.conj()[:, None] * Aq
            A[P, Q] = 0.0
            A[Q, P] = 0.0
            if vectors:
                _apply_cols(V, P, Q, gpp, gpq, gqp, gqq)
    else:
        if _offdiag_norm(A) > target:
            raise NoConvergence(
                f"Jacobi eigensolver did not converge in {tol.max_sweeps} sweeps"
            )
    return A.diagonal().real.copy(), V if vectors else None


def jacobi_svd_tall(M: np.ndarray, tol: Tolerances | None = None):
    """One-sided (Hestenes) Jacobi on a tall matrix (rows >= cols).

    Returns ``(W, V)`` with ``M V = W`` and the columns of ``W`` mutually
    orthogonal; the column norms of ``W`` are the singular values.
    """
    tol = resolve(tol)
    W = np.array(M, dtype=np.complex128, copy=True)
    m, n = W.shape
    V = np.eye(n, dtype=np.complex128)
    fro = float(np.linalg.norm(W))
    if n == 1 or fro == 0.0:
        return W, V
    # sqrt(m) eps: the rounding level of a computed column inner product
    ratio_tol = np.sqrt(m) * _EPS
    # columns below this norm are numerical noise; their angles are irrelevant
    noise = (1e-3 * tol.eig_tol * fro) ** 2
    rounds = _round_robin(n)
    for _ in range(tol.max_sweeps):
        rotated = False
        for P, Q in rounds:
            Wp = W[:, P]
            Wq = W[:, Q]
            alpha = np.einsum("ij,ij->j", Wp.conj(), Wp).real
            beta = np.einsum("ij,ij->j", Wq.conj(), Wq).real
            gamma = np.einsum("ij,ij->j", Wp.conj(), Wq)
            active = (np.abs(gamma) > ratio_tol * np.sqrt(alpha * beta)) & (
                np.minimum(alpha, beta) > noise
            )
            if not active.any():
                continue
            rotated = True
            gamma = np.where(active, gamma, 0.0)
            gpp, gpq, gqp, gqq = _rotation(alpha, beta, gamma)
            W[:, P] = Wp * gpp + Wq * gqp
            W[:, Q] = Wp * gpq + Wq * gqq
            _apply_cols(V, P, Q, gpp, gpq, gqp, gqq)
        if not rotated:
            return W, V
    raise NoConvergence(f"one-sided Jacobi SVD did not converge in {tol.max_sweeps} sweeps")


# --------------------------------------------------------------------------
# decompositions


@dataclass(frozen=True)
class SpectralDecomposition:
    V: np.ndarray
    eigenvalues: np.ndarray
    rank: int
    ordering: Ordering
    rank_tol: float

    @property
    def n(self) -> int:
        return self.V.shape[0]

    @property
    def range_indices(self) -> np.ndarray:
        """Positions of the nonzero eigenvalues (|lambda| > rank_tol)."""
        return np.flatnonzero(np.abs(self.eigenvalues) > self.rank_tol)

    @property
    def Vr(self) -> np.ndarray:
        return self.V[:, self.range_indices]

    @property
    def Dr(self) -> np.ndarray:
        return self.eigenvalues[self.range_indices]

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.eigenvalues))) if self.n else 0.0

    def thin(self) -> "ThinSpectral":
        return ThinSpectral(self.Vr, self.Dr)

    def range_projector(self) -> np.ndarray:
        Vr = self.Vr
        return Vr @ Vr.conj().T


@dataclass(frozen=True)
class ThinSpectral:
    Vr: np.ndarray
    Dr: np.ndarray


@dataclass(frozen=True)
class SvdFactors:
    U: np.ndarray
    sigma: np.ndarray
    V: np.ndarray
    rank: int
    rank_tol: float

    @property
    def Ur(self) -> np.ndarray:
        return self.U[:, : self.rank]

    @property
    def Vr(self) -> np.ndarray:
        return self.V[:, : self.rank]

    @property
    def sigma_r(self) -> np.ndarray:
        return self.sigma[: self.rank]


@dataclass(frozen=True)
class PolarFactors:
    P: np.ndarray
    S: np.ndarray


def _freeze(*arrays: np.ndarray) -> None:
    for a in arrays:
        a.setflags(write=False)


def hermitian_eig(
    A,
    ordering: Ordering = Ordering.INERTIA_DEFAULT,
    tol: Tolerances | None = None,
) -> SpectralDecomposition:
    """Spectral decomposition of a Hermitian matrix with numerical rank.

    With ``INERTIA_DEFAULT`` the eigenvalues at or below ``rank_tol`` are
    flushed to exact zeros and placed last.
    """
    tol = resolve(tol)
    H = as_hermitian(A, "A", tol)
    lam, V = jacobi_eigh(H, tol)
    n = H.shape[0]
    norm = float(np.max(np.abs(lam)))
    rank_tol = tol.rank_tau * n * norm
    small = np.abs(lam) <= rank_tol
    rank = int(n - small.sum())
    if ordering is Ordering.DECREASING:
        order = np.argsort(-lam, kind="stable")
    else:
        lam = np.where(small, 0.0, lam)
        nz = np.flatnonzero(~small)
        order = np.concatenate(
            [nz[np.argsort(-lam[nz], kind="stable")], np.flatnonzero(small)]
        )
    lam = lam[order].copy()
    V = V[:, order].copy()
    _freeze(lam, V)
    return SpectralDecomposition(V, lam, rank, ordering, rank_tol)


def eigvals_decreasing(A, tol: Tolerances | None = None) -> np.ndarray:
    """Eigenvalues only, non-increasing; skips accumulating eigenvectors."""
    tol = resolve(tol)
    lam, _ = jacobi_eigh(as_hermitian(A, "A", tol), tol, vectors=False)
    return np.sort(lam)[::-1].copy()


def _complete_unitary(Q: np.ndarray, m: int) -> np.ndarray:
    """Extend orthonormal columns ``Q`` (m x r) to an m x m unitary."""
    r = Q.shape[1]
    if r == m:
        return Q
    basis = np.hstack([Q, np.eye(m, dtype=np.complex128)])
    full, _ = np.linalg.qr(basis, mode="reduced")
    full = full[:, :m]
    full[:, :r] = Q
    return full


def svd(A, tol: Tolerances | None = None) -> SvdFactors:
    """Full SVD ``A = U diag(sigma) V*`` with sigma non-increasing."""
    tol = resolve(tol)
    M = as_matrix(A, "A")
    m, n = M.shape
    wide = m < n
    T = M.conj().T if wide else M
    W, Vt = jacobi_svd_tall(T, tol)
    sig = np.linalg.norm(W, axis=0)
    order = np.argsort(-sig, kind="stable")
    sig = sig[order]
    W = W[:, order]
    Vt = Vt[:, order]
    rank_tol = tol.rank_tau * max(m, n) * (float(sig[0]) if sig.size else 0.0)
    rank = int(np.sum(sig > rank_tol))
    Ur = W[:, :rank] / sig[:rank]
    Ut = _complete_unitary(Ur, T.shape[0])
    U, V = (Vt, Ut) if wide else (Ut, Vt)
    sig = sig.copy()
    _freeze(U, sig, V)
    return SvdFactors(U, sig, V, rank, rank_tol)


def spectral_norm(A, tol: Tolerances | None = None) -> float:
    """2-norm, i.e. the largest singular value."""
    f = svd(A, tol)
    return float(f.sigma[0]) if f.sigma.size else 0.0


def hermitian_norm(A, tol: Tolerances | None = None) -> float:
    """2-norm of a Hermitian matrix as max |eigenvalue|."""
    lam = eigvals_decreasing(A, tol)
    return float(np.max(np.abs(lam))) if lam.size else 0.0


def pseudo_inverse(A, tol: Tolerances | None = None) -> np.ndarray:
    """Moore-Penrose inverse ``V_r diag(1/sigma_r) U_r*``."""
    f = svd(A, tol)
    return (f.Vr / f.sigma_r) @ f.Ur.conj().T


def _hermitize(M: np.ndarray) -> np.ndarray:
    return 0.5 * (M + M.conj().T)


def _range_outer(Vr: np.ndarray, d: np.ndarray) -> np.ndarray:
    return (Vr * d) @ Vr.conj().T


def polar_factor(dec: SpectralDecomposition) -> PolarFactors:
    """Polar factors P = V_r |D_r| V_r*, S = V diag(sign D_r, I) V*."""
    P = _hermitize(_range_outer(dec.Vr, np.abs(dec.Dr)))
    signs = np.ones(dec.n)
    idx = dec.range_indices
    signs[idx] = np.sign(dec.eigenvalues[idx])
    S = _hermitize(_range_outer(dec.V, signs))
    return PolarFactors(P, S)


def pinv_sqrt(dec: SpectralDecomposition) -> np.ndarray:
    """``(A^{1/2})^+`` with the principal square root of each eigenvalue.

    Negative eigenvalues give purely imaginary entries, so the result is
    complex and in general not Hermitian.
    """
    roots = np.sqrt(dec.Dr.astype(np.complex128))
    return _range_outer(dec.Vr, 1.0 / roots)


def sqrt_normal(dec: SpectralDecomposition) -> np.ndarray:
    """Principal normal square root ``V D^{1/2} V*``."""
    return _range_outer(dec.Vr, np.sqrt(dec.Dr.astype(np.complex128)))


def pinv_sqrt_polar(dec: SpectralDecomposition) -> np.ndarray:
    """``(P^{1/2})^+ = V_r |D_r|^{-1/2} V_r*``; Hermitian positive semi-definite."""
    return _hermitize(_range_outer(dec.Vr, 1.0 / np.sqrt(np.abs(dec.Dr))))


def sqrt_polar(dec: SpectralDecomposition) -> np.ndarray:
    """``P^{1/2} = V_r |D_r|^{1/2} V_r*``."""
    return _hermitize(_range_outer(dec.Vr, np.sqrt(np.abs(dec.Dr))))


def is_psd(dec: SpectralDecomposition) -> bool:
    return bool(np.all(dec.eigenvalues >= -dec.rank_tol))
