"""When is the relative bound sharper than Weyl's absolute bound?

Weyl gives |lambda_i(A + E) - lambda_i(A)| <= ||E|| for every index; the
relative bound has radius k |lambda_i|. The checks here are the sufficient
conditions under which the relative radius wins, plus existence results
for an index where it must win.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import core_linalg as cl
from .bounds import _pair, compressed_k_matrix
from .config import Tolerances, resolve
from .core_linalg import Ordering
from .errors import CertificationError, IndexOutOfRange, SingularInput, ZeroMatrix


class Condition(enum.Enum):
    EQ28 = "Eq28"
    EQ32 = "Eq32"
    NONE = "None"


@dataclass(frozen=True)
class SharpnessVerdict:
    index: int
    weyl_radius: float
    relative_radius: float
    condition_met: bool
    condition: Condition
    sharper: bool


@dataclass(frozen=True)
class ConditionTerms:
    """Both sides of the sufficient condition at one index."""

    index: int
    j_prime: int
    lhs: float
    rhs: float  # ||E||
    slack: float

    @property
    def met(self) -> bool:
        return self.lhs <= self.rhs + self.slack


class _Spectra:
    """Spectral data of (A, E) shared by every per-index check."""

    def __init__(self, A, E, tol: Tolerances):
        A, E = _pair(A, E, tol)
        self.A, self.E = A, E
        self.dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
        self.n, self.r = self.dec.n, self.dec.rank
        self.lam = self.dec.eigenvalues
        # zeros interleaved by value, for the shifted-index Weyl comparison
        self.lam_dec = np.sort(self.lam, kind="stable")[::-1]
        self.lam_E = cl.eigvals_decreasing(E, tol)
        self.norm_E = float(np.max(np.abs(self.lam_E)))
        self.norm_A = self.dec.norm
        self.slack = tol.cond_slack * max(self.norm_A, self.norm_E)
        self.tol = tol
        self._mu = None

    @property
    def mu(self) -> np.ndarray:
        """Decreasing eigenvalues of the compressed k-matrix."""
        if self._mu is None:
            K = compressed_k_matrix(self.dec, self.E)
            self._mu = cl.eigvals_decreasing(K, self.tol) if K.size else np.zeros(0)
        return self._mu

    @property
    def k(self) -> float:
        return float(np.max(np.abs(self.mu))) if self.mu.size else 0.0

    @property
    def min_nonzero(self) -> float:
        return float(np.min(np.abs(self.lam[: self.r])))

    def j_prime(self) -> int:
        # smallest index attaining the max; 1 when the product vanishes
        return int(np.argmax(np.abs(self.mu))) + 1

    def terms(self, i: int) -> ConditionTerms:
        n, r = self.n, self.r
        j = self.j_prime()
        e_max = max(abs(self.lam_E[j - 1]), abs(self.lam_E[n - r + j - 1]))
        lam_i = float(self.lam[i - 1])
        lhs = lam_i - float(self.lam_dec[n - r + i - 1]) + e_max / self.min_nonzero * abs(lam_i)
        return ConditionTerms(i, j, float(lhs), self.norm_E, self.slack)


def weyl_bound(A, E, tol: Tolerances | None = None) -> list[tuple[float, float]]:
    """Intervals [lambda_i(A) - ||E||, lambda_i(A) + ||E||], decreasing order."""
    tol = resolve(tol)
    A, E = _pair(A, E, tol)
    lam = cl.eigvals_decreasing(A, tol)
    radius = cl.hermitian_norm(E, tol)
    return [(float(x - radius), float(x + radius)) for x in lam]


def condition_28_terms(A, E, i: int, tol: Tolerances | None = None) -> ConditionTerms:
    sp = _Spectra(A, E, resolve(tol))
    if sp.r < sp.n:
        raise SingularInput(f"A has rank {sp.r} < {sp.n}; use condition_32")
    if not 1 <= i <= sp.n:
        raise IndexOutOfRange(f"index {i} outside 1..{sp.n}")
    return sp.terms(i)


def condition_28(A, E, i: int, tol: Tolerances | None = None) -> bool:
    """Sufficient condition for k |lambda_i(A)| <= ||E|| when A is non-singular."""
    return condition_28_terms(A, E, i, tol).met


def condition_32_terms(A, E, i: int, tol: Tolerances | None = None) -> ConditionTerms:
    sp = _Spectra(A, E, resolve(tol))
    if sp.r == 0:
        raise ZeroMatrix("A has rank 0")
    if not 1 <= i <= sp.r:
        raise IndexOutOfRange(f"index {i} outside 1..{sp.r}")
    return sp.terms(i)


def condition_32(A, E, i: int, tol: Tolerances | None = None) -> bool:
    """Rank-deficient sufficient condition at index i in 1..rank(A).

    When true, lambda_i + k|lambda_i| <= lambda_{n-r+i}(A) + ||E|| and
    k|lambda_i| <= ||E||.
    """
    return condition_32_terms(A, E, i, tol).met


def exists_sharper_index(A, E, tol: Tolerances | None = None) -> int:
    """Index of a smallest-magnitude eigenvalue of non-singular A.

    At that index k |lambda_i| <= ||E||, and when k <= 1 also
    |lambda_i(A + E) - lambda_i(A)| <= k |lambda_i|. Both are checked
    numerically before returning.
    """
    tol = resolve(tol)
    sp = _Spectra(A, E, tol)
    if sp.r < sp.n:
        raise SingularInput(f"A has rank {sp.r} < {sp.n}")
    mags = np.abs(sp.lam)
    i = int(np.flatnonzero(mags == mags.min())[0]) + 1
    lam_i = float(sp.lam[i - 1])
    rel = sp.k * abs(lam_i)
    if rel > sp.norm_E + sp.slack:
        raise CertificationError(f"k|lambda_{i}| = {rel:.6e} > ||E|| = {sp.norm_E:.6e}")
    if sp.k <= 1.0 + tol.k_slack:
        shifted = cl.eigvals_decreasing(sp.A + sp.E, tol)[i - 1]
        if abs(shifted - lam_i) > rel + sp.slack:
            raise CertificationError(f"relative bound fails at index {i}")
    return i


def multiplicity_guarantee(A, tol: Tolerances | None = None) -> int | None:
    """Index whose sufficient condition holds for every Hermitian E, if any.

    Exists when the smallest-magnitude nonzero eigenvalue is repeated at
    least n - r + 1 times (clustered within mult_tol * ||A||).
    """
    tol = resolve(tol)
    H = cl.as_hermitian(A, "A", tol)
    dec = cl.hermitian_eig(H, Ordering.INERTIA_DEFAULT, tol)
    n, r = dec.n, dec.rank
    if r == 0:
        raise ZeroMatrix("A has rank 0")
    lam = dec.eigenvalues[:r]
    gap = tol.mult_tol * dec.norm
    smallest = np.min(np.abs(lam))
    i = int(np.flatnonzero(np.abs(np.abs(lam) - smallest) <= gap)[0]) + 1
    copies = int(np.sum(np.abs(lam - lam[i - 1]) <= gap))
    return i if copies >= n - r + 1 else None


def sharpness_report(A, E, tol: Tolerances | None = None) -> list[SharpnessVerdict]:
    """Per-index comparison of the relative bound against Weyl's bound."""
    tol = resolve(tol)
    sp = _Spectra(A, E, tol)
    n, r = sp.n, sp.r
    condition = Condition.EQ28 if r == n else Condition.EQ32
    out = []
    for i in range(1, r + 1):
        lam_i = float(sp.lam[i - 1])
        rel = sp.k * abs(lam_i)
        upper_ok = lam_i + rel <= float(sp.lam_dec[n - r + i - 1]) + sp.norm_E + sp.slack
        lower_ok = rel <= sp.norm_E + sp.slack
        out.append(
            SharpnessVerdict(
                index=i,
                weyl_radius=sp.norm_E,
                relative_radius=rel,
                condition_met=sp.terms(i).met,
                condition=condition,
                sharper=bool(upper_ok and lower_ok),
            )
        )
    return out

