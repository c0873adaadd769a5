"""Numerical tolerances shared by every module.

All thresholds are scale-relative unless noted. ``rank_tau`` can be
overridden through the ``RELBOUND_RANK_TOL`` environment variable.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field, replace

RANK_TOL_ENV = "RELBOUND_RANK_TOL"
DEFAULT_RANK_TAU = 1e-12


def _rank_tau_from_env() -> float:
    raw = os.environ.get(RANK_TOL_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_RANK_TAU
    value = float(raw)
    if not value > 0.0:
        raise ValueError(f"{RANK_TOL_ENV} must be positive, got {raw!r}")
    return value


@dataclass(frozen=True)
class Tolerances:
    # eigen/singular value counts as zero iff |x| <= rank_tau * dim * ||A||
    rank_tau: float = field(default_factory=_rank_tau_from_env)
    # ||M - M*|| <= herm_tol * ||M|| to accept a matrix as Hermitian
    herm_tol: float = 1e-10
    # Jacobi stops once off(A) <= eig_tol * ||A||_F
    eig_tol: float = 1e-14
    max_sweeps: int = 30
    # k <= 1 + k_slack passes the admissibility gate
    k_slack: float = 1e-10
    # verification slack, relative to max(||A||, ||E||)
    check_slack: float = 1e-10
    factor_tol: float = 1e-8
    commute_tol: float = 1e-10
    invariance_tol: float = 1e-8
    # eigenvalues closer than mult_tol * ||A|| are treated as repeated
    mult_tol: float = 1e-10
    # slack on the sharpness conditions, relative to max(||A||, ||E||)
    cond_slack: float = 1e-10

    def with_(self, **changes) -> "Tolerances":
        return replace(self, **changes)


def default_tolerances() -> Tolerances:
    """Fresh defaults; re-reads the environment on every call."""
    return Tolerances()


def resolve(tol: Tolerances | None) -> Tolerances:
    return default_tolerances() if tol is None else tol
