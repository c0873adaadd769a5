"""Relative Weyl-type perturbation bounds for possibly singular Hermitian matrices."""

from .bounds import (
    BoundVerdict,
    EigenBound,
    EigenBoundReport,
    KEstimate,
    KFormula,
    Side,
    eigen_bounds,
    k_general,
    k_general_polar,
    k_pinv,
    k_sqrt,
    verify_eigen_bounds,
)
from .config import Tolerances, default_tolerances
from .congruence import (
    CongruenceCheck,
    check_admissible,
    congruence_bounds,
    generate_admissible_D,
    k_invariance,
)
from .core_linalg import (
    Ordering,
    SpectralDecomposition,
    hermitian_eig,
    polar_factor,
    pseudo_inverse,
    svd,
)
from .errors import RelboundError
from .sharpness import (
    Condition,
    SharpnessVerdict,
    condition_28,
    condition_32,
    exists_sharper_index,
    multiplicity_guarantee,
    sharpness_report,
    weyl_bound,
)
from .singular import SingularBoundReport, k_singular, singular_bounds, verify_singular_bounds

__version__ = "0.1.0"

__all__ = [
    "BoundVerdict",
    "EigenBound",
    "EigenBoundReport",
    "KEstimate",
    "KFormula",
    "Side",
    "eigen_bounds",
    "k_general",
    "k_general_polar",
    "k_pinv",
    "k_sqrt",
    "verify_eigen_bounds",
    "Tolerances",
    "default_tolerances",
    "CongruenceCheck",
    "check_admissible",
    "congruence_bounds",
    "generate_admissible_D",
    "k_invariance",
    "Ordering",
    "SpectralDecomposition",
    "hermitian_eig",
    "polar_factor",
    "pseudo_inverse",
    "svd",
    "RelboundError",
    "Condition",
    "SharpnessVerdict",
    "condition_28",
    "condition_32",
    "exists_sharper_index",
    "multiplicity_guarantee",
    "sharpness_report",
    "weyl_bound",
    "SingularBoundReport",
    "k_singular",
    "singular_bounds",
    "verify_singular_bounds",
]
