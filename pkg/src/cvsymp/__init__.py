"""Symplectic invariants, uncertainty relations and separability criteria for
continuous-variable covariance matrices."""

__version__ = "0.1.0"

from .errors import InconsistentInvariantsError, UnphysicalMatrixError
from .invariants import (
    CovarianceMatrix,
    InvariantVector,
    check_full_uncertainty,
    check_symplectic_uncertainty,
    check_two_mode_full,
    principal_invariants,
    recover_spectrum_from_invariants,
    sigma_n,
    symplectic_eigenvalues,
)
from .separability import (
    Bipartition,
    Status,
    Verdict,
    is_bisymmetric,
    little_lemma_violation_count,
    partial_transpose,
    ppt_spectrum,
    separability_verdict,
    sigma_tilde,
)
from .states import GhzSpec, ghz_type, random_physical_cm, thermal, two_mode_squeezed, vacuum
from .symplectic import (
    beam_splitter,
    build_omega,
    is_symplectic,
    random_symplectic,
    squeezer,
    williamson,
)

__all__ = [
    "Bipartition",
    "CovarianceMatrix",
    "GhzSpec",
    "InconsistentInvariantsError",
    "InvariantVector",
    "Status",
    "UnphysicalMatrixError",
    "Verdict",
    "beam_splitter",
    "build_omega",
    "check_full_uncertainty",
    "check_symplectic_uncertainty",
    "check_two_mode_full",
    "ghz_type",
    "is_bisymmetric",
    "is_symplectic",
    "little_lemma_violation_count",
    "partial_transpose",
    "ppt_spectrum",
    "principal_invariants",
    "random_physical_cm",
    "random_symplectic",
    "recover_spectrum_from_invariants",
    "separability_verdict",
    "sigma_n",
    "sigma_tilde",
    "squeezer",
    "symplectic_eigenvalues",
    "thermal",
    "two_mode_squeezed",
    "vacuum",
    "williamson",
]
