"""Exception types raised by the analysis routines."""


class UnphysicalMatrixError(ValueError):
    """The matrix is not positive definite, so no symplectic spectrum exists."""


class InconsistentInvariantsError(ValueError):
    """The invariants cannot come from a positive definite covariance matrix."""
