r"""Covariance matrices, symplectic eigenvalues, universal invariants and
uncertainty-relation checks.

The universal invariants :math:`\Delta_j` are the sums of the principal minors of
order :math:`2j` of :math:`\Omega\sigma`. They are read off the characteristic
polynomial of :math:`\Omega\sigma`, whose coefficients come from the
Faddeev-LeVerrier recursion.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InconsistentInvariantsError, UnphysicalMatrixError
from .symplectic import omega

TOL_PHYS = 1e-9
TOL_ROOT = 1e-7
TOL_SYMMETRY = 1e-9
PD_PIVOT_TOL = 1e-12


@dataclass(frozen=True)
class CovarianceMatrix:
    """Real symmetric ``2n x 2n`` matrix of second moments (vacuum = identity).

    Inputs that are symmetric up to ``TOL_SYMMETRY`` (relative to the largest
    entry) are symmetrized; larger asymmetries are rejected.
    """

    matrix: np.ndarray
    label: str | None = None
    n_modes: int = field(init=False)

    def __post_init__(self):
        m = np.array(self.matrix, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ValueError(f"covariance matrix must be square, got shape {m.shape}")
        if m.shape[0] == 0 or m.shape[0] % 2:
            raise ValueError(f"covariance matrix dimension must be even and positive, got {m.shape[0]}")
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance matrix has non-finite entries")
        asym = np.max(np.abs(m - m.T))
        if asym > TOL_SYMMETRY * max(1.0, np.max(np.abs(m))):
            raise ValueError(f"covariance matrix is not symmetric (max asymmetry {asym:.3e})")
        m = (m + m.T) / 2
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "n_modes", m.shape[0] // 2)

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def block(self, i: int, j: int) -> np.ndarray:
        """The 2x2 submatrix coupling modes ``i`` and ``j``."""
        return self.matrix[2 * i:2 * i + 2, 2 * j:2 * j + 2]

    def congruence(self, S) -> CovarianceMatrix:
        """Return ``S.T @ sigma @ S``."""
        S = np.asarray(S, dtype=float)
        return CovarianceMatrix(S.T @ self.matrix @ S, self.label)

    def submatrix(self, modes) -> CovarianceMatrix:
        """Reduced covariance matrix of the listed modes."""
        idx = np.ravel([[2 * k, 2 * k + 1] for k in modes])
        return CovarianceMatrix(self.matrix[np.ix_(idx, idx)], self.label)


def as_cm(sigma) -> CovarianceMatrix:
    if isinstance(sigma, CovarianceMatrix):
        return sigma
    return CovarianceMatrix(sigma)


@dataclass(frozen=True)
class InvariantVector:
    """``deltas[j]`` holds Delta_j for j = 0..n; ``deltas[0] == 1``."""

    deltas: tuple[float, ...]
    sigma_n: float
    odd_sums: tuple[float, ...] = ()

    @property
    def n_modes(self) -> int:
        return len(self.deltas) - 1

    @classmethod
    def from_deltas(cls, deltas) -> InvariantVector:
        deltas = tuple(float(d) for d in deltas)
        if not deltas or deltas[0] != 1.0:
            raise ValueError("deltas must start with Delta_0 = 1")
        return cls(deltas, _alternating_sum(deltas))


@dataclass(frozen=True)
class UncertaintyReport:
    passed: bool
    sigma_n: float
    spectrum: tuple[float, ...] | None
    positive_definite: bool
    necessary_only: bool = False
    failed_conditions: tuple[str, ...] = ()

    @property
    def min_nu(self) -> float | None:
        return min(self.spectrum) if self.spectrum else None


def _alternating_sum(deltas) -> float:
    n = len(deltas) - 1
    return float(sum((-1) ** (n + j) * d for j, d in enumerate(deltas)))


def is_positive_definite(sigma) -> bool:
    """Cholesky test with pivots required above ``1e-12`` of the largest diagonal."""
    return _cholesky(np.asarray(getattr(sigma, "matrix", sigma), dtype=float)) is not None


def _cholesky(m: np.ndarray) -> np.ndarray | None:
    diag_max = np.max(np.diag(m))
    if diag_max <= 0:
        return None
    try:
        L = np.linalg.cholesky(m)
    except np.linalg.LinAlgError:
        return None
    if np.min(np.diag(L)) ** 2 < PD_PIVOT_TOL * diag_max:
        return None
    return L


def symplectic_eigenvalues(sigma) -> np.ndarray:
    """Symplectic eigenvalues sorted in descending order.

    With ``sigma = L L^T``, ``Omega sigma`` is similar to the antisymmetric
    ``L^T Omega L``, whose Hermitian counterpart ``i L^T Omega L`` has real
    eigenvalues ``+-nu_j``.
    """
    cm = as_cm(sigma)
    L = _cholesky(cm.matrix)
    if L is None:
        raise UnphysicalMatrixError("covariance matrix is not positive definite")
    n = cm.n_modes
    K = L.T @ omega(n) @ L
    K = (K - K.T) / 2
    ev = np.linalg.eigvalsh(1j * K)
    return ev[n:][::-1].copy()


def char_poly_coefficients(A) -> np.ndarray:
    """Coefficients ``c`` of ``det(t I - A) = sum_k c[k] t^(d-k)`` (``c[0] = 1``).

    Faddeev-LeVerrier recursion. ``A`` is rescaled to unit max-norm first and the
    coefficients rescaled back, which keeps the traces well scaled.
    """
    A = np.asarray(A, dtype=float)
    d = A.shape[0]
    scale = np.max(np.abs(A))
    if scale == 0:
        c = np.zeros(d + 1)
        c[0] = 1.0
        return c
    B = A / scale
    c = np.empty(d + 1)
    c[0] = 1.0
    M = np.zeros_like(B)
    eye = np.eye(d)
    for k in range(1, d + 1):
        M = B @ M + c[k - 1] * eye
        c[k] = -np.trace(B @ M) / k
    return c * scale ** np.arange(d + 1)


def principal_minor_sums(A) -> np.ndarray:
    """``E[k]`` = sum of all principal minors of order ``k`` of ``A``, k = 0..d."""
    c = char_poly_coefficients(A)
    return c * (-1.0) ** np.arange(len(c))


def principal_invariants(sigma) -> InvariantVector:
    cm = as_cm(sigma)
    E = principal_minor_sums(omega(cm.n_modes) @ cm.matrix)
    deltas = E[0::2].copy()
    deltas[0] = 1.0
    return InvariantVector(
        deltas=tuple(float(d) for d in deltas),
        sigma_n=_alternating_sum(deltas),
        odd_sums=tuple(float(e) for e in E[1::2]),
    )


def sigma_n(sigma) -> float:
    return principal_invariants(sigma).sigma_n


def check_symplectic_uncertainty(sigma, tol_phys: float = TOL_PHYS) -> UncertaintyReport:
    """Test ``Sigma_n >= 0``; a necessary condition only when ``n >= 2``."""
    cm = as_cm(sigma)
    s = sigma_n(cm)
    passed = s >= -tol_phys
    return UncertaintyReport(
        passed=passed,
        sigma_n=s,
        spectrum=None,
        positive_definite=is_positive_definite(cm),
        necessary_only=cm.n_modes >= 2,
        failed_conditions=() if passed else ("sigma_n >= 0",),
    )


def check_full_uncertainty(sigma, tol_phys: float = TOL_PHYS) -> UncertaintyReport:
    """Positive definiteness plus every symplectic eigenvalue ``>= 1``."""
    cm = as_cm(sigma)
    s = sigma_n(cm)
    if not is_positive_definite(cm):
        return UncertaintyReport(False, s, None, False, failed_conditions=("sigma > 0",))
    nu = symplectic_eigenvalues(cm)
    passed = bool(nu[-1] >= 1 - tol_phys)
    return UncertaintyReport(
        passed=passed,
        sigma_n=s,
        spectrum=tuple(float(v) for v in nu),
        positive_definite=True,
        failed_conditions=() if passed else ("min nu >= 1",),
    )


def check_two_mode_full(sigma, tol_phys: float = TOL_PHYS) -> UncertaintyReport:
    """Two-mode equivalent of the full relation, from invariants alone:
    ``Delta_2 - Delta_1 + 1 >= 0``, ``Delta_2 >= 1`` and ``sigma > 0``.
    """
    cm = as_cm(sigma)
    if cm.n_modes != 2:
        raise ValueError(f"two-mode check needs n_modes = 2, got {cm.n_modes}")
    inv = principal_invariants(cm)
    pd = is_positive_definite(cm)
    failed = []
    if inv.sigma_n < -tol_phys:
        failed.append("Delta_2 - Delta_1 + Delta_0 >= 0")
    if inv.deltas[2] < 1 - tol_phys:
        failed.append("Delta_2 >= 1")
    if not pd:
        failed.append("sigma > 0")
    return UncertaintyReport(
        passed=not failed,
        sigma_n=inv.sigma_n,
        spectrum=None,
        positive_definite=pd,
        failed_conditions=tuple(failed),
    )


def recover_spectrum_from_invariants(deltas, tol_root: float = TOL_ROOT) -> np.ndarray:
    """Symplectic eigenvalues from the invariants.

    The squares ``nu_j^2`` are the roots of
    ``t^n - Delta_1 t^(n-1) + Delta_2 t^(n-2) - ... + (-1)^n Delta_n``,
    found as eigenvalues of its companion matrix.
    """
    d = np.asarray(getattr(deltas, "deltas", deltas), dtype=float)
    if d.ndim != 1 or len(d) < 2 or d[0] != 1.0:
        raise ValueError("expected (Delta_0 = 1, Delta_1, ..., Delta_n)")
    n = len(d) - 1
    coeffs = d * (-1.0) ** np.arange(n + 1)
    companion = np.zeros((n, n))
    companion[0, :] = -coeffs[1:]
    companion[1:, :-1] = np.eye(n - 1)
    roots = np.linalg.eigvals(companion)
    bound = tol_root * max(np.max(np.abs(roots)), np.finfo(float).tiny)
    if np.max(np.abs(roots.imag)) > bound:
        raise InconsistentInvariantsError("invariants give complex squared eigenvalues")
    t = roots.real
    if np.min(t) < -bound:
        raise InconsistentInvariantsError("invariants give negative squared eigenvalues")
    return np.sort(np.sqrt(np.clip(t, 0.0, None)))[::-1]
