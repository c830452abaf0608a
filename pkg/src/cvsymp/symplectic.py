r"""Symplectic form, Gaussian operation matrices and the Williamson decomposition.

Quadratures are ordered as :math:`(x_1, p_1, \ldots, x_n, p_n)` and mode indices
are zero-based throughout the library.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .errors import UnphysicalMatrixError

TOL_SYMP = 1e-9
TOL_NUM = 1e-8

_OMEGA_1 = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class SymplecticForm:
    n_modes: int
    matrix: np.ndarray


@dataclass(frozen=True)
class SymplecticMatrix:
    """Real matrix ``S`` with ``S.T @ Omega @ S == Omega``."""

    n_modes: int
    matrix: np.ndarray

    def __array__(self, dtype=None, copy=None):
        return self.matrix if dtype is None else self.matrix.astype(dtype)

    def __matmul__(self, other):
        other_m = other.matrix if isinstance(other, SymplecticMatrix) else np.asarray(other)
        out = self.matrix @ other_m
        if isinstance(other, SymplecticMatrix):
            return SymplecticMatrix(self.n_modes, _readonly(out))
        return out


def omega(n_modes: int) -> np.ndarray:
    """Return the ``2n x 2n`` symplectic form as a plain array."""
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    return np.kron(np.eye(int(n_modes)), _OMEGA_1)


def build_omega(n_modes: int) -> SymplecticForm:
    return SymplecticForm(int(n_modes), _readonly(omega(n_modes)))


def _check_even_square(S: np.ndarray) -> int:
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {S.shape}")
    if S.shape[0] % 2:
        raise ValueError(f"matrix dimension must be even, got {S.shape[0]}")
    return S.shape[0] // 2


def symplectic_residual(S) -> float:
    """Max-entry norm of ``S.T @ Omega @ S - Omega``."""
    S = np.asarray(S, dtype=float)
    n = _check_even_square(S)
    Om = omega(n)
    return float(np.max(np.abs(S.T @ Om @ S - Om)))


def is_symplectic(S, tol: float = TOL_SYMP) -> bool:
    return symplectic_residual(S) <= tol


def _check_mode(mode: int, n_modes: int) -> None:
    if not 0 <= mode < n_modes:
        raise ValueError(f"mode index {mode} out of range for {n_modes} modes")


def beam_splitter(theta: float, modes: tuple[int, int], n_modes: int) -> SymplecticMatrix:
    """Orthogonal symplectic mixing of two modes.

    Acts as ``x_i -> cos(t) x_i + sin(t) x_j`` and ``x_j -> -sin(t) x_i + cos(t) x_j``,
    identically on the momenta.
    """
    i, j = modes
    _check_mode(i, n_modes)
    _check_mode(j, n_modes)
    if i == j:
        raise ValueError("beam splitter needs two distinct modes")
    c, s = np.cos(theta), np.sin(theta)
    S = np.eye(2 * n_modes)
    for k in (0, 1):
        a, b = 2 * i + k, 2 * j + k
        S[a, a] = c
        S[a, b] = s
        S[b, a] = -s
        S[b, b] = c
    return SymplecticMatrix(n_modes, _readonly(S))


def squeezer(r: float, mode: int, n_modes: int) -> SymplecticMatrix:
    """Single-mode squeezer ``diag(e^-r, e^r)``; squeezes position for ``r > 0``."""
    _check_mode(mode, n_modes)
    S = np.eye(2 * n_modes)
    S[2 * mode, 2 * mode] = np.exp(-r)
    S[2 * mode + 1, 2 * mode + 1] = np.exp(r)
    return SymplecticMatrix(n_modes, _readonly(S))


def symplectic_from_generator(H) -> SymplecticMatrix:
    """Return ``expm(Omega @ H)`` for a real symmetric generator ``H``."""
    H = np.asarray(H, dtype=float)
    n = _check_even_square(H)
    H = (H + H.T) / 2
    return SymplecticMatrix(n, _readonly(expm(omega(n) @ H)))


def random_symplectic(n_modes: int, seed=None, scale: float = 1.0) -> SymplecticMatrix:
    """Sample ``expm(Omega @ H)`` with ``H`` random symmetric.

    Entries of ``H`` are uniform on ``[-scale, scale] / sqrt(2n)`` so that the
    spectral norm of the generator stays of order ``scale`` for every mode count.
    """
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    rng = np.random.default_rng(seed)
    dim = 2 * n_modes
    A = rng.uniform(-scale, scale, size=(dim, dim)) / np.sqrt(dim)
    return symplectic_from_generator((A + A.T) / 2)


def williamson(sigma, tol: float = TOL_NUM) -> tuple[SymplecticMatrix, np.ndarray]:
    r"""Williamson decomposition of a positive definite matrix.

    Returns ``(S, nu)`` with ``S.T @ sigma @ S = diag(nu_1, nu_1, ..., nu_n, nu_n)``
    and ``nu`` sorted in descending order.

    The antisymmetric matrix :math:`K = \sigma^{1/2}\Omega\sigma^{1/2}` has eigenvalues
    :math:`\pm i\nu_j`. An orthonormal eigenbasis of the Hermitian matrix ``iK``
    yields, from the real and imaginary parts of the ``+nu_j`` eigenvectors, an
    orthogonal ``O`` with ``O.T K O = diag(nu) (x) omega``; then
    ``S = sigma^{-1/2} O diag(nu)^{1/2}``.

    ``tol`` bounds the relative reconstruction residual; exceeding it raises.
    """
    sig = np.asarray(getattr(sigma, "matrix", sigma), dtype=float)
    n = _check_even_square(sig)
    sig = (sig + sig.T) / 2
    w, U = np.linalg.eigh(sig)
    if w[0] <= 1e-12 * max(abs(w[-1]), np.finfo(float).tiny):
        raise UnphysicalMatrixError("matrix is not positive definite")
    sqrt_w = np.sqrt(w)
    root = (U * sqrt_w) @ U.T
    inv_root = (U / sqrt_w) @ U.T

    K = root @ omega(n) @ root
    K = (K - K.T) / 2
    evals, vecs = np.linalg.eigh(1j * K)
    # eigh sorts ascending: the last n eigenvalues are +nu_j, largest last.
    idx = np.arange(2 * n - 1, n - 1, -1)
    nu = evals[idx].real
    V = vecs[:, idx]
    O = np.empty((2 * n, 2 * n))
    O[:, 0::2] = np.sqrt(2) * V.imag
    O[:, 1::2] = np.sqrt(2) * V.real

    S = inv_root @ O @ np.diag(np.repeat(np.sqrt(nu), 2))
    resid = np.max(np.abs(S.T @ sig @ S - np.diag(np.repeat(nu, 2))))
    if resid > tol * max(1.0, np.max(np.abs(sig))):
        raise ArithmeticError(f"Williamson residual {resid:.3e} exceeds tolerance")
    return SymplecticMatrix(n, _readonly(S)), _readonly(nu)
