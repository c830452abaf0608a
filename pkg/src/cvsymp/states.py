"""Reference covariance matrices."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .invariants import CovarianceMatrix
from .symplectic import beam_splitter, random_symplectic, squeezer


@dataclass(frozen=True)
class GhzSpec:
    n_modes: int
    r: float
    q: float = 1.0

    def __post_init__(self):
        if int(self.n_modes) != self.n_modes or self.n_modes < 2:
            raise ValueError(f"GHZ state needs at least 2 modes, got {self.n_modes}")
        if not self.r >= 0:
            raise ValueError(f"squeezing r must be >= 0, got {self.r}")
        if not self.q >= 1:
            raise ValueError(f"noise factor q must be >= 1, got {self.q}")


def vacuum(n_modes: int) -> CovarianceMatrix:
    if n_modes < 1:
        raise ValueError(f"n_modes must be >= 1, got {n_modes}")
    return CovarianceMatrix(np.eye(2 * n_modes), "vacuum")


def thermal(n_modes: int, q_list) -> CovarianceMatrix:
    """``diag(q_j, q_j)`` per mode; a scalar ``q_list`` applies to every mode."""
    q = np.broadcast_to(np.asarray(q_list, dtype=float), (n_modes,))
    if np.any(~(q >= 1)):
        raise ValueError(f"thermal factors must be >= 1, got {q.tolist()}")
    return CovarianceMatrix(np.diag(np.repeat(q, 2)), "thermal")


def two_mode_squeezed(r: float) -> CovarianceMatrix:
    c, s = np.cosh(2 * r), np.sinh(2 * r)
    Z = np.diag([1.0, -1.0])
    m = np.block([[c * np.eye(2), s * Z], [s * Z, c * np.eye(2)]])
    return CovarianceMatrix(m, "two-mode squeezed")


def n_splitter(n_modes: int) -> np.ndarray:
    """Beam-splitter cascade distributing mode 0 evenly over all modes.

    Splitter ``k`` mixes modes ``k`` and ``k+1`` with ``cos(theta_k) = 1/sqrt(N-k)``
    (zero-based ``k``), applied in order ``k = 0, 1, ..., N-2``.
    """
    S = np.eye(2 * n_modes)
    for k in range(n_modes - 1):
        theta = np.arccos(1 / np.sqrt(n_modes - k))
        # (k+1, k) ordering sends +sin(theta) of mode k into mode k+1
        S = beam_splitter(theta, (k + 1, k), n_modes).matrix @ S
    return S


def ghz_type(spec: GhzSpec) -> CovarianceMatrix:
    """Noisy GHZ-type state: squeezed vacua through the N-splitter, CM times ``q``.

    Mode 0 is momentum-squeezed, the others position-squeezed, all by ``r``.
    """
    N = spec.n_modes
    S = squeezer(-spec.r, 0, N).matrix
    for k in range(1, N):
        S = squeezer(spec.r, k, N).matrix @ S
    S = n_splitter(N) @ S
    return CovarianceMatrix(spec.q * (S @ S.T), f"ghz N={N} r={spec.r} q={spec.q}")


def with_spectrum(nu, S) -> CovarianceMatrix:
    """``S.T @ diag(nu_1, nu_1, ...) @ S``."""
    S = np.asarray(S, dtype=float)
    D = np.diag(np.repeat(np.asarray(nu, dtype=float), 2))
    return CovarianceMatrix(S.T @ D @ S)


def random_physical_cm(n_modes: int, max_nu: float = 3.0, seed=None, scale: float = 1.0) -> CovarianceMatrix:
    """Random symplectic congruence of a spectrum drawn uniformly from ``[1, max_nu]``."""
    if max_nu < 1:
        raise ValueError(f"max_nu must be >= 1, got {max_nu}")
    rng = np.random.default_rng(seed)
    nu = rng.uniform(1.0, max_nu, size=n_modes)
    S = random_symplectic(n_modes, rng, scale)
    return with_spectrum(nu, S)
