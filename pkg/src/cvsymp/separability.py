"""Partial transposition, PPT spectra and separability verdicts for bipartitions."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .errors import UnphysicalMatrixError
from .invariants import (
    TOL_PHYS,
    CovarianceMatrix,
    as_cm,
    check_full_uncertainty,
    is_positive_definite,
    principal_invariants,
    symplectic_eigenvalues,
)

TOL_BISYM = 1e-8


@dataclass(frozen=True)
class Bipartition:
    """Split of the modes ``0..N-1`` into subsystems A and B (zero-based)."""

    modes_a: tuple[int, ...]
    modes_b: tuple[int, ...]

    def __post_init__(self):
        a = tuple(sorted(int(k) for k in self.modes_a))
        b = tuple(sorted(int(k) for k in self.modes_b))
        if not a or not b:
            raise ValueError("both subsystems must be non-empty")
        if len(set(a)) != len(a) or len(set(b)) != len(b) or set(a) & set(b):
            raise ValueError("subsystems must be disjoint with no repeated modes")
        if set(a) | set(b) != set(range(len(a) + len(b))):
            raise ValueError(f"modes must cover 0..{len(a) + len(b) - 1} exactly")
        object.__setattr__(self, "modes_a", a)
        object.__setattr__(self, "modes_b", b)

    @property
    def n_modes(self) -> int:
        return len(self.modes_a) + len(self.modes_b)

    @property
    def swapped(self) -> Bipartition:
        return Bipartition(self.modes_b, self.modes_a)

    @classmethod
    def parse(cls, text: str) -> Bipartition:
        """Parse the one-based form ``"1,2|3,4"``."""
        parts = text.split("|")
        if len(parts) != 2:
            raise ValueError(f"partition must look like '1,2|3,4', got {text!r}")
        sides = []
        for part in parts:
            items = [s.strip() for s in part.split(",")]
            if any(not s for s in items):
                raise ValueError(f"empty mode index in partition {text!r}")
            idx = [int(s) for s in items]
            if any(k < 1 for k in idx):
                raise ValueError("mode indices are one-based")
            sides.append([k - 1 for k in idx])
        return cls(tuple(sides[0]), tuple(sides[1]))

    def format(self) -> str:
        return "|".join(",".join(str(k + 1) for k in side) for side in (self.modes_a, self.modes_b))

    def check(self, n_modes: int) -> None:
        if self.n_modes != n_modes:
            raise ValueError(f"partition covers {self.n_modes} modes, matrix has {n_modes}")


def transpose_signs(part: Bipartition) -> np.ndarray:
    """Diagonal of ``T``: ``-1`` on the momenta of subsystem A, ``+1`` elsewhere."""
    t = np.ones(2 * part.n_modes)
    for k in part.modes_a:
        t[2 * k + 1] = -1.0
    return t


def partial_transpose(sigma, part: Bipartition) -> CovarianceMatrix:
    """``T sigma T``; flips the sign of each A-momentum row and column."""
    cm = as_cm(sigma)
    part.check(cm.n_modes)
    t = transpose_signs(part)
    return CovarianceMatrix(cm.matrix * np.outer(t, t), cm.label)


def _require_physical(cm: CovarianceMatrix, tol_phys: float) -> None:
    if not check_full_uncertainty(cm, tol_phys).passed:
        raise UnphysicalMatrixError("covariance matrix violates the uncertainty relation")


def ppt_spectrum(sigma, part: Bipartition, tol_phys: float = TOL_PHYS) -> np.ndarray:
    cm = as_cm(sigma)
    _require_physical(cm, tol_phys)
    return symplectic_eigenvalues(partial_transpose(cm, part))


def ppt_invariants(sigma, part: Bipartition):
    return principal_invariants(partial_transpose(sigma, part))


def sigma_tilde(sigma, part: Bipartition, tol_phys: float = TOL_PHYS) -> float:
    cm = as_cm(sigma)
    _require_physical(cm, tol_phys)
    return ppt_invariants(cm, part).sigma_n


def _swap_modes(m: np.ndarray, i: int, j: int) -> np.ndarray:
    idx = np.arange(m.shape[0])
    idx[[2 * i, 2 * i + 1, 2 * j, 2 * j + 1]] = [2 * j, 2 * j + 1, 2 * i, 2 * i + 1]
    return m[np.ix_(idx, idx)]


def is_bisymmetric(sigma, part: Bipartition, tol: float = TOL_BISYM) -> bool:
    """Invariance under every exchange of two modes inside A and inside B.

    ``tol`` is entrywise, relative to the largest matrix entry.
    """
    cm = as_cm(sigma)
    part.check(cm.n_modes)
    m = cm.matrix
    bound = tol * np.max(np.abs(m))
    for side in (part.modes_a, part.modes_b):
        for i, j in combinations(side, 2):
            if np.max(np.abs(_swap_modes(m, i, j) - m)) > bound:
                return False
    return True


def little_lemma_violation_count(sigma, part: Bipartition, tol_phys: float = TOL_PHYS) -> int:
    """Number of partially transposed symplectic eigenvalues below ``1 - tol_phys``.

    Never exceeds ``min(m, n)`` for a physical state.
    """
    return int(np.sum(ppt_spectrum(sigma, part, tol_phys) < 1 - tol_phys))


class Status(str, enum.Enum):
    ENTANGLED = "ENTANGLED"
    SEPARABLE = "SEPARABLE"
    PPT_INCONCLUSIVE = "PPT_INCONCLUSIVE"
    UNPHYSICAL = "UNPHYSICAL"


@dataclass(frozen=True)
class Verdict:
    status: Status
    partition: Bipartition
    sigma_tilde: float
    min_nu_tilde: float | None
    deltas_tilde: tuple[float, ...]
    nu_tilde: tuple[float, ...] | None
    bisymmetric: bool
    basis: str

    def to_dict(self) -> dict:
        return {
            "partition": self.partition.format(),
            "status": self.status.value,
            "sigma_tilde": self.sigma_tilde,
            "min_nu_tilde": self.min_nu_tilde,
            "nu_tilde": list(self.nu_tilde) if self.nu_tilde is not None else None,
            "deltas_tilde": list(self.deltas_tilde),
            "bisymmetric": self.bisymmetric,
            "basis": self.basis,
        }


def separability_verdict(
    sigma,
    part: Bipartition,
    assume_gaussian: bool = False,
    tol_phys: float = TOL_PHYS,
    tol_bisym: float = TOL_BISYM,
) -> Verdict:
    """Decide separability of ``sigma`` across ``part``.

    The ladder is: unphysical input, then a PPT violation (by the sign of the
    transposed invariant sum or by the smallest transposed symplectic
    eigenvalue), then SEPARABLE where PPT is sufficient (Gaussian states with a
    single-mode side or bisymmetric), otherwise PPT_INCONCLUSIVE. Boundary
    values within ``tol_phys`` land on the separable side.
    """
    cm = as_cm(sigma)
    part.check(cm.n_modes)
    inv = ppt_invariants(cm, part)
    s_tilde = inv.sigma_n
    bisym = is_bisymmetric(cm, part, tol_bisym)

    def verdict(status, nu, basis):
        return Verdict(
            status=status,
            partition=part,
            sigma_tilde=s_tilde,
            min_nu_tilde=float(nu[-1]) if nu is not None else None,
            deltas_tilde=inv.deltas,
            nu_tilde=tuple(float(v) for v in nu) if nu is not None else None,
            bisymmetric=bisym,
            basis=basis,
        )

    if not check_full_uncertainty(cm, tol_phys).passed:
        nu = symplectic_eigenvalues(partial_transpose(cm, part)) if is_positive_definite(cm) else None
        return verdict(Status.UNPHYSICAL, nu, "input violates sigma + i Omega >= 0")

    nu = symplectic_eigenvalues(partial_transpose(cm, part))
    by_sigma = s_tilde < -tol_phys
    by_nu = nu[-1] < 1 - tol_phys
    if by_sigma or by_nu:
        fired = []
        if by_sigma:
            fired.append("sigma_tilde < 0")
        if by_nu:
            fired.append("min nu_tilde < 1")
        return verdict(Status.ENTANGLED, nu, "PPT violated: " + ", ".join(fired))

    single = min(len(part.modes_a), len(part.modes_b)) == 1
    if assume_gaussian and (single or bisym):
        cls = "(1+n)-mode" if single else "bisymmetric"
        return verdict(Status.SEPARABLE, nu, f"PPT holds; sufficient for {cls} Gaussian states")
    if not assume_gaussian:
        why = "Gaussianity not asserted"
    else:
        why = "neither side is a single mode and the state is not bisymmetric"
    return verdict(Status.PPT_INCONCLUSIVE, nu, f"PPT holds but is not sufficient: {why}")


def all_bipartitions(n_modes: int) -> list[Bipartition]:
    """Every bipartition counted once (mode 0 always in A)."""
    out = []
    rest = range(1, n_modes)
    for size in range(0, n_modes - 1):
        for extra in combinations(rest, size):
            a = (0, *extra)
            b = tuple(k for k in range(n_modes) if k not in a)
            out.append(Bipartition(a, b))
    return out


def one_vs_rest(n_modes: int) -> list[Bipartition]:
    return [Bipartition((k,), tuple(j for j in range(n_modes) if j != k)) for k in range(n_modes)]
