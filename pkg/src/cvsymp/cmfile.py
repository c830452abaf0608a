"""Reading and writing covariance-matrix files.

A file is a JSON object::

    {"n_modes": 2, "convention": "vacuum_identity", "label": "...",
     "matrix": [row-major list of (2n)^2 numbers]}

``convention`` is ``vacuum_identity`` (vacuum CM = identity) or ``vacuum_half``
(vacuum CM = identity / 2); the latter is rescaled by 2 on load. Floats are
written with ``repr`` so a write/read cycle reproduces the matrix bit-exactly.
"""

from __future__ import annotations

import hashlib
import json
import logging
from pathlib import Path

import numpy as np

from .invariants import TOL_SYMMETRY, CovarianceMatrix

log = logging.getLogger(__name__)

CONVENTIONS = {"vacuum_identity": 1.0, "vacuum_half": 2.0}


class CmFileError(ValueError):
    """Malformed covariance-matrix file."""


def parse_cm(text: str, source: str = "<string>") -> CovarianceMatrix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CmFileError(f"{source}: not valid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise CmFileError(f"{source}: top level must be an object")
    missing = {"n_modes", "matrix"} - doc.keys()
    if missing:
        raise CmFileError(f"{source}: missing keys {sorted(missing)}")

    n = doc["n_modes"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise CmFileError(f"{source}: n_modes must be a positive integer")
    convention = doc.get("convention", "vacuum_identity")
    if convention not in CONVENTIONS:
        raise CmFileError(f"{source}: unknown convention {convention!r}")

    raw = doc["matrix"]
    # Accept nested rows as well as the flat row-major form.
    if isinstance(raw, list) and raw and all(isinstance(row, list) for row in raw):
        if any(len(row) != len(raw) for row in raw):
            raise CmFileError(f"{source}: matrix rows have unequal lengths")
        raw = [x for row in raw for x in row]
    if not isinstance(raw, list) or len(raw) != (2 * n) ** 2:
        size = len(raw) if isinstance(raw, list) else "non-list"
        raise CmFileError(f"{source}: matrix must hold (2n)^2 = {(2 * n) ** 2} numbers, got {size}")
    if not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in raw):
        raise CmFileError(f"{source}: matrix entries must be numbers")
    m = np.array(raw, dtype=float).reshape(2 * n, 2 * n)
    if not np.all(np.isfinite(m)):
        raise CmFileError(f"{source}: matrix has non-finite entries")

    asym = np.max(np.abs(m - m.T))
    if asym > TOL_SYMMETRY * max(1.0, np.max(np.abs(m))):
        raise CmFileError(f"{source}: matrix is not symmetric (max asymmetry {asym:.3e})")
    if asym > 0:
        log.warning("%s: symmetrizing matrix with asymmetry %.3e", source, asym)

    label = doc.get("label")
    if label is not None and not isinstance(label, str):
        raise CmFileError(f"{source}: label must be a string")
    try:
        return CovarianceMatrix(m * CONVENTIONS[convention], label)
    except ValueError as exc:
        raise CmFileError(f"{source}: {exc}") from None


def load_cm(path) -> CovarianceMatrix:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise CmFileError(f"{path}: {exc.strerror}") from None
    cm = parse_cm(text, str(path))
    if cm.label is None:
        cm = CovarianceMatrix(cm.matrix, path.stem)
    return cm


def dump_cm(cm: CovarianceMatrix) -> str:
    doc = {
        "n_modes": cm.n_modes,
        "convention": "vacuum_identity",
        "label": cm.label,
        "matrix": [float(x) for x in cm.matrix.ravel()],
    }
    return json.dumps(doc, indent=1) + "\n"


def save_cm(cm: CovarianceMatrix, path) -> None:
    Path(path).write_text(dump_cm(cm), encoding="utf-8")


def digest(cm: CovarianceMatrix) -> str:
    """SHA-256 of the float64 matrix bytes, for report provenance."""
    return hashlib.sha256(np.ascontiguousarray(cm.matrix).tobytes()).hexdigest()
