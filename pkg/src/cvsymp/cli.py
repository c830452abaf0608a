"""Command-line front end.

Exit codes: 0 success / physical / SEPARABLE, 2 usage or parse error,
3 ENTANGLED, 4 UNPHYSICAL, 5 PPT_INCONCLUSIVE.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .cmfile import CmFileError, digest, dump_cm, load_cm
from .errors import UnphysicalMatrixError
from .invariants import (
    TOL_PHYS,
    CovarianceMatrix,
    check_full_uncertainty,
    check_symplectic_uncertainty,
    principal_invariants,
    symplectic_eigenvalues,
)
from .separability import Bipartition, Status, all_bipartitions, one_vs_rest, separability_verdict
from .states import GhzSpec, ghz_type, thermal, two_mode_squeezed, vacuum
from .symplectic import TOL_SYMP, symplectic_residual, williamson

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ENTANGLED = 3
EXIT_UNPHYSICAL = 4
EXIT_INCONCLUSIVE = 5

VERDICT_EXIT = {
    Status.SEPARABLE: EXIT_OK,
    Status.ENTANGLED: EXIT_ENTANGLED,
    Status.UNPHYSICAL: EXIT_UNPHYSICAL,
    Status.PPT_INCONCLUSIVE: EXIT_INCONCLUSIVE,
}

log = logging.getLogger("cvsymp")


class UsageError(ValueError):
    pass


def _floats(xs) -> list[float] | None:
    return None if xs is None else [float(x) for x in xs]


def _header(command: str, cm: CovarianceMatrix | None, args) -> dict:
    out = {
        "command": command,
        "version": __version__,
        "tolerances": {"tol_phys": args.tol_phys, "tol_symp": args.tol_symp},
    }
    if cm is not None:
        out["input"] = {"label": cm.label, "n_modes": cm.n_modes, "digest": digest(cm)}
    return out


def _uncertainty_dict(rep) -> dict:
    return {
        "passed": rep.passed,
        "sigma_n": rep.sigma_n,
        "positive_definite": rep.positive_definite,
        "spectrum": _floats(rep.spectrum),
        "necessary_only": rep.necessary_only,
        "failed_conditions": list(rep.failed_conditions),
    }


def validate_report(cm: CovarianceMatrix, args) -> dict:
    full = check_full_uncertainty(cm, args.tol_phys)
    sym = check_symplectic_uncertainty(cm, args.tol_phys)
    report = _header("validate", cm, args)
    report["physical"] = full.passed
    report["full_uncertainty"] = _uncertainty_dict(full)
    report["symplectic_uncertainty"] = _uncertainty_dict(sym)
    if full.positive_definite:
        S, _ = williamson(cm, tol=np.inf)
        report["williamson"] = {
            "symplectic_residual": symplectic_residual(S),
            "symplectic_ok": symplectic_residual(S) <= args.tol_symp,
        }
    return report


def invariants_report(cm: CovarianceMatrix, args) -> dict:
    inv = principal_invariants(cm)
    report = _header("invariants", cm, args)
    report["deltas"] = list(inv.deltas)
    report["sigma_n"] = inv.sigma_n
    try:
        report["spectrum"] = _floats(symplectic_eigenvalues(cm))
    except UnphysicalMatrixError:
        report["spectrum"] = None
    return report


def ppt_report(cm: CovarianceMatrix, part: Bipartition, args) -> tuple[dict, Status]:
    v = separability_verdict(cm, part, assume_gaussian=args.gaussian, tol_phys=args.tol_phys)
    report = _header("ppt", cm, args)
    report["assume_gaussian"] = args.gaussian
    report["verdict"] = v.to_dict()
    return report, v.status


def _format_text(report: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for key, value in report.items():
        if isinstance(value, dict):
            lines.append(f"{pad}{key}:")
            lines.append(_format_text(value, indent + 1))
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            lines.append(f"{pad}{key}:")
            for item in value:
                lines.append(_format_text(item, indent + 1))
                lines.append("")
        elif isinstance(value, list) and not value:
            lines.append(f"{pad}{key}: -")
        elif isinstance(value, list):
            lines.append(f"{pad}{key}: " + ", ".join(f"{x:.12g}" if isinstance(x, float) else str(x) for x in value))
        elif isinstance(value, float):
            lines.append(f"{pad}{key}: {value:.15g}")
        else:
            lines.append(f"{pad}{key}: {value}")
    return "\n".join(lines)


def _emit(report: dict, args) -> None:
    if args.format == "json":
        print(json.dumps(report, indent=2))
    else:
        print(_format_text(report))


def _parse_partition(text: str, n_modes: int) -> Bipartition:
    try:
        part = Bipartition.parse(text)
        part.check(n_modes)
    except ValueError as exc:
        raise UsageError(f"bad partition {text!r}: {exc}") from None
    return part


def cmd_validate(args) -> int:
    cm = load_cm(args.file)
    report = validate_report(cm, args)
    _emit(report, args)
    return EXIT_OK if report["physical"] else EXIT_UNPHYSICAL


def cmd_invariants(args) -> int:
    cm = load_cm(args.file)
    _emit(invariants_report(cm, args), args)
    return EXIT_OK


def cmd_ppt(args) -> int:
    cm = load_cm(args.file)
    part = _parse_partition(args.partition, cm.n_modes)
    report, status = ppt_report(cm, part, args)
    _emit(report, args)
    return VERDICT_EXIT[status]


def _build_state(args) -> CovarianceMatrix:
    try:
        if args.state == "ghz":
            return ghz_type(GhzSpec(args.modes, args.r, args.q))
        if args.state == "thermal":
            q = [float(x) for x in args.q.split(",")]
            n = args.modes if args.modes is not None else len(q)
            if len(q) not in (1, n):
                raise ValueError(f"{len(q)} thermal factors for {n} modes")
            return thermal(n, q if len(q) == n else q[0])
        if args.state == "tms":
            return two_mode_squeezed(args.r)
        return vacuum(args.modes)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_build(args) -> int:
    cm = _build_state(args)
    text = dump_cm(cm)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _batch_files(target: Path) -> list[Path]:
    if target.is_dir():
        return sorted(target.glob("*.json"))
    try:
        lines = target.read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"{target}: {exc.strerror}") from None
    files = []
    for line in lines:
        line = line.strip()
        if line and not line.startswith("#"):
            p = Path(line)
            files.append(p if p.is_absolute() else target.parent / p)
    return files


def _batch_rows(path: Path, args) -> list[dict]:
    base = {"file": str(path)}
    try:
        cm = load_cm(path)
    except (CmFileError, ValueError) as exc:
        return [{**base, "label": None, "partition": None, "status": "ERROR", "error": str(exc)}]
    base["label"] = cm.label
    base["digest"] = digest(cm)
    if args.partition:
        try:
            parts = [_parse_partition(args.partition, cm.n_modes)]
        except UsageError as exc:
            return [{**base, "partition": args.partition, "status": "ERROR", "error": str(exc)}]
    elif cm.n_modes < 2:
        parts = []
    elif args.policy == "all":
        parts = all_bipartitions(cm.n_modes)
    else:
        parts = one_vs_rest(cm.n_modes)
    if not parts:
        physical = check_full_uncertainty(cm, args.tol_phys).passed
        return [{**base, "partition": None, "status": "PHYSICAL" if physical else "UNPHYSICAL"}]
    rows = []
    for part in parts:
        v = separability_verdict(cm, part, assume_gaussian=args.gaussian, tol_phys=args.tol_phys)
        rows.append({**base, **v.to_dict()})
    return rows


def cmd_batch(args) -> int:
    files = _batch_files(Path(args.target))
    with ThreadPoolExecutor(max_workers=args.workers) as pool:
        chunks = list(pool.map(lambda p: _batch_rows(p, args), files))
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r["label"] or "", r["file"], r["partition"] or ""))
    report = _header("batch", None, args)
    report["assume_gaussian"] = args.gaussian
    report["rows"] = rows
    _emit(report, args)
    return EXIT_USAGE if any(r["status"] == "ERROR" for r in rows) else EXIT_OK


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--tol-phys", type=float, default=TOL_PHYS, help="physicality tolerance")
    p.add_argument("--tol-symp", type=float, default=TOL_SYMP, help="symplecticity tolerance")
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvsymp",
        description="Uncertainty relations and separability tests for continuous-variable covariance matrices.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check the uncertainty relation")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("invariants", help="print symplectic invariants and eigenvalues")
    p.add_argument("file")
    _add_common(p)
    p.set_defaults(func=cmd_invariants)

    p = sub.add_parser("ppt", help="separability verdict for one bipartition")
    p.add_argument("file")
    p.add_argument("--partition", required=True, help="one-based modes, e.g. '1,2|3,4'")
    p.add_argument("--gaussian", action="store_true", help="assert the state is Gaussian")
    _add_common(p)
    p.set_defaults(func=cmd_ppt)

    p = sub.add_parser("build", help="write a reference covariance matrix")
    p.add_argument("state", choices=("ghz", "thermal", "tms", "vacuum"))
    p.add_argument("--modes", type=int, default=None)
    p.add_argument("--r", type=float, default=0.0, help="squeezing parameter")
    p.add_argument("--q", default=None, help="noise factor (ghz) or comma list (thermal)")
    p.add_argument("--out", default=None, help="output path (default: stdout)")
    _add_common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("batch", help="verdicts for a directory or manifest of files")
    p.add_argument("target", help="directory of .json files or a manifest listing paths")
    p.add_argument("--partition", default=None, help="apply one partition to every file")
    p.add_argument("--policy", choices=("one-vs-rest", "all"), default="one-vs-rest")
    p.add_argument("--gaussian", action="store_true")
    p.add_argument("--workers", type=int, default=4)
    _add_common(p)
    p.set_defaults(func=cmd_batch)
    return parser


def _check_build_args(args, parser) -> None:
    if args.command != "build":
        return
    if args.state in ("ghz", "vacuum") and args.modes is None:
        parser.error(f"build {args.state} needs --modes")
    if args.state == "thermal" and args.q is None:
        parser.error("build thermal needs --q")
    if args.state == "ghz":
        try:
            args.q = float(args.q) if args.q is not None else 1.0
        except ValueError:
            parser.error(f"--q must be a number for ghz, got {args.q!r}")


def main(argv=None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    _check_build_args(args, parser)
    try:
        return args.func(args)
    except (CmFileError, UsageError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
