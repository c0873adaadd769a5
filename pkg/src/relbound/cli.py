"""Command-line entry point: ``relbound eig|sv|sharp|cong|gen|suite``.

Exit codes: 0 when every check passes, 1 on any bound violation, 2 on bad
input or usage (argparse also exits 2).
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import bounds as bd
from . import congruence as cg
from . import core_linalg as cl
from . import sharpness as sh
from . import singular as sv
from .config import RANK_TOL_ENV, Tolerances, default_tolerances
from .core_linalg import Ordering
from .errors import NotAdmissible, RelboundError
from .harness import generators as gen
from .harness.mmio import read_matrix, write_matrix
from .harness.report import RunReport, rows_to_csv, to_record

EXIT_OK, EXIT_VIOLATION, EXIT_INPUT = 0, 1, 2
DEFAULT_DUMP_DIR = "relbound_failures"


class InputError(Exception):
    pass


def _read(path: str) -> np.ndarray:
    try:
        return read_matrix(path)
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror or exc}") from None
    except RelboundError as exc:
        raise InputError(f"{path}: {exc}") from None


def _k_record(k: bd.KEstimate | float, formula: str | None = None) -> dict:
    if isinstance(k, bd.KEstimate):
        return to_record(k)
    return {"value": float(k), "formula": formula, "admissible": None}


# --------------------------------------------------------------------------
# pipelines (also called in-process by tests)


def run_eig(A, E, k_formula: str = "sqrt", A1=None, A2=None, psd: bool = False,
            tol: Tolerances | None = None) -> RunReport:
    tol = tol or default_tolerances()
    t0 = time.perf_counter()
    A, E = bd._pair(A, E, tol)
    dec = cl.hermitian_eig(A, Ordering.INERTIA_DEFAULT, tol)
    ks = {
        "sqrt": bd.k_sqrt(A, E, tol, dec=dec),
        "pinv_left": bd.k_pinv(A, E, bd.Side.LEFT, tol, dec=dec),
        "pinv_right": bd.k_pinv(A, E, bd.Side.RIGHT, tol, dec=dec),
    }
    extra = {"sqrt_complex_branch": bd.k_sqrt_complex(A, E, tol)}
    if k_formula == "general":
        if A1 is None or A2 is None:
            raise InputError("--k-formula general needs --a1 and --a2")
        ks["general"] = bd.k_general(A, E, A1, A2, tol)
    elif k_formula == "general-polar":
        if A1 is None or A2 is None:
            raise InputError("--k-formula general-polar needs --a1 and --a2")
        ks["general"] = bd.k_general_polar(A, E, A1, A2, tol)
    chosen = {"sqrt": "sqrt", "pinv": "pinv_left"}.get(k_formula, "general")
    t1 = time.perf_counter()
    report = bd.eigen_bounds(A, E, ks[chosen], psd_mode=psd, tol=tol, dec=dec)
    verdict = bd.verify_eigen_bounds(A, E, report, tol)
    t2 = time.perf_counter()
    return RunReport(
        command="eig",
        instance={"n": dec.n, "rank": dec.rank, "rank_tol": dec.rank_tol, "norm_A": dec.norm,
                  "psd_mode": psd, "k_formula": chosen},
        k_estimates={**{name: _k_record(k) for name, k in ks.items()},
                     **{name: _k_record(v, "SqrtPinv") for name, v in extra.items()}},
        bounds=to_record(report),
        verification=_verdict_record(verdict),
        timing={"k_seconds": t1 - t0, "bounds_seconds": t2 - t1},
        passed=verdict.holds,
    )


def _verdict_record(v: bd.BoundVerdict) -> dict:
    return {"holds": v.holds, "worst_violation": v.worst_violation, "slack": v.slack,
            "checks": len(v.margins)}


def run_sv(A, E, polar_k: bool = False, tol: Tolerances | None = None) -> RunReport:
    tol = tol or default_tolerances()
    t0 = time.perf_counter()
    A = cl.as_matrix(A, "A")
    E = cl.as_matrix(E, "E")
    ks = {"pseudo_half": sv.k_singular(A, E, tol)}
    if A.shape[0] == A.shape[1]:
        ks["two_sided_polar"] = sv.k_singular_polar(A, E, tol)
    elif polar_k:
        raise InputError("--polar-k needs a square A")
    chosen = "two_sided_polar" if polar_k else "pseudo_half"
    t1 = time.perf_counter()
    report = sv.singular_bounds(A, E, tol, k=ks[chosen])
    verdict = sv.verify_singular_bounds(A, E, report, tol)
    t2 = time.perf_counter()
    return RunReport(
        command="sv",
        instance={"m": report.m, "n": report.n, "rank": report.r, "k_formula": chosen},
        k_estimates={name: _k_record(k) for name, k in ks.items()},
        bounds=to_record(report),
        verification=_verdict_record(verdict),
        timing={"k_seconds": t1 - t0, "bounds_seconds": t2 - t1},
        passed=verdict.holds,
    )


def run_sharp(A, E, tol: Tolerances | None = None) -> RunReport:
    tol = tol or default_tolerances()
    t0 = time.perf_counter()
    verdicts = sh.sharpness_report(A, E, tol)
    sp = sh._Spectra(A, E, tol)
    terms = [to_record(sp.terms(i)) for i in range(1, sp.r + 1)]
    # a met condition promises a sharper bound; anything else is a violation
    broken = [v.index for v in verdicts if v.condition_met and not v.sharper]
    sharp_idx = None
    notes = ["shifted Weyl index read from the decreasing spectrum of A"]
    if sp.r == sp.n and sp.r > 0:
        try:
            sharp_idx = sh.exists_sharper_index(A, E, tol)
        except RelboundError as exc:
            notes.append(f"exists_sharper_index failed: {exc}")
            broken.append(0)
    rows = [{**to_record(v), "lhs": t["lhs"], "rhs": t["rhs"], "j_prime": t["j_prime"]}
            for v, t in zip(verdicts, terms)]
    return RunReport(
        command="sharp",
        instance={"n": sp.n, "rank": sp.r, "norm_A": sp.norm_A, "norm_E": sp.norm_E,
                  "guaranteed_index": sharp_idx,
                  "multiplicity_index": sh.multiplicity_guarantee(A, tol) if sp.r else None},
        k_estimates={"sqrt": {"value": sp.k, "formula": "SqrtPinv", "admissible": sp.k <= 1.0 + tol.k_slack}},
        sharpness=rows,
        verification={"holds": not broken, "broken_indices": broken},
        timing={"seconds": time.perf_counter() - t0},
        passed=not broken,
        notes=notes,
    )


def run_cong(A, E, D, tol: Tolerances | None = None) -> RunReport:
    tol = tol or default_tolerances()
    t0 = time.perf_counter()
    chk = cg.k_invariance(A, E, D, tol, enforce=False)
    ok = (not chk.admissible) or chk.invariance_gap <= tol.invariance_tol
    return RunReport(
        command="cong",
        instance={"n": int(np.shape(A)[0])},
        k_estimates={"original": _k_record(chk.k_original, "SqrtPinv"),
                     "transformed": _k_record(chk.k_transformed, "SqrtPinv")},
        congruence=to_record(chk),
        verification={"holds": ok, "admissible": chk.admissible, "invariance_tol": tol.invariance_tol},
        timing={"seconds": time.perf_counter() - t0},
        passed=ok,
    )


# --------------------------------------------------------------------------
# output


def _emit(report: RunReport, json_target: str | None, csv_target: str | None) -> None:
    if json_target == "-":
        print(report.to_json())
    elif json_target:
        Path(json_target).write_text(report.to_json() + "\n")
    if csv_target:
        Path(csv_target).write_text(rows_to_csv(report.per_index_rows()))
    if json_target != "-":
        for line in _summary_lines(report):
            print(line)


def _summary_lines(report: RunReport) -> list[str]:
    out = [f"relbound {report.command}: {'PASS' if report.passed else 'VIOLATION'}"]
    for name, k in report.k_estimates.items():
        out.append(f"  k[{name}] = {k['value']:.12g}")
    if report.verification:
        for key, val in report.verification.items():
            out.append(f"  {key}: {val}")
    for row in report.sharpness or []:
        out.append(f"  i={row['index']:3d} relative={row['relative_radius']:.6g} "
                   f"weyl={row['weyl_radius']:.6g} {row['condition']}={row['condition_met']} "
                   f"sharper={row['sharper']}")
    return out


# --------------------------------------------------------------------------
# commands


def _cmd_eig(args) -> int:
    A, E = _read(args.a), _read(args.e)
    A1 = _read(args.a1) if args.a1 else None
    A2 = _read(args.a2) if args.a2 else None
    report = run_eig(A, E, args.k_formula, A1, A2, args.psd)
    _emit(report, args.json, args.csv)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _cmd_sv(args) -> int:
    report = run_sv(_read(args.a), _read(args.e), args.polar_k)
    _emit(report, args.json, args.csv)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _cmd_sharp(args) -> int:
    report = run_sharp(_read(args.a), _read(args.e))
    _emit(report, args.json, args.csv)
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _cmd_cong(args) -> int:
    report = run_cong(_read(args.a), _read(args.e), _read(args.d))
    _emit(report, args.json, None)
    if not report.congruence["admissible"]:
        raise NotAdmissible("D*D does not commute with the range projector of A")
    return EXIT_OK if report.passed else EXIT_VIOLATION


def _cmd_gen(args) -> int:
    spectrum = gen.parse_spectrum(args.spectrum)
    rect = args.m is not None and args.m != args.n
    psd_k = args.target_k if args.psd else None
    spec = gen.InstanceSpec(
        n=args.n, m=args.m, rank=args.rank, spectrum=spectrum,
        target_k=None if args.psd else args.target_k, psd=args.psd, seed=args.seed,
    )
    if rect:
        A = gen.gen_rectangular(spec)
        E = gen.gen_singular_perturbation(A, args.target_k, args.seed)
    else:
        A = gen.gen_hermitian(spec)
        if args.psd:
            E = gen.gen_psd_perturbation(A, psd_k, args.seed, kernel_component=args.kernel)
        else:
            E = gen.gen_perturbation(A, args.target_k, args.seed, kernel_component=args.kernel)
    prefix = args.out_prefix
    header = f" relbound gen seed={args.seed} spectrum={args.spectrum} target_k={args.target_k}"
    write_matrix(f"{prefix}_A.mtx", A, comment=header)
    write_matrix(f"{prefix}_E.mtx", E, comment=header)
    print(f"wrote {prefix}_A.mtx and {prefix}_E.mtx")
    return EXIT_OK


def _cmd_suite(args) -> int:
    from .harness.suite import SuiteConfig, default_config, run_suite

    if args.config:
        try:
            cfg = SuiteConfig.load(args.config)
        except (OSError, ValueError, TypeError) as exc:
            raise InputError(f"{args.config}: {exc}") from None
        overrides = {}
        if args.instances is not None:
            overrides["families"] = {name: args.instances for name in cfg.families}
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.dump_dir is not None:
            overrides["dump_dir"] = args.dump_dir
        if overrides:
            cfg = SuiteConfig(**{**cfg.__dict__, **overrides})
    else:
        cfg = default_config(args.instances if args.instances is not None else 200,
                             seed=args.seed or 0, dump_dir=args.dump_dir or DEFAULT_DUMP_DIR)
    summary = run_suite(cfg)
    for line in summary.lines():
        print(line)
    if args.json:
        text = json.dumps(to_record(summary), indent=2)
        if args.json == "-":
            print(text)
        else:
            Path(args.json).write_text(text + "\n")
    return EXIT_OK if summary.all_passed else EXIT_VIOLATION


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="relbound",
        description="Relative perturbation bounds for Hermitian eigenvalues and singular values.",
        epilog=f"{RANK_TOL_ENV} overrides the rank tolerance factor (default 1e-12).",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def pair(sp):
        sp.add_argument("--a", required=True, metavar="A.mtx")
        sp.add_argument("--e", required=True, metavar="E.mtx")
        sp.add_argument("--json", nargs="?", const="-", metavar="OUT",
                        help="write the JSON report to OUT (stdout when OUT is omitted)")

    s = sub.add_parser("eig", help="eigenvalue bounds for A + E, then verify them")
    pair(s)
    s.add_argument("--k-formula", choices=("sqrt", "pinv", "general", "general-polar"), default="sqrt")
    s.add_argument("--a1", metavar="F1.mtx")
    s.add_argument("--a2", metavar="F2.mtx")
    s.add_argument("--psd", action="store_true", help="PSD mode: k may exceed 1")
    s.add_argument("--csv", metavar="OUT", help="per-index table as CSV")
    s.set_defaults(func=_cmd_eig)

    s = sub.add_parser("sv", help="singular value bounds for A + E, then verify them")
    pair(s)
    s.add_argument("--polar-k", action="store_true", help="two-sided polar k (square A)")
    s.add_argument("--csv", metavar="OUT")
    s.set_defaults(func=_cmd_sv)

    s = sub.add_parser("sharp", help="per-index comparison with Weyl's bound")
    pair(s)
    s.add_argument("--csv", metavar="OUT")
    s.set_defaults(func=_cmd_sharp)

    s = sub.add_parser("cong", help="admissibility of D and invariance of k")
    pair(s)
    s.add_argument("--d", required=True, metavar="D.mtx")
    s.set_defaults(func=_cmd_cong)

    s = sub.add_parser("gen", help="write a seeded random instance")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--m", type=int)
    s.add_argument("--rank", type=int, required=True)
    s.add_argument("--spectrum", required=True,
                   help="loguniform:lo:hi, signed:lo:hi[:neg], clustered:v:mult[:spread] or a comma list")
    s.add_argument("--target-k", type=float, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out-prefix", required=True)
    s.add_argument("--psd", action="store_true", help="PSD A and E keeping A + E PSD; k may exceed 1")
    s.add_argument("--kernel", action="store_true", help="add a component supported on ker(A)")
    s.set_defaults(func=_cmd_gen)

    s = sub.add_parser("suite", help="run the property suite")
    s.add_argument("--config", metavar="suite.json")
    s.add_argument("--instances", type=int)
    s.add_argument("--seed", type=int)
    s.add_argument("--dump-dir", help=f"failing-instance dumps (default {DEFAULT_DUMP_DIR})")
    s.add_argument("--json", nargs="?", const="-", metavar="OUT")
    s.set_defaults(func=_cmd_suite)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, RelboundError, ValueError) as exc:
        print(f"relbound {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
