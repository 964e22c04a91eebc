"""Command-line frontend: polynomial file in, classification or report out.

Subcommands: classify, detect, oracle2, witness, sample, quad.

Exit codes
    0  success
    1  suite or experiment failure (degenerate hit, check failed)
    2  input error (bad file, bad flags, unsupported dimension)
    3  zero polynomial
    4  queried point is not critical

Numeric values in human-readable output are printed with 17 significant
digits so that they round-trip to the exact float64.  Output is byte-stable
for identical invocations; the only varying field, runtime, goes to the JSON
report files and never to stdout.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from .classify import classify_all, classify_point
from .critsolve import SolverConfig, certify_against_oracle
from .degeneracy import (
    NotCriticalError,
    detect_sosc_failure,
    exact_oracle_n2,
    witness_to_dict,
)
from .genlab import (
    ExperimentConfig,
    run_degenerate_family,
    run_quadratic_sweep,
    run_random_genericity,
    run_witness_d2,
    run_witness_general,
)
from .polyhom import PolynomialFormatError, ZeroPolynomialError, read_polynomial

EXIT_OK = 0
EXIT_SUITE_FAILED = 1
EXIT_INPUT = 2
EXIT_ZERO_POLY = 3
EXIT_NOT_CRITICAL = 4


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def _load(path: str):
    return read_polynomial(path)


def _emit(text: str, output: str | None) -> None:
    if output:
        with open(output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def _solver_config(args) -> SolverConfig:
    return SolverConfig(
        starts=args.starts,
        seed=args.seed,
        tol_crit=args.tol_crit,
        dedup_radius=args.dedup_radius,
    )


def _cmd_classify(args) -> int:
    f = _load(args.poly)
    points = classify_all(f, _solver_config(args))
    if args.json:
        text = json.dumps([p.to_dict() for p in points], indent=2) + "\n"
    elif args.csv:
        lines = ["verdict,lambda,margin,residual," + ",".join(f"x{i+1}" for i in range(f.n))]
        for p in points:
            row = [p.verdict.value, _fmt(p.pair.lam), _fmt(p.sosc_margin), _fmt(p.pair.residual)]
            row.extend(_fmt(v) for v in p.pair.x)
            lines.append(",".join(row))
        text = "\n".join(lines) + "\n"
    else:
        counts: dict[str, int] = {}
        for p in points:
            counts[p.verdict.value] = counts.get(p.verdict.value, 0) + 1
        lines = [f"critical points: {len(points)}"]
        for p in points:
            coords = ", ".join(_fmt(v) for v in p.pair.x)
            lines.append(
                f"{p.verdict.value:<16} lambda={_fmt(p.pair.lam)} "
                f"margin={_fmt(p.sosc_margin)} x=[{coords}]"
            )
        summary = ", ".join(f"{k}={v}" for k, v in sorted(counts.items()))
        lines.append(f"summary: {summary if summary else 'no critical points found'}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.output)
    return EXIT_OK


def _cmd_detect(args) -> int:
    f = _load(args.poly)
    try:
        x = np.array([float(v) for v in args.point.split(",")])
    except ValueError:
        print(f"cannot parse point {args.point!r}", file=sys.stderr)
        return EXIT_INPUT
    if x.shape != (f.n,):
        print(f"point has {x.size} coordinates, expected {f.n}", file=sys.stderr)
        return EXIT_INPUT
    nrm = float(np.linalg.norm(x))
    if nrm == 0.0:
        print("point must be nonzero", file=sys.stderr)
        return EXIT_INPUT
    if abs(nrm - 1.0) > 1e-6:
        print(
            f"warning: normalizing input point (adjustment {abs(nrm - 1.0):.3e})",
            file=sys.stderr,
        )
    x /= nrm
    try:
        witness = detect_sosc_failure(
            f, x, tol_crit=args.tol_crit, tol_class=args.tol_class
        )
    except NotCriticalError as exc:
        print(f"point is not critical: {exc}", file=sys.stderr)
        return EXIT_NOT_CRITICAL
    if witness is None:
        point = classify_point(f, x, tol_crit=args.tol_crit, tol_class=args.tol_class)
        sys.stdout.write(f"no witness: SOSC margin = {_fmt(point.sosc_margin)}\n")
    else:
        payload = witness_to_dict(f, witness)
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    return EXIT_OK


def _cmd_oracle2(args) -> int:
    f = _load(args.poly)
    if f.n != 2:
        print(f"oracle2 supports n = 2 only, got n = {f.n}", file=sys.stderr)
        return EXIT_INPUT
    result = exact_oracle_n2(f)
    sys.stdout.write(f"on_locus: {'true' if result.on_locus else 'false'}\n")
    sys.stdout.write(f"certificate: {result.certificate}\n")
    if args.certify:
        report = certify_against_oracle(f)
        status = "certified" if report.certified else "NOT certified"
        sys.stdout.write(
            f"multistart vs enumeration: {status} "
            f"(matched {report.matched}, only_multistart {len(report.only_multistart)}, "
            f"only_oracle {len(report.only_oracle)}, "
            f"all_critical {'true' if report.all_critical else 'false'})\n"
        )
    return EXIT_OK


def _print_suite(report) -> int:
    for check in report.checks:
        mark = "ok  " if check.passed else "FAIL"
        detail = f"  {check.detail}" if check.detail else ""
        sys.stdout.write(f"[{mark}] {check.name}{detail}\n")
    sys.stdout.write(f"suite {report.name}: {'PASS' if report.passed else 'FAIL'}\n")
    return EXIT_OK if report.passed else EXIT_SUITE_FAILED


def _cmd_witness(args) -> int:
    if args.mode == "d2":
        report = run_witness_d2(args.n)
    elif args.mode == "general":
        if args.d is None:
            print("--d is required for --mode general", file=sys.stderr)
            return EXIT_INPUT
        report = run_witness_general(args.n, args.d)
    else:
        if args.d is None:
            print("--d is required for --mode degenerate", file=sys.stderr)
            return EXIT_INPUT
        kind = "repeated_lambda1" if args.d == 2 else "single_monomial"
        report = run_degenerate_family(kind, args.n, args.d)
    return _print_suite(report)


def _cmd_sample(args) -> int:
    config = ExperimentConfig(
        n=args.n,
        d=args.d,
        trials=args.trials,
        seed=args.seed,
        starts=args.starts,
        dump_dir=args.dump_dir,
    )
    report = run_random_genericity(config)
    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write(report.to_json(include_runtime=True))
    if args.csv:
        report.write_csv(args.csv)
    total_critical = sum(r.critical_count for r in report.records)
    min_margin = "n/a" if report.min_sosc_margin is None else _fmt(report.min_sosc_margin)
    sys.stdout.write(
        f"trials: {report.trials}, critical points: {total_critical}, "
        f"degenerate_hits: {report.total_degenerate}, "
        f"rank_witnesses: {report.total_rank_witnesses}, "
        f"min_sosc_margin: {min_margin}\n"
    )
    sys.stdout.write(f"report written to {args.output}\n")
    if report.dumped_files:
        for path in report.dumped_files:
            sys.stdout.write(f"degenerate polynomial dumped: {path}\n")
        return EXIT_SUITE_FAILED
    return EXIT_OK


def _cmd_quad(args) -> int:
    report = run_quadratic_sweep(args.n, args.trials, args.seed)
    with open(args.output, "w", encoding="utf-8") as handle:
        handle.write(report.to_json(include_runtime=True))
    sys.stdout.write(
        f"trials: {report.trials}, degenerate: {report.degenerate_count}, "
        f"disagreements: {len(report.disagreements)}, "
        f"planted detected: {sum(1 for p in report.planted if p['quadratic_rule'] and p['pipeline'])}"
        f"/{len(report.planted)}\n"
    )
    sys.stdout.write(f"report written to {args.output}\n")
    return EXIT_OK if report.passed else EXIT_SUITE_FAILED


def _add_solver_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--starts", type=int, default=None, help="Newton starts (default 50*d*n)")
    parser.add_argument("--seed", type=int, default=0, help="random seed")
    parser.add_argument("--tol-crit", dest="tol_crit", type=float, default=1e-9,
                        help="base FONC residual tolerance")
    parser.add_argument("--dedup-radius", dest="dedup_radius", type=float, default=1e-6,
                        help="merge radius for converged points")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spherecrit",
        description="Critical points of homogeneous polynomials on the unit sphere: "
        "find, classify, and probe for second-order degeneracy.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="find and classify all critical points")
    p.add_argument("--poly", required=True, help="polynomial JSON file")
    _add_solver_flags(p)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="machine-readable JSON output")
    fmt.add_argument("--csv", action="store_true", help="CSV output")
    p.add_argument("--output", default=None, help="write to file instead of stdout")
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("detect", help="probe one point for a degeneracy witness")
    p.add_argument("--poly", required=True)
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p.add_argument("--tol-crit", dest="tol_crit", type=float, default=1e-9)
    p.add_argument("--tol-class", dest="tol_class", type=float, default=1e-7)
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("oracle2", help="exact complex-locus membership (n = 2)")
    p.add_argument("--poly", required=True)
    p.add_argument("--certify", action="store_true",
                   help="also cross-check multistart against the exact enumeration")
    p.set_defaults(func=_cmd_oracle2)

    p = sub.add_parser("witness", help="run a deterministic witness suite")
    p.add_argument("--mode", required=True, choices=["d2", "general", "degenerate"])
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, default=None)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("sample", help="randomized genericity experiment")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--starts", type=int, default=None)
    p.add_argument("--output", default="sample_report.json")
    p.add_argument("--csv", default=None, help="also write a per-trial CSV")
    p.add_argument("--dump-dir", dest="dump_dir", default="degenerate_dumps")
    p.set_defaults(func=_cmd_sample)

    p = sub.add_parser("quad", help="random symmetric-matrix degeneracy sweep")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", default="quad_report.json")
    p.set_defaults(func=_cmd_quad)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except PolynomialFormatError as exc:
        print(f"polynomial format error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ZeroPolynomialError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ZERO_POLY
    except OSError as exc:
        print(f"file error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
