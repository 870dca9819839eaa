"""Command-line client for the planning service.

Thin wrapper over the service handlers: loads a scenario file, runs the
requested operation in process, prints a human-readable summary and
optionally writes the machine-readable report (JSON) or trajectory CSV.
Exit codes: 0 ok, 2 scenario/parameter validation, 3 infeasible or
no-optimum, 4 I/O.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

import pydantic

from .errors import (
    MinimizerError,
    NegativePeriodError,
    NoInteriorOptimumError,
    NoRootError,
    ParameterError,
)
from .schemas import Scenario, SolveReport, ValidateReport
from .service import run_export, run_solve, run_validate

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NO_OPTIMUM = 3
EXIT_IO = 4


def _load_scenario(path: str) -> Scenario:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise _CliError(EXIT_IO, f"cannot read scenario file: {exc}") from exc
    try:
        return Scenario.model_validate(json.loads(raw))
    except (json.JSONDecodeError, pydantic.ValidationError) as exc:
        raise _CliError(EXIT_VALIDATION, f"invalid scenario document: {exc}") from exc


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


def _atomic_write(path: str, text: str) -> None:
    """Write via a temp file in the target directory, then rename into place."""
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(dir=directory, prefix=".epqplan-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(text)
            os.replace(tmp, path)
        except BaseException:
            os.unlink(tmp)
            raise
    except OSError as exc:
        raise _CliError(EXIT_IO, f"cannot write {path}: {exc}") from exc


def _g(value) -> str:
    return "-" if value is None else f"{value:.6g}"


def _format_solve(report: SolveReport) -> str:
    sol = report.solution
    t = sol.times
    lv = sol.levels
    lines = [
        f"model: {report.model} ({sol.case_label})",
        f"optimal pair: T4* = {_g(sol.t4_star)}, T* = {_g(sol.t_star)}"
        + ("  [boundary]" if sol.clamped else ""),
        f"periods: T1 = {_g(t.t1)}, T2 = {_g(t.t2)}, T3 = {_g(t.t3)}, "
        f"T4 = {_g(t.t4)}, T5 = {_g(t.t5)}"
        + (f", T6 = {_g(t.t6)}" if t.t6 is not None else ""),
        f"levels: I_s = {_g(lv.i_s)}, I_m = {_g(lv.i_m)}, I_b = {_g(lv.i_b)}, "
        f"I_c = {_g(lv.i_c)}"
        + (f", nI_c = {_g(lv.n_i_c)}" if lv.n_i_c is not None else ""),
        f"production: T_p = {_g(sol.t_p)}, Q = {_g(sol.q)}"
        + (f"  (flow-balance: T_p = {_g(sol.t_p_flow)}, Q = {_g(sol.q_flow)})"
           if sol.t_p_flow is not None else ""),
        f"cost rate: TC = {_g(sol.tc)}",
    ]
    co = report.coefficients
    if report.model == "basic":
        lines.append(
            f"coefficients: A = {_g(co.a)}, B = {_g(co.b)}, C = {_g(co.c)}, "
            f"D = {_g(co.d)}, K = {_g(co.k_total)}, eta = {_g(co.eta)}, "
            f"omega = {_g(co.omega)}")
    else:
        lines.append(
            f"coefficients: A1 = {_g(co.a1)}, A2 = {_g(co.a2)}, B = {_g(co.b)}, "
            f"C = {_g(co.c)}, D1 = {_g(co.d1)}, D2 = {_g(co.d2)}, "
            f"K = {_g(co.k_total)}, T-bound = {_g(co.t_bound)}")
        for cand in sol.candidates:
            lines.append(
                f"candidate {cand.case_label}: (T4, T) = ({_g(cand.t4)}, {_g(cand.t)}), "
                f"TC = {_g(cand.tc)}"
                + (", clamped to boundary" if cand.clamped else ""))
    for note in sol.warnings:
        lines.append(f"warning: {note}")
    return "\n".join(lines)


def _format_validate(report: ValidateReport) -> str:
    return "\n".join([
        f"reduced-model pair: (T4, T) = ({_g(report.closed_form.t4)}, "
        f"{_g(report.closed_form.t)}), exact cost = {_g(report.closed_form.tc)}",
        f"exact-model optimum: (T4, T) = ({_g(report.exact.t4)}, "
        f"{_g(report.exact.t)}), exact cost = {_g(report.exact.tc)}",
        f"approximation gap: {_g(report.gap_percent)}% "
        f"({report.evaluations} exact-cost evaluations)",
    ])


def _report_json(model: pydantic.BaseModel) -> str:
    return json.dumps(model.model_dump(), indent=2, sort_keys=True) + "\n"


def _run(args) -> int:
    scenario = _load_scenario(args.scenario)
    try:
        if args.command == "solve":
            report = run_solve(scenario, force_partial=args.force_partial)
            print(_format_solve(report))
            if args.out:
                _atomic_write(args.out, _report_json(report))
        elif args.command == "validate":
            report = run_validate(scenario)
            print(_format_validate(report))
            if args.out:
                _atomic_write(args.out, _report_json(report))
        else:  # export
            csv_text = run_export(scenario, step=args.step)
            if args.out:
                _atomic_write(args.out, csv_text)
                print(f"trajectory written to {args.out}")
            else:
                sys.stdout.write(csv_text)
    except ParameterError as exc:
        print("infeasible parameters:", file=sys.stderr)
        for violation in exc.violations:
            print(f"  {violation.field}: requires {violation.requirement} "
                  f"[{violation.code}]", file=sys.stderr)
        return EXIT_VALIDATION
    except ValueError as exc:
        print(f"invalid request: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (NoInteriorOptimumError, NegativePeriodError, NoRootError) as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_OPTIMUM
    except MinimizerError as exc:
        print(f"minimizer failed: {exc}", file=sys.stderr)
        return EXIT_NO_OPTIMUM
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="epqplan",
        description="Lot-size planning with rework, deterioration and backlogging.")
    sub = parser.add_subparsers(dest="command", required=True)

    solve = sub.add_parser("solve", help="solve a scenario and report the plan")
    solve.add_argument("--scenario", required=True, help="scenario JSON file")
    solve.add_argument("--out", help="write the JSON report here (atomic)")
    solve.add_argument("--force-partial", action="store_true",
                       help="route a beta=1 scenario through the partial-backlog "
                            "solver for cross-checking")

    validate_cmd = sub.add_parser(
        "validate", help="compare the reduced-model solution with the exact optimum")
    validate_cmd.add_argument("--scenario", required=True)
    validate_cmd.add_argument("--out", help="write the JSON report here (atomic)")

    export = sub.add_parser("export", help="export one cycle's trajectory as CSV")
    export.add_argument("--scenario", required=True)
    export.add_argument("--step", type=float, default=None,
                        help="sampling step (default: scenario options.step)")
    export.add_argument("--out", help="write the CSV here (atomic); default stdout")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except _CliError as exc:
        print(exc.message, file=sys.stderr)
        return exc.code


def entry() -> None:
    raise SystemExit(main())
