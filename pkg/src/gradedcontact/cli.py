"""Command-line interface.

Exit codes: 0 = pass/valid, 1 = structure invalid (nonzero residual),
2 = usage or parse error, 3 = internal invariant failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import (
    ExprSyntaxError,
    GradedContactError,
    IndexOutOfRange,
    ModelCorrupt,
    PathMismatch,
    SchemaError,
    UnknownIdentifier,
    WrongMultidegree,
)
from .exprs import print_polynomial
from .jacobi import build_q, is_jacobi
from .report import FORMAT_VERSION, Report, TOOL_VERSION
from .selftest import SUITES, run_selftest
from .structfile import dump_structure, load_structure
from .sympoiss import CONSTRUCTION_VERDICTS, VALIDITY_VERDICTS, poissonize, verify_diagram

USAGE_ERROR = 2
INTERNAL_ERROR = 3

_USAGE_ERRORS = (
    ExprSyntaxError,
    UnknownIdentifier,
    SchemaError,
    IndexOutOfRange,
    WrongMultidegree,
    OSError,
)

_INTERNAL_ERRORS = (ModelCorrupt, PathMismatch)


def _default_seed() -> int:
    raw = os.environ.get("GRADEDCONTACT_SEED")
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        return 0


def _emit(report: Report, fmt: str, out) -> None:
    if fmt == "json":
        out.write(report.render_json())
    else:
        out.write(report.render_text())


def _cmd_check(args, out) -> int:
    structure = load_structure(args.file)
    valid, residuals = is_jacobi(structure)
    report = Report(echo=dump_structure(structure))
    report.add(
        "lambda_lambda",
        residuals.lambda_lambda.is_zero(),
        print_polynomial(residuals.lambda_lambda),
    )
    report.add(
        "r_lambda", residuals.r_lambda.is_zero(), print_polynomial(residuals.r_lambda)
    )
    report.add(
        "q_squared_obstruction",
        residuals.obstruction.is_zero(),
        print_polynomial(residuals.obstruction),
    )
    _emit(report, args.format, out)
    return 0 if valid else 1


def _cmd_build_q(args, out) -> int:
    structure = load_structure(args.file)
    q = build_q(structure)
    components = {
        name: print_polynomial(q.components[name]) for name in sorted(q.components)
    }
    if args.format == "json":
        doc = {
            "format_version": FORMAT_VERSION,
            "version": TOOL_VERSION,
            "degree": q.degree,
            "components": components,
            "echo": dump_structure(structure),
        }
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(f"Q (degree {q.degree}) on T*[1]M x R[1]:\n")
        if not components:
            out.write("  0\n")
        for name, text in components.items():
            out.write(f"  d/d{name}: {text}\n")
    return 0


def _cmd_poissonize(args, out) -> int:
    structure = load_structure(args.file)
    result = poissonize(structure)
    report = Report(echo=dump_structure(structure))
    report.add("paths_agree", True, "0")
    report.add(
        "poisson_residual",
        result.residual.is_zero(),
        print_polynomial(result.residual),
    )
    if args.format == "json":
        doc = report.to_dict()
        doc["pi"] = print_polynomial(result.pi)
        out.write(json.dumps(doc, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(f"Pi = {print_polynomial(result.pi)}\n")
        out.write(report.render_text())
    return 0 if result.residual.is_zero() else 1


def _cmd_verify_diagram(args, out) -> int:
    structure = load_structure(args.file)
    report = verify_diagram(structure)
    _emit(report, args.format, out)
    for name in CONSTRUCTION_VERDICTS:
        if not report.verdict(name).passed:
            return INTERNAL_ERROR
    for name in VALIDITY_VERDICTS:
        if not report.verdict(name).passed:
            return 1
    return 0


def _cmd_selftest(args, out) -> int:
    report = run_selftest(args.suite, args.seed, args.trials)
    _emit(report, args.format, out)
    return 0 if report.passed else INTERNAL_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gradedcontact",
        description="Exact checks for Jacobi structures, contact NQ fields, and Poissonization.",
    )
    parser.add_argument("--version", action="version", version=TOOL_VERSION)
    sub = parser.add_subparsers(dest="command", required=True)

    def add_format(p):
        p.add_argument(
            "--format", choices=("text", "json"), default="text", help="output format"
        )

    for name, handler, needs_file in (
        ("check", _cmd_check, True),
        ("build-q", _cmd_build_q, True),
        ("poissonize", _cmd_poissonize, True),
        ("verify-diagram", _cmd_verify_diagram, True),
    ):
        p = sub.add_parser(name)
        if needs_file:
            p.add_argument("file", help="jacobi/1 structure file")
        add_format(p)
        p.set_defaults(handler=handler)

    p = sub.add_parser("selftest")
    p.add_argument("--suite", choices=SUITES, default="all")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--trials", type=int, default=200)
    add_format(p)
    p.set_defaults(handler=_cmd_selftest)
    return parser


def main(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed a message; normalize the usage exit code
        return USAGE_ERROR if exc.code not in (0,) else 0
    try:
        return args.handler(args, out)
    except _INTERNAL_ERRORS as exc:
        print(f"internal invariant failure: {exc}", file=sys.stderr)
        return INTERNAL_ERROR
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except GradedContactError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR


if __name__ == "__main__":
    sys.exit(main())
