"""Command-line front end.

Exit codes: 0 pass, 1 verification failure, 2 usage or parse error,
3 numerical failure.
"""
from __future__ import annotations

import argparse
import os
from dataclasses import replace
import sys

import numpy as np

from . import formats
from .contractions import containment_region, equality_check
from .errors import NumRangeError, ParseError, UnknownSuite
from .essherm import essherm_dilation_region, two_point_product_region
from .matkernel import STRUCT_TOL
from .numrange import default_grid, range_polygon
from .projpairs import ProjPairCanonicalForm, build_pair, wpq_region
from .regions import region_contains, region_equality
from .shapes import MIN_GRID
from .verify import run_suite, summary_table, write_jsonl

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
MODES = ("projections", "contractions", "two_point", "essherm")


class UsageError(Exception):
    pass


def _grid(value):
    try:
        m = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid size must be an integer, got {value!r}") from None
    if m < MIN_GRID:
        raise argparse.ArgumentTypeError(f"grid size must be >= {MIN_GRID}")
    return m


def _positive_float(value):
    try:
        v = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {value!r}") from None
    if not v > 0:
        raise argparse.ArgumentTypeError("tolerance must be positive")
    return v


def _endpoints(value):
    parts = value.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("expected four values a1,a2,b1,b2")
    out = [formats.parse_entry(p.strip()) for p in parts]
    if any(z is None for z in out):
        raise argparse.ArgumentTypeError(f"malformed endpoint list {value!r}")
    return tuple(out)


def _form(value):
    try:
        return ProjPairCanonicalForm.parse(value)
    except NumRangeError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--m", type=_grid, default=None, help="grid size (default 720 or $NUMRANGE_GRID)")
    common.add_argument("--tol", type=_positive_float, default=1e-6, help="verdict tolerance")
    common.add_argument("--struct-tol", type=_positive_float, default=STRUCT_TOL,
                        help="tolerance for structural checks (Hermitian, projection, ...)")

    parser = argparse.ArgumentParser(prog="prodrange", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("range", parents=[common], help="numerical range of a matrix")
    p.add_argument("matrix")
    p.add_argument("--out", help="output path (default: standard output)")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")

    p = sub.add_parser("region", parents=[common], help="containment region for a product")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--pair", nargs=2, metavar=("A", "B"), help="two matrix files")
    src.add_argument("--form", type=_form, help="canonical form p,q,r,s:c1,c2,...")
    p.add_argument("--endpoints", type=_endpoints, help="segment endpoints a1,a2,b1,b2")
    p.add_argument("--mode", choices=MODES, default="projections")
    p.add_argument("--out", help="region output path")
    p.add_argument("--format", choices=("csv", "svg"), default="csv")
    p.add_argument("--report", help="write the per-angle report CSV here")

    p = sub.add_parser("verify", parents=[common], help="run a randomized verification suite")
    p.add_argument("suite")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--n", type=int, default=6)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="JSON-lines report stream path")

    p = sub.add_parser("demo", parents=[common], help="regenerate the worked examples")
    p.add_argument("outdir")
    return parser


def _write(path, text, stdout):
    if path is None:
        stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def _render(region, fmt):
    return formats.region_svg(region) if fmt == "svg" else formats.region_csv(region)


def cmd_range(args, stdout):
    A = formats.read_matrix(args.matrix)
    region = range_polygon(A, args.m)
    _write(args.out, _render(region, args.format), stdout)
    return EXIT_OK


def compute_region(mode, A, B, m, tol, struct_tol, endpoints=None):
    """Region and verdict report for one mode.

    ``projections`` and ``two_point`` compare by equality with W(AB);
    ``contractions`` and ``essherm`` by containment of W(AB).
    """
    W = range_polygon(A @ B, m, label="W(AB)")
    if mode == "projections":
        region = wpq_region(A, B, m, struct_tol)
        return region, region_equality(W, region, tol, name="projections")
    if mode == "two_point":
        region = two_point_product_region(A, B, m, endpoints, struct_tol)
        return region, region_equality(W, region, tol, name="two_point")
    if mode == "contractions":
        region = containment_region(A, B, m, struct_tol)
        report = region_contains(region, W, tol, name="contractions")
        eq = equality_check(A, B, m, tol, struct_tol)
        detail = {"equality_gap": eq.max_gap, "equal": eq.passed}
        return region, _detail(report, detail)
    region, report = essherm_dilation_region(A, B, m, tol, endpoints, struct_tol)
    return region, report


def _detail(report, detail):
    return replace(report, detail={**report.detail, **detail})


def cmd_region(args, stdout):
    if args.form is not None:
        A, B = build_pair(args.form)
    else:
        A, B = (formats.read_matrix(path) for path in args.pair)
    if args.endpoints is not None and args.mode not in ("two_point", "essherm"):
        raise UsageError("--endpoints only applies to --mode two_point or essherm")
    m = default_grid() if args.m is None else args.m
    region, report = compute_region(args.mode, A, B, m, args.tol, args.struct_tol, args.endpoints)
    if args.out:
        _write(args.out, _render(region, args.format), stdout)
    if args.report:
        _write(args.report, formats.report_csv(report), stdout)
    for line in formats.generator_lines(region):
        stdout.write(line + "\n")
    for key in ("equality_gap", "equal"):
        if key in report.detail:
            stdout.write(f"{key}: {report.detail[key]}\n")
    stdout.write(report.verdict_line() + "\n")
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_verify(args, stdout):
    if args.n < 2:
        raise UsageError("--n must be >= 2")
    if args.trials < 0:
        raise UsageError("--trials must be >= 0")
    m = default_grid() if args.m is None else args.m
    reports = run_suite(args.suite, args.trials, args.n, args.seed, args.tol, m)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
            write_jsonl(reports, fh)
    stdout.write(summary_table(reports) + "\n")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


NILPOTENT = np.array([[0, 1], [0, 0]], dtype=complex)
DIAG = np.diag([1.0, 0.5]).astype(complex)


def cmd_demo(args, stdout):
    out = args.outdir
    os.makedirs(out, exist_ok=True)
    m = default_grid() if args.m is None else args.m
    tol, st = args.tol, args.struct_tol

    def save(name, text):
        with open(os.path.join(out, name), "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        stdout.write(f"wrote {name}\n")

    save("nilpotent.txt", formats.format_matrix(NILPOTENT))
    save("diag.txt", formats.format_matrix(DIAG))
    save("three_point_a.txt", formats.format_matrix(np.diag([0.0, 0.5, 1.0])))
    save("three_point_b.txt", formats.format_matrix(np.diag([1.0, 0.5, 0.0])))

    for name, M in (("nilpotent", NILPOTENT), ("diag_squared", DIAG @ DIAG)):
        region = range_polygon(M, m)
        save(f"range_{name}.csv", formats.region_csv(region))
        save(f"range_{name}.svg", formats.region_svg(region))

    examples = [
        ("form_0.8", "projections", *build_pair(ProjPairCanonicalForm(0, 0, 0, 0, (0.8,))), None),
        ("diag_contractions", "contractions", DIAG, DIAG, None),
        ("diag_two_point", "two_point", DIAG, DIAG, None),
        ("three_point_essherm", "essherm", np.diag([0.0, 0.5, 1.0]), np.diag([1.0, 0.5, 0.0]), None),
        ("diag_essherm_endpoints", "essherm", DIAG, DIAG, (1, 0.5, 1, 0.5)),
    ]
    status = EXIT_OK
    for name, mode, A, B, ends in examples:
        region, report = compute_region(mode, A, B, m, tol, st, ends)
        save(f"region_{name}.csv", formats.region_csv(region))
        save(f"region_{name}.svg", formats.region_svg(region))
        save(f"report_{name}.csv", formats.report_csv(report))
        stdout.write(f"{name}: {report.verdict_line()}\n")
        if not report.passed:
            status = EXIT_FAIL

    eq = equality_check(DIAG, DIAG, m, tol, st)
    save("report_diag_equality.csv", formats.report_csv(eq))
    stdout.write(f"diag_equality (expected FAIL): {eq.verdict_line()}\n")
    if eq.passed:
        status = EXIT_FAIL
    return status


COMMANDS = {"range": cmd_range, "region": cmd_region, "verify": cmd_verify, "demo": cmd_demo}


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return COMMANDS[args.command](args, stdout)
    except (ParseError, UnknownSuite, UsageError) as exc:
        stderr.write(f"prodrange: error: {exc}\n")
        return EXIT_USAGE
    except OSError as exc:
        stderr.write(f"prodrange: error: {exc}\n")
        return EXIT_USAGE
    except ArithmeticError as exc:
        stderr.write(f"prodrange: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except NumRangeError as exc:
        stderr.write(f"prodrange: invalid input: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
