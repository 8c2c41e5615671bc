"""Command-line entry point.

Subcommands print JSON (single values) or CSV (grids) on stdout.  Exit
status is 0 on success, 1 when a verification fails or a numerical
evaluation cannot be completed, and 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import json
import sys
from typing import Sequence

from . import __version__
from .casimir import DiffSpec, casimir_eigenvalue
from .errors import ConfigError, ConvergenceFailure, DimensionMismatch, IrregularParameters, WhittakerError
from .geometry import HalfPlanePoint
from .harness import run_suite, summary_table
from .jacquet import QuadratureSpec, WhittakerConfig, whittaker_eval, whittaker_eval_y
from .langlands import CharacterTuple, LanglandsParams
from .restriction import restrict

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    code = "E_USAGE"


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{what} is not valid JSON: {exc}") from None


def _params(text: str) -> LanglandsParams:
    try:
        return LanglandsParams.from_json(_json_arg(text, "--alpha"))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--alpha: {exc}") from None


def _character(text: str) -> CharacterTuple:
    try:
        return CharacterTuple.from_json(_json_arg(text, "--N"))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--N: {exc}") from None


def _quad(text: str | None) -> QuadratureSpec:
    if text is None:
        return QuadratureSpec()
    try:
        return QuadratureSpec.from_json(_json_arg(text, "--quad"))
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--quad: {exc}") from None


def _emit(obj) -> None:
    sys.stdout.write(json.dumps(obj) + "\n")


def cmd_eval(args) -> int:
    cfg = WhittakerConfig(args.n, _params(args.alpha), _character(args.N))
    try:
        point = HalfPlanePoint.from_json(_json_arg(args.point, "--point"))
    except ValueError as exc:
        raise UsageError(f"--point: {exc}") from None
    _emit(whittaker_eval(cfg, point, _quad(args.quad)).to_json())
    return EXIT_OK


def cmd_casimir(args) -> int:
    try:
        spec = DiffSpec.from_json(_json_arg(args.diff, "--diff")) if args.diff else None
    except (ValueError, TypeError) as exc:
        raise UsageError(f"--diff: {exc}") from None
    alpha = _params(args.alpha)
    lam, res = casimir_eigenvalue(args.n, args.ell, alpha, spec, return_residual=True)
    _emit({"lambda": [lam.real, lam.imag], "crosscheck_residual": res})
    return EXIT_OK


def cmd_restrict(args) -> int:
    cfg = WhittakerConfig(args.n, _params(args.alpha), _character(args.N))
    _emit(restrict(cfg, args.m).to_json())
    return EXIT_OK


def cmd_verify_run(args) -> int:
    reports = run_suite(args.config, args.out)
    sys.stdout.write(summary_table(reports))
    return EXIT_OK if all(r.as_expected for r in reports) else EXIT_FAIL


def _grid(text: str, n: int) -> list[list[float]]:
    grid = _json_arg(text, "--grid")
    if isinstance(grid, dict):
        grid = [grid.get(f"y{i}") for i in range(1, n)]
    if not isinstance(grid, list) or len(grid) != n - 1:
        raise UsageError(f"--grid must list {n - 1} coordinate lists")
    out = []
    for axis in grid:
        if not isinstance(axis, list) or not axis:
            raise UsageError("--grid entries must be nonempty lists of positive numbers")
        try:
            vals = [float(v) for v in axis]
        except (TypeError, ValueError):
            raise UsageError("--grid entries must be numbers") from None
        if any(v <= 0 for v in vals):
            raise UsageError("--grid values must be positive")
        out.append(vals)
    return out


def cmd_scan(args) -> int:
    cfg = WhittakerConfig(args.n, _params(args.alpha), _character(args.N))
    grid = _grid(args.grid, args.n)
    q = _quad(args.quad)
    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow([f"y{i}" for i in range(1, args.n)] + ["re", "im", "est_rel_err"])
        for y in itertools.product(*grid):
            try:
                v = whittaker_eval_y(cfg, y, q)
            except ConvergenceFailure as exc:
                v = exc.result
            writer.writerow([repr(t) for t in y] + [repr(v.value.real), repr(v.value.imag), repr(v.est_rel_err)])
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    version = f"%(prog)s {__version__}"
    parser = argparse.ArgumentParser(
        prog="whittaker",
        description="Jacquet Whittaker functions, their block restriction, and numerical checks.",
    )
    parser.add_argument("--version", action="version", version=version)
    sub = parser.add_subparsers(dest="command", metavar="{eval,casimir-lambda,restrict,verify,scan}")

    def add(name, help_, func):
        p = sub.add_parser(name, help=help_, description=help_)
        p.add_argument("--version", action="version", version=version)
        p.set_defaults(func=func)
        return p

    p = add("eval", "Evaluate W at one point; prints a WhittakerValue as JSON.", cmd_eval)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True, help="JSON list of [re, im] pairs")
    p.add_argument("--N", required=True, help="JSON list of integers")
    p.add_argument("--point", required=True, help='JSON point {"n": .., "x": [[i, j, v], ..], "y": [..]}')
    p.add_argument("--quad", help="JSON QuadratureSpec overrides")

    p = add("casimir-lambda", "Casimir eigenvalue of the shifted power function.", cmd_casimir)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--ell", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--diff", help="JSON DiffSpec overrides")

    p = add("restrict", "Predicted Whittaker data of the restriction to GL(m).", cmd_restrict)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--N", required=True)

    p = add("verify", "Run verification suites.", None)
    vsub = p.add_subparsers(dest="verify_command", metavar="{run}")
    run = vsub.add_parser("run", help="Run the checks listed in a JSON config.")
    run.add_argument("--version", action="version", version=version)
    run.add_argument("--config", required=True)
    run.add_argument("--out", default=".", help="directory for report.json and report.txt")
    run.set_defaults(func=cmd_verify_run)

    p = add("scan", "Evaluate W over a y-grid at x = 0; prints CSV.", cmd_scan)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alpha", required=True)
    p.add_argument("--N", required=True)
    p.add_argument("--grid", required=True, help="JSON list of per-coordinate value lists, e.g. [[1,2,4,8]]")
    p.add_argument("--quad")
    p.add_argument("--out", help="write CSV here instead of stdout")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    func = getattr(args, "func", None)
    if func is None:
        parser.print_usage(sys.stderr)
        sys.stderr.write("error [E_USAGE]: a subcommand is required\n")
        return EXIT_USAGE
    try:
        return func(args)
    except (UsageError, ConfigError, DimensionMismatch, IrregularParameters) as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return EXIT_USAGE
    except WhittakerError as exc:
        sys.stderr.write(f"error [{exc.code}]: {exc}\n")
        return EXIT_FAIL
    except ValueError as exc:
        sys.stderr.write(f"error [E_USAGE]: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
