"""Command-line interface.

Exit status is 0 on success, 1 for invalid, infeasible or degenerate input
and 2 when the computation itself fails (internal inconsistency, quadrature
or convergence failure).  Errors are reported as a JSON object on stderr.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .area import area_from_axes
from .duality import solve_line_set
from .errors import (
    InternalInconsistency, NoConvergence, QuadratureFailure, SpheroConicError,
)
from .geometry import SpherePoint, semi_axes
from .inbetween import example1_fixture, example1_grid, sweep
from .io import (
    conic_dict, dumps_csv, dumps_json, load_lines, load_points, make_meta, parse_conic,
    parse_numbers, result_dict, write_text,
)
from .solver import Mode, SolverConfig, solve_fixed_axes, solve_fixed_center, solve_general
from .uniqueness import certify, find_v0, inscribed_circle_radius, radius_R
from .verification import verify_lemmas

SWEEP_HEADER = ["lambda", "nu1", "nu2", "nu3_prenorm", "area"]
_INTERNAL = (InternalInconsistency, QuadratureFailure, NoConvergence)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 by default, which is reserved here
    def error(self, message):
        raise UsageError(message)


def _positive(kind):
    def conv(text):
        v = kind(text)
        if not v > 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return v
    return conv


def _grid_size(text):
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("grid size must be at least 2")
    return n


def _frame(text):
    if text.strip().lower() == "identity":
        return np.eye(3)
    return np.array(parse_numbers(text, 4))


def _config(args):
    return SolverConfig(multistart_count=args.starts, seed=args.seed,
                        agreement_tol=args.agreement_tol)


def _tolerances(args, *names):
    return {n: getattr(args, n) for n in names if hasattr(args, n)}


def _emit_json(args, payload, seed=None, tolerances=None):
    meta = make_meta(args.command_line, __version__, seed, tolerances)
    write_text(dumps_json(payload, meta), args.output, sys.stdout)


def _emit_csv(args, rows, seed=None, tolerances=None):
    meta = make_meta(args.command_line, __version__, seed, tolerances)
    write_text(dumps_csv(SWEEP_HEADER, rows, meta), args.output, sys.stdout)


def cmd_area(args):
    if args.axes is not None:
        a, b = parse_numbers(args.axes, 2)
        val = area_from_axes(max(a, b), min(a, b), args.tol)
        payload = {"a": max(a, b), "b": min(a, b), "area": val.area, "error": val.error}
    else:
        c = parse_conic(args.conic)
        a, b, _, _ = semi_axes(c)
        val = area_from_axes(a, b, args.tol)
        payload = {"conic": conic_dict(c), "area": val.area, "error": val.error}
    _emit_json(args, payload, tolerances=_tolerances(args, "tol"))


def _solve_mode(args):
    if args.fixed_axes is not None:
        return Mode.FIXED_AXES, {"frame": _frame(args.fixed_axes)}
    if args.fixed_center is not None:
        return Mode.FIXED_CENTER, {"center": SpherePoint.from_vector(
            parse_numbers(args.fixed_center, 3))}
    return Mode.GENERAL, {}


def _run_solver(points, mode, kw, cfg):
    if mode == Mode.FIXED_AXES:
        return solve_fixed_axes(points, kw["frame"], cfg)
    if mode == Mode.FIXED_CENTER:
        return solve_fixed_center(points, kw["center"], cfg)
    return solve_general(points, cfg)


def cmd_solve(args):
    ps = load_points(args.input)
    mode, kw = _solve_mode(args)
    res = _run_solver(ps, mode, kw, _config(args))
    payload = {"result": result_dict(res), "points": [list(p) for p in ps.points]}
    _emit_json(args, payload, seed=args.seed,
               tolerances=_tolerances(args, "agreement_tol"))


def cmd_dual_solve(args):
    lines = load_lines(args.input)
    mode, kw = _solve_mode(args)
    res = solve_line_set(lines, mode, kw.get("frame"), kw.get("center"), _config(args))
    payload = {"result": result_dict(res), "lines": [list(ln.pole) for ln in lines]}
    _emit_json(args, payload, seed=args.seed,
               tolerances=_tolerances(args, "agreement_tol"))


def cmd_sweep(args):
    c0, c1 = parse_conic(args.conic0), parse_conic(args.conic1)
    sw = sweep(c0.matrix, c1.matrix, example1_grid(args.grid), args.tol)
    _emit_csv(args, list(sw.rows()), tolerances=_tolerances(args, "tol"))


def cmd_example1(args):
    m0, m1 = example1_fixture()
    sw = sweep(m0, m1, example1_grid(args.grid), args.tol)
    if not sw.all_above_endpoints:
        print(json.dumps({"warning": "some interior area does not exceed the endpoints"}),
              file=sys.stderr)
    _emit_csv(args, list(sw.rows()), tolerances=_tolerances(args, "tol"))


def cmd_v0(args):
    v0 = find_v0(args.tol)
    _emit_json(args, {"v0": v0, "R": math.atan(1.0 / math.sqrt(v0)),
                      "R_default": radius_R()}, tolerances=_tolerances(args, "tol"))


def cmd_certify(args):
    c = parse_conic(args.conic)
    if args.rho is not None:
        rho, source = args.rho, "user"
    else:
        rho = inscribed_circle_radius(load_points(args.points).vectors)
        source = "inscribed_circle_radius"
    cert = certify(c, rho, source)
    _emit_json(args, {"conic": conic_dict(c), "certificate": cert.as_dict()})


def cmd_verify_lemmas(args):
    report = verify_lemmas(args.samples, args.seed)
    for line in report.lines():
        print(line, file=sys.stderr)
    _emit_json(args, {"report": report.as_dict()}, seed=args.seed,
               tolerances={"samples": args.samples})
    if args.strict and not report.passed:
        return 1
    return 0


def build_parser():
    p = _Parser(prog="spheroconic", description="Conics on the elliptic plane.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_text):
        sp = sub.add_parser(name, help=help_text, description=help_text)
        sp.add_argument("-o", "--output", help="write to this file instead of stdout")
        sp.set_defaults(func=func)
        return sp

    sp = add("area", cmd_area, "area of a conic")
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--conic", help='"nu1,nu2[,w,x,y,z]" or a JSON file')
    g.add_argument("--axes", help='semi-axis tangents "a,b"')
    sp.add_argument("--tol", type=_positive(float), default=1e-10)

    for name, func, what in (("solve", cmd_solve, "points"),
                             ("dual-solve", cmd_dual_solve, "lines")):
        text = ("minimal-area enclosing conic of a point set" if what == "points"
                else "minimal-measure enclosing conic of a line set")
        sp = add(name, func, text)
        sp.add_argument("input", help=f"JSON or CSV file with {what}")
        g = sp.add_mutually_exclusive_group()
        g.add_argument("--fixed-axes", metavar="Q", help='"identity" or quaternion "w,x,y,z"')
        g.add_argument("--fixed-center", metavar="P", help='center "x,y,z"')
        g.add_argument("--general", action="store_true", help="no restriction (default)")
        sp.add_argument("--starts", type=int, default=8, help="extra multistart seeds")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--agreement-tol", type=_positive(float), default=1e-4)

    sp = add("sweep", cmd_sweep, "areas of in-between conics as CSV")
    sp.add_argument("conic0")
    sp.add_argument("conic1")
    sp.add_argument("--grid", type=_grid_size, default=19)
    sp.add_argument("--tol", type=_positive(float), default=1e-12)

    sp = add("v0", cmd_v0, "zero of J and the radius bound R")
    sp.add_argument("--tol", type=_positive(float), default=1e-10)

    sp = add("certify", cmd_certify, "uniqueness certificate for a candidate conic")
    sp.add_argument("--conic", required=True)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--rho", type=_positive(float))
    g.add_argument("--points", help="derive rho from the inscribed circle of these points")

    sp = add("verify-lemmas", cmd_verify_lemmas, "randomised checks of the auxiliary inequalities")
    sp.add_argument("--samples", type=_positive(int), default=10_000)
    sp.add_argument("--seed", type=int, default=42)
    sp.add_argument("--strict", action="store_true", help="exit 1 if any check fails")

    sp = add("example1", cmd_example1, "the congruent-conic blend whose areas all exceed the endpoints")
    sp.add_argument("--grid", type=_grid_size, default=19)
    sp.add_argument("--tol", type=_positive(float), default=1e-12)
    return p


def _fail(exc, status, **extra):
    obj = {"error": type(exc).__name__, "message": str(exc)}
    obj.update({k: v for k, v in extra.items() if v is not None})
    print(json.dumps(obj, sort_keys=True), file=sys.stderr)
    return status


def main(argv=None):
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        return _fail(exc, 1)
    args.command_line = " ".join(["spheroconic"] + argv)
    try:
        status = args.func(args)
    except _INTERNAL as exc:
        return _fail(exc, 2)
    except SpheroConicError as exc:
        return _fail(exc, 1, line=getattr(exc, "line", None), column=getattr(exc, "column", None))
    except (OSError, ValueError) as exc:
        return _fail(exc, 1)
    return status or 0


if __name__ == "__main__":
    sys.exit(main())
