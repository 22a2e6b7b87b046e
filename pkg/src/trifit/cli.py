"""Command-line front end.

Exit codes: 0 success, 2 invalid input, 3 no result or failed check,
4 I/O error, 5 internal numerical failure. Errors are reported on stderr as
a JSON object.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import serialize
from .errors import NotFound, NumericalFailure, TrifitError
from .geom import build_canonical_lines, validate_config, validate_shape
from .serialize import SCHEMA, dumps
from .solver import SolveRequest, solve, verify
from .spherical import (
    EllipticPoint,
    elliptic_construct,
    elliptic_distance,
    oracle_search,
    scene_from_solution,
    verify_question1,
)
from .sullivan import make_frame
from .svg import construction_svg
from .sweep import parse_axis, parse_link, sweep

EXIT_OK, EXIT_INPUT, EXIT_NONE, EXIT_IO, EXIT_NUMERIC = 0, 2, 3, 4, 5

# Hand-typed angle triples (e.g. 1.0472 three times) miss pi by ~1e-5; within
# this band they are rescaled to sum to pi exactly.
CLI_SUM_TOL = 1e-3


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _triple(text: str, degrees: bool) -> tuple[float, float, float]:
    try:
        vals = [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"expected three comma-separated numbers, got {text!r}") from exc
    if len(vals) != 3:
        raise InputError(f"expected three comma-separated numbers, got {text!r}")
    if degrees:
        vals = [math.radians(v) for v in vals]
    return tuple(vals)


def _shape(text: str, degrees: bool):
    vals = _triple(text, degrees)
    total = math.fsum(vals)
    if abs(total - math.pi) <= CLI_SUM_TOL and total > 0:
        vals = tuple(v * math.pi / total for v in vals)
    return validate_shape(*vals)


def _request(args) -> SolveRequest:
    return SolveRequest(
        shape=_shape(args.angles, args.degrees),
        config=validate_config(*_triple(args.sides, args.degrees)),
        scale=args.scale,
        mode=args.mode,
        scan_n=args.scan_n,
    )


def _emit(text: str, path: str | None) -> None:
    if path and path != "-":
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_solutions(path: str):
    try:
        doc = serialize.loads(_read(path))
        return serialize.read_solutions_document(doc)
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise InputError(f"cannot parse solutions document: {exc}") from exc


# ----------------------------------------------------------------- commands


def cmd_solve(args) -> int:
    req = _request(args)
    sols = solve(req)
    _emit(dumps(serialize.solutions_document(req, sols, args.degrees)), args.out)
    return EXIT_OK if sols else EXIT_NONE


def cmd_verify(args) -> int:
    req, sols, degrees = _load_solutions(args.solution)
    lines = build_canonical_lines(req.config)
    reports = [verify(s, req, lines) for s in sols]
    ok = bool(reports) and all(r.passed for r in reports)
    doc = {
        "schema": SCHEMA,
        "kind": "verification",
        "angle_unit": "deg" if degrees else "rad",
        "passed": ok,
        "reports": [serialize.report_to_dict(r, degrees) for r in reports],
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK if ok else EXIT_NONE


def cmd_spherical(args) -> int:
    req, sols, degrees = _load_solutions(args.solution)
    lines = build_canonical_lines(req.config)
    conv = math.degrees if degrees else (lambda x: x)
    entries = []
    ok = bool(sols)
    for i, sol in enumerate(sols):
        scene = scene_from_solution(sol, lines)
        q1 = verify_question1(scene, req.shape, req.tol_ang)
        ok = ok and q1.passed
        entries.append({
            "solution_index": i,
            "scene": serialize.scene_to_dict(scene, degrees),
            "question1": {
                "passed": q1.passed,
                "deviations": [conv(d) for d in q1.deviations],
                "arc_sum_error": conv(q1.arc_sum_error),
            },
        })
    doc = {
        "schema": SCHEMA,
        "kind": "spherical",
        "angle_unit": "deg" if degrees else "rad",
        "passed": ok,
        "scenes": entries,
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK if ok else EXIT_NONE


def cmd_oracle(args) -> int:
    shape = _shape(args.angles, args.degrees)
    config = validate_config(*_triple(args.sides, args.degrees))
    res = oracle_search(shape, build_canonical_lines(config), args.n_grid)
    conv = math.degrees if args.degrees else (lambda x: x)
    doc = {
        "schema": SCHEMA,
        "kind": "oracle",
        "angle_unit": "deg" if args.degrees else "rad",
        "normal": res.normal,
        "deviation": conv(res.deviation),
        "arcs": [conv(a) for a in res.arcs],
        "grid_index": res.grid_index,
        "n_grid": args.n_grid,
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK if res.deviation <= args.threshold else EXIT_NONE


def cmd_sweep(args) -> int:
    deg = args.degrees
    template = SolveRequest(
        shape=_shape(args.angles, deg),
        config=validate_config(*_triple(args.sides, deg)),
        scale=args.scale,
        mode=args.mode,
        scan_n=args.scan_n,
    )
    axes = []
    for text in args.vary:
        ax = parse_axis(text)
        if deg and ax.name != "scale":
            ax = type(ax)(ax.name, math.radians(ax.start), math.radians(ax.stop), ax.steps)
        axes.append(ax)
    links = [parse_link(t) for t in args.link]
    grid = sweep(template, axes, links, jobs=args.jobs)
    convert = (lambda name, v: v if name == "scale" else math.degrees(v)) if deg else None
    _emit(grid.to_csv(convert), args.out)
    return EXIT_OK


def _points(text: str):
    try:
        pts = [np.array([float(v) for v in p.split(",")]) for p in text.split(";")]
    except ValueError as exc:
        raise InputError(f"bad --points {text!r}") from exc
    if len(pts) != 3 or any(p.shape != (3,) for p in pts):
        raise InputError("--points needs three x,y,z triples separated by ';'")
    return [EllipticPoint.from_vector(p) for p in pts]


def cmd_elliptic(args) -> int:
    P = _points(args.points)
    config = validate_config(*_triple(args.sides, args.degrees))
    Q = elliptic_construct(*P, config, scan_n=args.scan_n)
    conv = math.degrees if args.degrees else (lambda x: x)
    q = [e.rep for e in Q]
    p = [e.rep for e in P]
    doc = {
        "schema": SCHEMA,
        "kind": "elliptic",
        "angle_unit": "deg" if args.degrees else "rad",
        "P": p,
        "Q": q,
        "distances": [conv(elliptic_distance(q[1], q[2])), conv(elliptic_distance(q[2], q[0])),
                      conv(elliptic_distance(q[0], q[1]))],
        "incidence": [
            float(np.linalg.det(np.vstack([p[0], q[1], q[2]]))),
            float(np.linalg.det(np.vstack([p[1], q[2], q[0]]))),
            float(np.linalg.det(np.vstack([p[2], q[0], q[1]]))),
        ],
    }
    _emit(dumps(doc), args.out)
    return EXIT_OK


def cmd_plot(args) -> int:
    shape = _shape(args.angles, args.degrees)
    config = validate_config(*_triple(args.sides, args.degrees))
    theta = math.radians(args.theta) if args.degrees else args.theta
    frame = make_frame(shape, config.gamma, args.scale)
    _emit(construction_svg(frame, theta), args.svg)
    return EXIT_OK


# ------------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="trifit", description="Fit triangles with prescribed angles onto three concurrent lines.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, problem=True, solving=True):
        p.add_argument("--degrees", action="store_true", help="angles in and out are degrees")
        p.add_argument("--out", help="output file (default stdout)")
        if problem:
            p.add_argument("--angles", required=True, help="angA,angB,angC summing to pi")
            p.add_argument("--sides", required=True, help="alpha,beta,gamma between the lines")
            p.add_argument("--scale", type=float, default=1.0, help="side length a")
        if solving:
            p.add_argument("--mode", choices=("lines", "rays"), default="lines")
            p.add_argument("--scan-n", type=int, default=720, help="theta grid resolution")

    p = sub.add_parser("solve", help="find all fitted triangles")
    common(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="re-check a solutions document")
    common(p, problem=False, solving=False)
    p.add_argument("--solution", required=True, help="solutions JSON ('-' for stdin)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("spherical", help="map solutions to the great-circle picture")
    common(p, problem=False, solving=False)
    p.add_argument("--solution", required=True, help="solutions JSON ('-' for stdin)")
    p.set_defaults(func=cmd_spherical)

    p = sub.add_parser("oracle", help="brute-force search for the cutting great circle")
    common(p, solving=False)
    p.add_argument("--n-grid", type=int, default=2000)
    p.add_argument("--threshold", type=float, default=1e-6, help="max arc deviation counted as found")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("sweep", help="feasibility grid over shape/config parameters, as CSV")
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--out")
    p.add_argument("--angles", default="1.0471975511965976,1.0471975511965976,1.0471975511965976")
    p.add_argument("--sides", default="1.5707963267948966,1.5707963267948966,1.5707963267948966")
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--mode", choices=("lines", "rays"), default="lines")
    p.add_argument("--scan-n", type=int, default=720)
    p.add_argument("--vary", action="append", required=True, help="name=start:stop:steps")
    p.add_argument("--link", action="append", default=[], help="e.g. angA=angB=(pi-angC)/2 (radians)")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("elliptic", help="triangle through three collinear elliptic points")
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--out")
    p.add_argument("--points", required=True, help="x,y,z;x,y,z;x,y,z")
    p.add_argument("--sides", required=True)
    p.add_argument("--scan-n", type=int, default=720)
    p.set_defaults(func=cmd_elliptic)

    p = sub.add_parser("plot", help="SVG of the planar construction at theta")
    p.add_argument("--degrees", action="store_true")
    p.add_argument("--angles", required=True)
    p.add_argument("--sides", required=True)
    p.add_argument("--scale", type=float, default=1.0)
    p.add_argument("--theta", type=float, required=True)
    p.add_argument("--svg", help="output file (default stdout)")
    p.set_defaults(func=cmd_plot)
    return parser


def _fail(code: int, exc: BaseException) -> int:
    err = {"schema": SCHEMA, "error": type(exc).__name__, "message": str(exc), "exit_code": code}
    bracket = getattr(exc, "bracket", None)
    if bracket is not None:
        err["bracket"] = list(bracket)
    sys.stderr.write(dumps(err))
    return code


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except NumericalFailure as exc:
        return _fail(EXIT_NUMERIC, exc)
    except NotFound as exc:
        return _fail(EXIT_NONE, exc)
    except (InputError, TrifitError, ValueError) as exc:
        return _fail(EXIT_INPUT, exc)
    except OSError as exc:
        return _fail(EXIT_IO, exc)


if __name__ == "__main__":
    sys.exit(main())
