"""JSON documents exchanged by the command-line tools.

Every document carries ``"schema": "trifit/1"``. Floats are written with 17
significant digits so that identical runs give byte-identical files and
values round-trip exactly.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .geom import validate_config, validate_shape
from .solver import Solution, SolveRequest, VerificationReport

SCHEMA = "trifit/1"


def _encode(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return format(x, ".17g") if math.isfinite(x) else "null"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        if all(isinstance(v, (int, float, np.number)) and not isinstance(v, bool) for v in obj):
            return "[" + ", ".join(_encode(v, indent, level + 1) for v in obj) + "]"
        items = ",\n".join(pad + _encode(v, indent, level + 1) for v in obj)
        return "[\n" + items + "\n" + end + "]"
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = ",\n".join(
            f"{pad}{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in obj.items()
        )
        return "{\n" + items + "\n" + end + "}"
    raise TypeError(f"cannot encode {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def loads(text: str):
    doc = json.loads(text)
    if not isinstance(doc, dict) or doc.get("schema") != SCHEMA:
        raise ValueError(f"not a {SCHEMA} document")
    return doc


def _conv(degrees: bool):
    return math.degrees if degrees else (lambda x: x)


def _inv(degrees: bool):
    return math.radians if degrees else (lambda x: x)


def request_to_dict(req: SolveRequest, degrees: bool = False) -> dict:
    out = _conv(degrees)
    return {
        "angles": [out(t) for t in req.shape.as_tuple()],
        "sides": [out(t) for t in req.config.as_tuple()],
        "scale": req.scale,
        "mode": req.mode,
        "scan_n": req.scan_n,
        "tol_pos": req.tol_pos,
        "tol_ang": req.tol_ang,
        "allow_origin_vertex": req.allow_origin_vertex,
    }


def request_from_dict(d: dict, degrees: bool = False) -> SolveRequest:
    inp = _inv(degrees)
    angles = [inp(float(t)) for t in d["angles"]]
    sides = [inp(float(t)) for t in d["sides"]]
    return SolveRequest(
        shape=validate_shape(*angles),
        config=validate_config(*sides),
        scale=float(d.get("scale", 1.0)),
        mode=d.get("mode", "lines"),
        scan_n=int(d.get("scan_n", 720)),
        tol_pos=float(d.get("tol_pos", 1e-9)),
        tol_ang=float(d.get("tol_ang", 1e-7)),
        allow_origin_vertex=bool(d.get("allow_origin_vertex", False)),
    )


def solution_to_dict(sol: Solution, degrees: bool = False) -> dict:
    out = _conv(degrees)
    return {
        "theta": out(sol.theta),
        "psi": out(sol.psi),
        "A": [float(v) for v in sol.A],
        "B": [float(v) for v in sol.B],
        "C": [float(v) for v in sol.C],
        "residual": sol.residual,
        "angles": [out(t) for t in sol.achieved_angles],
        "sides": list(sol.side_lengths),
    }


def solution_from_dict(d: dict, degrees: bool = False) -> Solution:
    inp = _inv(degrees)
    return Solution(
        theta=inp(float(d["theta"])),
        psi=inp(float(d["psi"])),
        A=np.array(d["A"], dtype=float),
        B=np.array(d["B"], dtype=float),
        C=np.array(d["C"], dtype=float),
        residual=float(d.get("residual", math.nan)),
        achieved_angles=tuple(inp(float(t)) for t in d.get("angles", (math.nan,) * 3)),
        side_lengths=tuple(float(t) for t in d.get("sides", (math.nan,) * 3)),
    )


def report_to_dict(rep: VerificationReport, degrees: bool = False) -> dict:
    out = _conv(degrees)
    return {
        "passed": rep.passed,
        "on_line": list(rep.on_line),
        "angle_errors": [out(t) for t in rep.angle_errors],
        "side_errors": list(rep.side_errors),
        "ray_dots": list(rep.ray_dots) if rep.ray_dots is not None else None,
        "checks": dict(rep.checks),
    }


def solutions_document(req: SolveRequest, sols, degrees: bool = False) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "solutions",
        "angle_unit": "deg" if degrees else "rad",
        "request": request_to_dict(req, degrees),
        "solutions": [solution_to_dict(s, degrees) for s in sols],
    }


def read_solutions_document(doc: dict) -> tuple[SolveRequest, list[Solution], bool]:
    if doc.get("kind") != "solutions":
        raise ValueError("expected a 'solutions' document")
    degrees = doc.get("angle_unit", "rad") == "deg"
    req = request_from_dict(doc["request"], degrees)
    sols = [solution_from_dict(s, degrees) for s in doc["solutions"]]
    return req, sols, degrees


def scene_to_dict(scene, degrees: bool = False) -> dict:
    out = _conv(degrees)
    return {
        "circles": [c.normal for c in scene.circles],
        "cutting": scene.cutting.normal,
        "orientation": scene.orientation,
        "points": {
            "p1": scene.p1,
            "p2": scene.p2,
            "p3": scene.p3,
            "p1p": scene.p1p,
            "p2p": scene.p2p,
            "p3p": scene.p3p,
        },
        "arcs": [out(a) for a in scene.arcs],
    }
