"""Fit a triangle with prescribed angles onto three concurrent lines.

For each theta the swung vertex C sweeps a vertical circle (center F, radius
r, in the plane through F with normal e). The line l3 meets that plane in a
single point P = t d3 with t = (F.e) / (d3.e); a solution needs |P - F| = r.
Clearing the denominator gives a continuous, pole-free function of theta,

    G(theta) = |(F.e) d3 - (d3.e) F|^2 - r^2 (d3.e)^2,

whose roots are scanned on a grid and refined. psi is recovered from the
position of P on the circle and (theta, psi) is polished with a few Newton
steps on the two components of C orthogonal to l3. When l3 is the z-axis the
function above vanishes identically and the dedicated z-axis search is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateTriangle, NotFound, NumericalFailure
from .geom import (
    EPS_DIR,
    TOL_ANG,
    TOL_POS,
    LineConfig,
    LineTriple,
    TriangleShape,
    build_canonical_lines,
    distance_to_line,
    interior_angles,
)
from .roots import TWO_PI, periodic_roots
from .sullivan import (
    SullivanFrame,
    find_z_axis_witnesses,
    make_frame,
    pose_at,
    spatial_jacobian,
    spatial_point,
)

DEDUP_TOL = 1e-6


@dataclass(frozen=True)
class SolveRequest:
    shape: TriangleShape
    config: LineConfig
    scale: float = 1.0
    mode: str = "lines"
    scan_n: int = 720
    tol_pos: float = TOL_POS
    tol_ang: float = TOL_ANG
    allow_origin_vertex: bool = False

    def __post_init__(self):
        if self.mode not in ("lines", "rays"):
            raise ValueError(f"mode must be 'lines' or 'rays', got {self.mode!r}")
        if self.scan_n < 16:
            raise ValueError("scan_n must be at least 16")
        if not (self.tol_pos > 0 and self.tol_ang > 0 and self.scale > 0):
            raise ValueError("scale and tolerances must be positive")


@dataclass(frozen=True, eq=False)
class Solution:
    theta: float
    psi: float
    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    residual: float
    achieved_angles: tuple[float, float, float]
    side_lengths: tuple[float, float, float]


@dataclass(frozen=True)
class Line3Param:
    """l3 written as x = m z, y = n z (undefined when l3 is the z-axis)."""

    m: float
    n: float
    is_z_axis: bool


@dataclass
class VerificationReport:
    passed: bool
    on_line: tuple[float, float, float]
    angle_errors: tuple[float, float, float]
    side_errors: tuple[float, float, float]
    ray_dots: tuple[float, float, float] | None
    checks: dict[str, bool] = field(default_factory=dict)

    @property
    def max_angle_error(self) -> float:
        return max(self.angle_errors)


def line3_param(lines: LineTriple) -> Line3Param:
    d3 = lines.rays[2]
    if abs(d3[0]) <= EPS_DIR and abs(d3[1]) <= EPS_DIR:
        return Line3Param(0.0, 0.0, True)
    return Line3Param(d3[0] / d3[2], d3[1] / d3[2], False)


def residual_to_l3(frame: SullivanFrame, lines: LineTriple, theta: float, psi: float) -> float:
    return distance_to_line(spatial_point(frame, theta, psi).Cbreve, lines.rays[2])


def _mismatch(frame: SullivanFrame, d3: np.ndarray):
    ca, r = math.cos(frame.shape.angA), frame.r

    def G(thetas):
        th = np.asarray(thetas, dtype=float)
        phi = frame.gamma + th
        ex, ey = np.cos(phi), np.sin(phi)
        fx = frame.k * np.sin(th) + frame.b * ca * ex
        fy = frame.b * ca * ey
        fe = fx * ex + fy * ey
        de = d3[0] * ex + d3[1] * ey
        wx = fe * d3[0] - de * fx
        wy = fe * d3[1] - de * fy
        wz = fe * d3[2]
        return wx * wx + wy * wy + wz * wz - (r * de) ** 2

    return G


def _psi_candidates(frame: SullivanFrame, d3: np.ndarray, theta: float) -> list[float]:
    pose = pose_at(frame, theta)
    phi = frame.gamma + theta
    e = np.array([math.cos(phi), math.sin(phi), 0.0])
    u = np.array([-math.sin(phi), math.cos(phi), 0.0])
    F = pose.F
    de, fe = float(d3 @ e), float(F @ e)
    ts: list[float] = []
    if abs(de) > 1e-8:
        ts.append(fe / de)
    else:
        # l3 (nearly) lies in the swing plane: intersect it with the circle
        # |t d3 - F| = r directly.
        p = float(d3 @ F)
        disc = p * p - (float(F @ F) - frame.r ** 2)
        if disc >= 0.0:
            root = math.sqrt(disc)
            ts.extend([p - root, p + root])
    out = []
    for t in ts:
        P = t * d3
        out.append(math.atan2(float(P[2]), float((P - F) @ u)))
    return out


def _polish(frame: SullivanFrame, d3: np.ndarray, theta: float, psi: float):
    """Newton steps on the components of C orthogonal to l3."""
    q1 = np.cross(d3, [1.0, 0.0, 0.0] if abs(d3[0]) < 0.9 else [0.0, 1.0, 0.0])
    q1 /= np.linalg.norm(q1)
    q2 = np.cross(d3, q1)
    Q = np.vstack([q1, q2])

    residual = distance_to_line(spatial_point(frame, theta, psi).Cbreve, d3)
    best = (theta, psi, residual)
    for _ in range(6):
        if residual == 0.0:
            break
        rvec = Q @ spatial_point(frame, theta, psi).Cbreve
        J = Q @ spatial_jacobian(frame, theta, psi)
        try:
            step = np.linalg.solve(J, -rvec)
        except np.linalg.LinAlgError:
            break
        theta, psi = theta + float(step[0]), psi + float(step[1])
        residual = distance_to_line(spatial_point(frame, theta, psi).Cbreve, d3)
        if residual < best[2]:
            best = (theta, psi, residual)
        else:
            break
    return best


def _wrap_psi(psi: float) -> float:
    w = math.remainder(psi, TWO_PI)
    return math.pi if w == -math.pi else w


def _torus_dist(p, q) -> float:
    return max(abs(math.remainder(p[0] - q[0], TWO_PI)), abs(math.remainder(p[1] - q[1], TWO_PI)))


def _make_solution(frame, lines, theta, psi) -> Solution | None:
    pose = pose_at(frame, theta)
    C = spatial_point(frame, theta, psi).Cbreve
    try:
        angles = interior_angles(pose.A, pose.B, C)
    except DegenerateTriangle:
        return None
    sides = (
        float(np.linalg.norm(C - pose.B)),
        float(np.linalg.norm(pose.A - C)),
        float(np.linalg.norm(pose.B - pose.A)),
    )
    return Solution(
        theta=theta,
        psi=psi,
        A=pose.A,
        B=pose.B,
        C=C,
        residual=distance_to_line(C, lines.rays[2]),
        achieved_angles=angles,
        side_lengths=sides,
    )


def solve_z_axis(frame: SullivanFrame, scan_n: int = 720) -> list[tuple[float, float]]:
    """Witnesses (theta, psi) placing C on the z-axis; raises NotFound if none."""
    witnesses = find_z_axis_witnesses(frame, scan_n)
    if not witnesses:
        raise NotFound("segment C'C'' never passes through the origin")
    return witnesses


def _raw_candidates(req: SolveRequest, frame: SullivanFrame, lines: LineTriple):
    d3 = lines.rays[2]
    tol = req.tol_pos * req.scale
    if line3_param(lines).is_z_axis:
        for theta, psi in find_z_axis_witnesses(frame, req.scan_n, req.tol_pos):
            yield theta, psi
        return

    G = _mismatch(frame, d3)
    for theta, crossing in periodic_roots(G, req.scan_n, touch_tol=1e-14 * frame.scale ** 2):
        accepted = False
        for psi in _psi_candidates(frame, d3, theta):
            t2, p2, res = _polish(frame, d3, theta, psi)
            if res <= tol:
                accepted = True
                yield t2, p2
        if crossing and not accepted:
            raise NumericalFailure(
                f"sign change of the l3 mismatch near theta={theta!r} did not refine to a solution",
                bracket=(theta - TWO_PI / req.scan_n, theta + TWO_PI / req.scan_n),
            )


def solve(req: SolveRequest) -> list[Solution]:
    """All triangles found on the theta grid, deduplicated and sorted by (theta, psi)."""
    lines = build_canonical_lines(req.config)
    frame = make_frame(req.shape, req.config.gamma, req.scale)
    origin_tol = 1e-9 * req.scale

    kept: list[Solution] = []
    for theta, psi in _raw_candidates(req, frame, lines):
        key = (theta % TWO_PI, _wrap_psi(psi))
        if any(_torus_dist(key, (s.theta, s.psi)) <= DEDUP_TOL for s in kept):
            continue
        sol = _make_solution(frame, lines, *key)
        if sol is None:
            continue
        if not req.allow_origin_vertex and min(
            np.linalg.norm(sol.A), np.linalg.norm(sol.B), np.linalg.norm(sol.C)
        ) <= origin_tol:
            continue
        if not verify(sol, req, lines).passed:
            continue
        kept.append(sol)
    kept.sort(key=lambda s: (s.theta, s.psi))
    return kept


def verify(sol: Solution, req: SolveRequest, lines: LineTriple | None = None) -> VerificationReport:
    """Check a solution against the request independently of how it was found."""
    if lines is None:
        lines = build_canonical_lines(req.config)
    A, B, C = (np.asarray(p, dtype=float) for p in (sol.A, sol.B, sol.C))
    tol = req.tol_pos * req.scale
    on_line = tuple(distance_to_line(p, d) for p, d in zip((A, B, C), lines.rays))

    try:
        got = interior_angles(A, B, C)
        angle_errors = tuple(abs(g - w) for g, w in zip(got, req.shape.as_tuple()))
    except DegenerateTriangle:
        angle_errors = (math.inf, math.inf, math.inf)

    a, b, c = (req.scale, *[req.scale * math.sin(t) / math.sin(req.shape.angA)
                            for t in (req.shape.angB, req.shape.angC)])
    measured = (np.linalg.norm(C - B), np.linalg.norm(A - C), np.linalg.norm(B - A))
    side_errors = tuple(float(abs(m - w) / w) for m, w in zip(measured, (a, b, c)))

    checks = {
        "A_on_l1": on_line[0] <= tol,
        "B_on_l2": on_line[1] <= tol,
        "C_on_l3": on_line[2] <= tol,
        "angles": max(angle_errors) <= req.tol_ang,
        "sides": max(side_errors) <= req.tol_pos,
    }
    ray_dots = None
    if req.mode == "rays":
        ray_dots = tuple(float(p @ d) for p, d in zip((A, B, C), lines.rays))
        checks["rays"] = min(ray_dots) >= 0.0
    if not req.allow_origin_vertex:
        checks["no_origin_vertex"] = min(np.linalg.norm(p) for p in (A, B, C)) > 1e-9 * req.scale
    return VerificationReport(
        passed=all(checks.values()),
        on_line=on_line,
        angle_errors=angle_errors,
        side_errors=side_errors,
        ray_dots=ray_dots,
        checks=checks,
    )
