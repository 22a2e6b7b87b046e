"""Great circles on the unit sphere: the spherical twin of the fitting problem.

Three great circles come from the planes spanned by pairs of the lines l1, l2,
l3. A fourth (cutting) circle meets them in three antipodal pairs; the arcs
between consecutive points p1, p2, p3, -p1 must equal angC, angA, angB.
A solid solution yields such a circle: the plane of the triangle, translated
through the origin, with p1, p2, p3 along the sidelines BC, CA, AB.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import least_squares

from .errors import (
    AlignmentFailed,
    DegenerateSolution,
    NotFound,
    OrderUnachievable,
    PreconditionFailed,
    ShapeInvalid,
)
from .geom import (
    TOL_ANG,
    LineConfig,
    LineTriple,
    TriangleShape,
    build_canonical_lines,
    canonical_sign,
    unit,
    validate_shape,
)
from .solver import Solution, SolveRequest, solve


@dataclass(frozen=True, eq=False)
class GreatCircle:
    normal: np.ndarray

    @classmethod
    def from_normal(cls, v) -> "GreatCircle":
        return cls(canonical_sign(unit(v)))


@dataclass(frozen=True, eq=False)
class EllipticPoint:
    """A point of the elliptic plane: a unit vector identified with its negative."""

    rep: np.ndarray

    @classmethod
    def from_vector(cls, v) -> "EllipticPoint":
        return cls(canonical_sign(unit(np.asarray(v, dtype=float))))


@dataclass(frozen=True, eq=False)
class SphericalScene:
    circles: tuple[GreatCircle, GreatCircle, GreatCircle]
    cutting: GreatCircle
    orientation: np.ndarray  # normal along which p1, p2, p3, p1p, ... increase
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray
    arcs: tuple[float, float, float]

    @property
    def p1p(self) -> np.ndarray:
        return -self.p1

    @property
    def p2p(self) -> np.ndarray:
        return -self.p2

    @property
    def p3p(self) -> np.ndarray:
        return -self.p3

    @property
    def points(self) -> tuple[np.ndarray, ...]:
        return (self.p1, self.p2, self.p3, self.p1p, self.p2p, self.p3p)


@dataclass
class Question1Report:
    passed: bool
    deviations: tuple[float, float, float]
    arc_sum_error: float


@dataclass
class OracleResult:
    normal: np.ndarray
    deviation: float
    arcs: tuple[float, float, float]
    grid_index: int


def elliptic_distance(p, q) -> float:
    t = math.atan2(float(np.linalg.norm(np.cross(p, q))), float(np.dot(p, q)))
    return min(t, math.pi - t)


def arc_along(p, q, orientation) -> float:
    """Arc from p to q travelling positively about ``orientation``, in [0, 2*pi)."""
    t = math.atan2(float(np.dot(np.cross(p, q), orientation)), float(np.dot(p, q)))
    return t % (2 * math.pi)


def circles_from_lines(lines: LineTriple) -> tuple[GreatCircle, GreatCircle, GreatCircle]:
    d1, d2, d3 = lines.rays
    return (
        GreatCircle.from_normal(np.cross(d2, d3)),
        GreatCircle.from_normal(np.cross(d3, d1)),
        GreatCircle.from_normal(np.cross(d1, d2)),
    )


def _cyclic_labeling(normal: np.ndarray, dirs, eps: float = 1e-12):
    """Orientation and representatives giving the order p1, p2, p3, -p1, -p2, -p3.

    ``dirs`` are three unit vectors on the circle, each standing for an
    antipodal pair. p1 is fixed to its canonical-sign representative.
    """
    p1 = canonical_sign(dirs[0])
    for w in (normal, -normal):
        e2 = np.cross(w, p1)
        reps, ts = [], []
        for x in dirs[1:]:
            t = math.atan2(float(x @ e2), float(x @ p1))
            rep = x if t >= 0 else -x
            ts.append(t % math.pi)
            reps.append(rep)
        t2, t3 = ts
        if min(t2, t3) > eps and t3 - t2 > eps and math.pi - t3 > eps:
            return w, p1, reps[0], reps[1]
    raise OrderUnachievable("intersection points coincide; cyclic order is undefined")


def _scene(lines: LineTriple, cutting_normal: np.ndarray, dirs) -> SphericalScene:
    circles = circles_from_lines(lines)
    w, p1, p2, p3 = _cyclic_labeling(cutting_normal, dirs)
    arcs = (arc_along(p1, p2, w), arc_along(p2, p3, w), arc_along(p3, -p1, w))
    return SphericalScene(circles, GreatCircle.from_normal(cutting_normal), w, p1, p2, p3, arcs)


def scene_from_solution(solution: Solution, lines: LineTriple) -> SphericalScene:
    A, B, C = (np.asarray(p, dtype=float) for p in (solution.A, solution.B, solution.C))
    n = np.cross(B - A, C - A)
    size = max(np.linalg.norm(B - A), np.linalg.norm(C - B), np.linalg.norm(A - C))
    if size == 0.0 or np.linalg.norm(n) <= 1e-12 * size * size:
        raise DegenerateSolution("triangle has zero area")
    dirs = [unit(C - B), unit(A - C), unit(B - A)]
    return _scene(lines, unit(n), dirs)


def verify_question1(
    scene: SphericalScene, shape: TriangleShape, tol_ang: float = TOL_ANG
) -> Question1Report:
    targets = (shape.angC, shape.angA, shape.angB)
    dev = tuple(abs(a - t) for a, t in zip(scene.arcs, targets))
    sum_err = abs(math.fsum(scene.arcs) - math.pi)
    return Question1Report(max(dev) <= tol_ang and sum_err <= 1e-10, dev, sum_err)


# ------------------------------------------------------------------ oracle


def sphere_grid(n: int) -> np.ndarray:
    """Golden-angle spiral of n nearly uniform unit vectors."""
    i = np.arange(n) + 0.5
    z = 1.0 - 2.0 * i / n
    rho = np.sqrt(1.0 - z * z)
    phi = math.pi * (3.0 - math.sqrt(5.0)) * i
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def _arcs_for_normals(N: np.ndarray, circles) -> np.ndarray:
    """Arcs (p1->p2, p2->p3, p3->-p1) for each row of N; NaN where undefined."""
    xs = []
    for c in circles:
        x = np.cross(N, c.normal)
        norm = np.linalg.norm(x, axis=1, keepdims=True)
        with np.errstate(invalid="ignore", divide="ignore"):
            xs.append(np.where(norm > 1e-12, x / norm, np.nan))
    e1 = xs[0]
    e2 = np.cross(N, e1)
    t2 = np.mod(np.arctan2(np.sum(xs[1] * e2, 1), np.sum(xs[1] * e1, 1)), math.pi)
    t3 = np.mod(np.arctan2(np.sum(xs[2] * e2, 1), np.sum(xs[2] * e1, 1)), math.pi)
    forward = t2 < t3
    arcs = np.where(
        forward[:, None],
        np.column_stack([t2, t3 - t2, math.pi - t3]),
        np.column_stack([math.pi - t2, t2 - t3, t3]),
    )
    return arcs


def _cross(a, b):
    return (a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0])


def _dot(a, b) -> float:
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _arcs_one(n, circle_normals):
    """Scalar twin of :func:`_arcs_for_normals` for the refinement loop."""
    xs = []
    for c in circle_normals:
        x = _cross(n, c)
        norm = math.sqrt(_dot(x, x))
        if norm <= 1e-12:
            return None
        xs.append((x[0] / norm, x[1] / norm, x[2] / norm))
    e1 = xs[0]
    e2 = _cross(n, e1)
    t2 = math.atan2(_dot(xs[1], e2), _dot(xs[1], e1)) % math.pi
    t3 = math.atan2(_dot(xs[2], e2), _dot(xs[2], e1)) % math.pi
    if t2 < t3:
        return (t2, t3 - t2, math.pi - t3)
    return (math.pi - t2, t2 - t3, t3)


def _tangent_basis(n: np.ndarray):
    helper = np.array([1.0, 0.0, 0.0]) if abs(n[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    t1 = unit(np.cross(n, helper))
    return t1, np.cross(n, t1)


def _refine(n0: np.ndarray, circles, targets, step: float):
    t1, t2 = _tangent_basis(n0)
    normals = [tuple(float(v) for v in c.normal) for c in circles]
    n0, t1, t2 = (tuple(float(v) for v in w) for w in (n0, t1, t2))

    def normal_at(u, v):
        w = tuple(n0[i] + u * t1[i] + v * t2[i] for i in range(3))
        norm = math.sqrt(_dot(w, w))
        return tuple(x / norm for x in w)

    def resid(u, v):
        arcs = _arcs_one(normal_at(u, v), normals)
        if arcs is None:
            return (10.0, 10.0, 10.0)
        return tuple(a - t for a, t in zip(arcs, targets))

    def ssq(u, v):
        return sum(r * r for r in resid(u, v))

    dirs = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, 1), (1, -1), (-1, 1), (-1, -1))
    u = v = 0.0
    best = ssq(u, v)
    for _ in range(3):
        for _ in range(100):
            val, du, dv = min((ssq(u + step * du, v + step * dv), du, dv) for du, dv in dirs)
            if val >= best:
                break
            u, v, best = u + step * du, v + step * dv, val
        step *= 0.1

    # Compass passes stop near 1e-3 resolution; Levenberg-Marquardt on the two
    # independent arc residuals (the third follows from the sum) finishes.
    polished = least_squares(
        lambda x: resid(x[0], x[1])[:2], [u, v], method="lm", xtol=1e-15, ftol=1e-15, gtol=1e-15
    )
    if ssq(*polished.x) < best:
        u, v = (float(x) for x in polished.x)
    n = normal_at(u, v)
    arcs = _arcs_one(n, normals) or (math.nan,) * 3
    dev = max(abs(a - t) for a, t in zip(arcs, targets))
    return np.array(n), (dev if math.isfinite(dev) else math.inf), arcs


def oracle_search(
    shape: TriangleShape, lines: LineTriple, n_grid: int = 2000, n_candidates: int = 16
) -> OracleResult:
    """Brute-force search for a cutting circle, independent of the solid solver."""
    if n_grid < 1000:
        raise ValueError("n_grid must be at least 1000")
    circles = circles_from_lines(lines)
    targets = (shape.angC, shape.angA, shape.angB)
    N = sphere_grid(n_grid)
    arcs = _arcs_for_normals(N, circles)
    score = np.max(np.abs(arcs - np.array(targets)), axis=1)
    score = np.where(np.isfinite(score), score, np.inf)
    spacing = math.sqrt(4 * math.pi / n_grid)

    picked: list[int] = []
    for idx in np.argsort(score, kind="stable"):
        if not np.isfinite(score[idx]):
            break
        if all(abs(float(N[idx] @ N[j])) < math.cos(2 * spacing) for j in picked):
            picked.append(int(idx))
        if len(picked) == n_candidates:
            break

    best: OracleResult | None = None
    for idx in picked:
        n, dev, a = _refine(N[idx], circles, targets, spacing)
        if best is None or dev < best.deviation:
            best = OracleResult(canonical_sign(n), dev, a, idx)
        if best.deviation <= 1e-13:
            break
    if best is None:
        raise NotFound("no grid normal produced a defined set of intersections")
    return best


# ---------------------------------------------------------- elliptic plane


def elliptic_construct(
    P1: EllipticPoint,
    P2: EllipticPoint,
    P3: EllipticPoint,
    config: LineConfig,
    scan_n: int = 720,
) -> tuple[EllipticPoint, EllipticPoint, EllipticPoint]:
    """Triangle Q1 Q2 Q3 whose sidelines pass through collinear P1, P2, P3.

    Q2Q3 passes through P1, Q3Q1 through P2 and Q1Q2 through P3, with side
    lengths min(alpha, pi - alpha), min(beta, pi - beta), min(gamma, pi - gamma).
    """
    P = [EllipticPoint.from_vector(p.rep).rep for p in (P1, P2, P3)]
    if abs(float(np.linalg.det(np.vstack(P)))) > 1e-10:
        raise PreconditionFailed("P1, P2, P3 are not collinear")
    d23, d31, d12 = elliptic_distance(P[1], P[2]), elliptic_distance(P[2], P[0]), elliptic_distance(P[0], P[1])
    if max(d23, d31, d12) > math.pi / 2 + 1e-12:
        raise PreconditionFailed("a pairwise distance exceeds pi/2")
    if abs(d23 + d31 + d12 - math.pi) > 1e-9:
        raise PreconditionFailed(f"distances sum to {d23 + d31 + d12!r}, not pi")
    try:
        shape = validate_shape(d23, d31, math.pi - d23 - d31)
    except ShapeInvalid as exc:
        raise PreconditionFailed(str(exc)) from exc

    lines = build_canonical_lines(config)
    solutions = solve(SolveRequest(shape, config, scan_n=scan_n))
    if not solutions:
        raise NotFound("no solid solution for the derived shape")
    sol = solutions[0]
    scene = scene_from_solution(sol, lines)

    p1, p2, p3 = scene.p1, scene.p2, scene.p3
    e2 = unit(p2 - (p2 @ p1) * p1)
    E = np.column_stack([p1, e2, np.cross(p1, e2)])
    for s2 in (1.0, -1.0):
        f2 = unit(s2 * P[1] - (s2 * P[1] @ P[0]) * P[0])
        R = np.column_stack([P[0], f2, np.cross(P[0], f2)]) @ E.T
        if all(np.linalg.norm(np.cross(R @ p, q)) <= 1e-9 for p, q in ((p2, P[1]), (p3, P[2]))):
            break
    else:
        raise AlignmentFailed("no rotation carries the construction onto P1, P2, P3")

    return tuple(EllipticPoint.from_vector(R @ unit(v)) for v in (sol.A, sol.B, sol.C))
