"""Sullivan's planar construction and its extension to three dimensions.

A triangle with the prescribed angles is placed with vertex A on the x-axis
and vertex B on the line at angle gamma in the xy-plane; theta slides the pair
along the two lines (a skewed trammel of Archimedes). The third vertex is then
swung out of the plane about the line AB by a signed angle psi.

Useful identities, with k = c / sin(gamma) and phi = gamma + theta::

    e  = (cos phi, sin phi, 0)        unit direction A -> B
    u  = (-sin phi, cos phi, 0)       e turned by +90 degrees
    F  = A + b cos(angA) e            foot of the perpendicular from C'
    C' = F + r u,  C'' = F - r u      with r = b sin(angA)
    C(theta, psi) = F + r (cos psi u + sin psi z)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geom import TOL_POS, TriangleShape
from .roots import periodic_roots


@dataclass(frozen=True)
class SullivanFrame:
    shape: TriangleShape
    gamma: float
    a: float
    b: float
    c: float

    @property
    def k(self) -> float:
        """Diameter of the moving circle OAB, c * csc(gamma)."""
        return self.c / math.sin(self.gamma)

    @property
    def r(self) -> float:
        """Radius of the circle swept by C about line AB."""
        return self.b * math.sin(self.shape.angA)

    @property
    def scale(self) -> float:
        return max(self.a, self.b, self.c)


@dataclass(frozen=True, eq=False)
class PlanarPose:
    theta: float
    A: np.ndarray
    B: np.ndarray
    Cp: np.ndarray
    Cpp: np.ndarray
    F: np.ndarray


@dataclass(frozen=True, eq=False)
class SpatialCandidate:
    theta: float
    psi: float
    Cbreve: np.ndarray


@dataclass(frozen=True, eq=False)
class MovingCircle:
    theta: float
    center: np.ndarray
    radius: float
    k: float

    def implicit(self, p) -> float:
        """x^2 + y^2 - k (sin(theta) x + cos(theta) y); negative inside."""
        x, y = float(p[0]), float(p[1])
        return x * x + y * y - self.k * (math.sin(self.theta) * x + math.cos(self.theta) * y)


def derive_sides(shape: TriangleShape, a: float) -> tuple[float, float, float]:
    if not a > 0:
        raise ValueError(f"scale a must be positive, got {a!r}")
    csc_a = 1.0 / math.sin(shape.angA)
    return (a, a * csc_a * math.sin(shape.angB), a * csc_a * math.sin(shape.angC))


def make_frame(shape: TriangleShape, gamma: float, a: float = 1.0) -> SullivanFrame:
    a, b, c = derive_sides(shape, a)
    return SullivanFrame(shape, float(gamma), a, b, c)


def base_triangle(frame: SullivanFrame) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    g, angA, b, c = frame.gamma, frame.shape.angA, frame.b, frame.c
    A0 = np.zeros(3)
    B0 = np.array([c * math.cos(g), c * math.sin(g), 0.0])
    C0 = np.array([b * math.cos(angA + g), b * math.sin(angA + g), 0.0])
    return A0, B0, C0


def pose_at(frame: SullivanFrame, theta: float) -> PlanarPose:
    g, angA, b, c = frame.gamma, frame.shape.angA, frame.b, frame.c
    shift = frame.k * math.sin(theta)
    phi = g + theta
    A = np.array([shift, 0.0, 0.0])
    B = np.array([c * math.cos(phi) + shift, c * math.sin(phi), 0.0])
    Cp = np.array([b * math.cos(angA + phi) + shift, b * math.sin(angA + phi), 0.0])
    Cpp = np.array([b * math.cos(-angA + phi) + shift, b * math.sin(-angA + phi), 0.0])
    F = np.array([b * math.cos(angA) * math.cos(phi) + shift, b * math.cos(angA) * math.sin(phi), 0.0])
    return PlanarPose(float(theta), A, B, Cp, Cpp, F)


def spatial_point(frame: SullivanFrame, theta: float, psi: float) -> SpatialCandidate:
    g, angA, b = frame.gamma, frame.shape.angA, frame.b
    phi = g + theta
    shift = frame.k * math.sin(theta)
    ca, sa = math.cos(angA), math.sin(angA)
    cb = np.array([
        b * ca * math.cos(phi) + shift - b * sa * math.sin(phi) * math.cos(psi),
        b * ca * math.sin(phi) + b * sa * math.cos(phi) * math.cos(psi),
        b * sa * math.sin(psi),
    ])
    return SpatialCandidate(float(theta), float(psi), cb)


def spatial_jacobian(frame: SullivanFrame, theta: float, psi: float) -> np.ndarray:
    """3x2 matrix of partial derivatives of C(theta, psi)."""
    phi = frame.gamma + theta
    e = np.array([math.cos(phi), math.sin(phi), 0.0])
    u = np.array([-math.sin(phi), math.cos(phi), 0.0])
    z = np.array([0.0, 0.0, 1.0])
    r = frame.r
    d_theta = (
        np.array([frame.k * math.cos(theta), 0.0, 0.0])
        + frame.b * math.cos(frame.shape.angA) * u
        - r * math.cos(psi) * e
    )
    d_psi = r * (-math.sin(psi) * u + math.cos(psi) * z)
    return np.column_stack([d_theta, d_psi])


def circle_oab(frame: SullivanFrame, theta: float) -> MovingCircle:
    k = frame.k
    center = np.array([0.5 * k * math.sin(theta), 0.5 * k * math.cos(theta), 0.0])
    return MovingCircle(float(theta), center, 0.5 * k, k)


def rigid_motion(frame: SullivanFrame, theta: float, p) -> np.ndarray:
    """Map a point of the theta = 0 pose to the corresponding point at theta."""
    x, y = float(p[0]), float(p[1])
    ct, st = math.cos(theta), math.sin(theta)
    return np.array([x * ct - y * st + frame.k * st, x * st + y * ct, 0.0])


def inverse_rigid_motion(frame: SullivanFrame, theta: float, p) -> np.ndarray:
    ct, st = math.cos(theta), math.sin(theta)
    x = float(p[0]) - frame.k * st
    y = float(p[1])
    return np.array([x * ct + y * st, -x * st + y * ct, 0.0])


# ---------------------------------------------------------------- predicates


def _segment_meets_circle(circle: MovingCircle, p0, p1) -> bool:
    """Closed test: does segment p0-p1 touch or cross the circle?"""
    x0, y0 = float(p0[0]), float(p0[1])
    dx, dy = float(p1[0]) - x0, float(p1[1]) - y0
    wx, wy = math.sin(circle.theta), math.cos(circle.theta)
    # f(s) = |d|^2 s^2 + (2 p0.d - k w.d) s + f(p0) along p0 + s d
    qa = dx * dx + dy * dy
    qb = 2.0 * (x0 * dx + y0 * dy) - circle.k * (wx * dx + wy * dy)
    f0 = circle.implicit(p0)
    f1 = circle.implicit(p1)
    if max(f0, f1) < 0.0:
        return False
    s_star = min(1.0, max(0.0, -qb / (2.0 * qa))) if qa > 0 else 0.0
    fmin = min(f0, f1, qa * s_star * s_star + qb * s_star + f0)
    return fmin <= 0.0


def _chord_points(frame: SullivanFrame, theta: float):
    """C' and C'' at theta as plain (x, y) pairs."""
    phi = frame.gamma + theta
    shift = frame.k * math.sin(theta)
    angA, b = frame.shape.angA, frame.b
    return (
        (b * math.cos(angA + phi) + shift, b * math.sin(angA + phi)),
        (b * math.cos(phi - angA) + shift, b * math.sin(phi - angA)),
    )


def predicate_ii(frame: SullivanFrame, theta: float = 0.0) -> bool:
    """Segment C'C'' meets the circle OAB.

    Invariant in theta, so callers normally leave theta at 0.
    """
    cp, cpp = _chord_points(frame, theta)
    return _segment_meets_circle(circle_oab(frame, theta), cp, cpp)


def f_inside_circle(frame: SullivanFrame, theta: float = 0.0) -> bool:
    pose = pose_at(frame, theta)
    return circle_oab(frame, theta).implicit(pose.F) <= 0.0


def predicate_iii(frame: SullivanFrame) -> bool:
    g = frame.gamma
    return f_inside_circle(frame) and frame.shape.angC <= max(g, math.pi - g)


def predicate_iv(frame: SullivanFrame) -> bool:
    cg, cc = math.cos(frame.gamma), math.cos(frame.shape.angC)
    return f_inside_circle(frame) and (cg <= cc or cg >= -cc)


# ---------------------------------------------------------- z-axis witnesses


def _origin_offset_along_ab(frame: SullivanFrame, thetas):
    """F . e as a function of theta: zero when the origin is on line C'C''."""
    thetas = np.asarray(thetas, dtype=float)
    phi = frame.gamma + thetas
    return frame.k * np.sin(thetas) * np.cos(phi) + frame.b * math.cos(frame.shape.angA)


def find_z_axis_witnesses(
    frame: SullivanFrame, scan_n: int = 720, tol: float = TOL_POS
) -> list[tuple[float, float]]:
    """All (theta, psi) for which C(theta, psi) lies on the z-axis.

    The origin must lie on segment C'C''; psi then follows from where it sits
    on the segment, with both signs returned.
    """
    scale = frame.scale
    out: list[tuple[float, float]] = []
    for theta, _ in periodic_roots(
        lambda t: _origin_offset_along_ab(frame, t), scan_n, touch_tol=1e-13 * scale
    ):
        phi = frame.gamma + theta
        # origin = F + s u  =>  s = -F.u = k sin(theta) sin(phi)
        s = frame.k * math.sin(theta) * math.sin(phi)
        r = frame.r
        if abs(s) > r + tol * scale:
            continue
        height = math.sqrt(max(r * r - s * s, 0.0))
        psi = math.atan2(height, s)
        out.append((theta, psi))
        if psi != 0.0 and psi != math.pi:
            out.append((theta, -psi))
    return out


def predicate_i_solvable_z(frame: SullivanFrame, scan_n: int = 720):
    """A witness (theta, psi) putting C on the z-axis, or None if there is none."""
    witnesses = find_z_axis_witnesses(frame, scan_n)
    return witnesses[0] if witnesses else None


# --------------------------------------------------------- trammel ellipses


def trace_point(frame: SullivanFrame, s: float, thetas) -> np.ndarray:
    """Path of the point C' + s (C'' - C') as theta runs over ``thetas``."""
    pts = []
    for t in thetas:
        pose = pose_at(frame, t)
        pts.append(pose.Cp[:2] + s * (pose.Cpp[:2] - pose.Cp[:2]))
    return np.array(pts)


def fit_conic(points: np.ndarray) -> tuple[np.ndarray, float]:
    """Least-squares implicit conic through 2-D points.

    Returns unit-norm coefficients (A, B, C, D, E, F) of
    A x^2 + B xy + C y^2 + D x + E y + F = 0 and the largest absolute
    algebraic residual over the points.
    """
    x, y = points[:, 0], points[:, 1]
    design = np.column_stack([x * x, x * y, y * y, x, y, np.ones_like(x)])
    _, _, vt = np.linalg.svd(design)
    coef = vt[-1]
    return coef, float(np.max(np.abs(design @ coef)))
