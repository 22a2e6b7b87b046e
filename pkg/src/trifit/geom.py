"""Value types and primitives: triangle shapes, line configurations, lines
through the origin and the canonical placement of a line triple.

Vectors are plain ``numpy`` arrays of shape ``(3,)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConfigInvalid,
    DegenerateConfig,
    DegenerateTriangle,
    ShapeInvalid,
    ZeroVector,
)

# Tolerances. Positional ones are multiplied by the problem scale.
EPS_SHAPE = 1e-12
EPS_DIR = 1e-12
TOL_POS = 1e-9
TOL_ANG = 1e-7
EPS_Z3_SQ = 1e-14
EPS_AREA = 1e-12


def vec3(x, y=None, z=None) -> np.ndarray:
    """Build a finite float vector from three numbers or one 3-sequence."""
    if y is None and z is None:
        v = np.asarray(x, dtype=float).reshape(3)
    else:
        v = np.array([x, y, z], dtype=float)
    if not np.all(np.isfinite(v)):
        raise ValueError(f"non-finite vector {v!r}")
    return v


def unit(v: np.ndarray) -> np.ndarray:
    n = float(np.linalg.norm(v))
    if n == 0.0 or not math.isfinite(n):
        raise ZeroVector("cannot normalize a zero vector")
    return np.asarray(v, dtype=float) / n


def canonical_sign(v: np.ndarray) -> np.ndarray:
    """Flip ``v`` so that its first nonzero component is positive."""
    for comp in v:
        if comp > 0:
            return np.array(v, dtype=float)
        if comp < 0:
            return -np.array(v, dtype=float)
    raise ZeroVector("zero vector has no canonical sign")


@dataclass(frozen=True)
class TriangleShape:
    angA: float
    angB: float
    angC: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.angA, self.angB, self.angC)

    @property
    def is_acute_or_right(self) -> bool:
        return max(self.as_tuple()) <= math.pi / 2


@dataclass(frozen=True)
class LineConfig:
    alpha: float
    beta: float
    gamma: float

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.alpha, self.beta, self.gamma)


@dataclass(frozen=True, eq=False)
class LineThroughOrigin:
    """A line through the origin stored as a canonical-sign unit vector."""

    dir: np.ndarray

    @classmethod
    def from_vector(cls, v) -> "LineThroughOrigin":
        return cls(canonical_sign(unit(vec3(v))))

    def distance(self, p: np.ndarray) -> float:
        return distance_to_line(p, self.dir)

    def contains(self, p: np.ndarray, tol: float = TOL_POS) -> bool:
        return self.distance(p) <= tol * max(1.0, float(np.linalg.norm(p)))

    def __eq__(self, other):
        if not isinstance(other, LineThroughOrigin):
            return NotImplemented
        return bool(np.array_equal(self.dir, other.dir))

    def __hash__(self):
        return hash(tuple(self.dir))


@dataclass(frozen=True, eq=False)
class LineTriple:
    """Three lines through the origin realizing a :class:`LineConfig`.

    ``rays`` keeps the oriented directions as constructed; the angle between
    ``rays[1]`` and ``rays[2]`` is exactly alpha (and so on), which is what the
    ray variant of the fitting problem needs. ``l1, l2, l3`` are the
    sign-free line views.
    """

    rays: tuple[np.ndarray, np.ndarray, np.ndarray]
    config: LineConfig

    @property
    def l1(self) -> LineThroughOrigin:
        return LineThroughOrigin.from_vector(self.rays[0])

    @property
    def l2(self) -> LineThroughOrigin:
        return LineThroughOrigin.from_vector(self.rays[1])

    @property
    def l3(self) -> LineThroughOrigin:
        return LineThroughOrigin.from_vector(self.rays[2])

    @property
    def lines(self) -> tuple[LineThroughOrigin, LineThroughOrigin, LineThroughOrigin]:
        return (self.l1, self.l2, self.l3)

    def gram_det(self) -> float:
        return float(np.linalg.det(np.vstack(self.rays)))


def validate_shape(angA: float, angB: float, angC: float) -> TriangleShape:
    angles = (float(angA), float(angB), float(angC))
    if not all(math.isfinite(t) for t in angles):
        raise ShapeInvalid(f"non-finite angle in {angles}")
    for name, t in zip(("angA", "angB", "angC"), angles):
        if not 0.0 < t < math.pi:
            raise ShapeInvalid(f"{name}={t!r} is not in (0, pi)")
    total = math.fsum(angles)
    if abs(total - math.pi) > EPS_SHAPE:
        raise ShapeInvalid(f"angles sum to {total!r}, not pi")
    return TriangleShape(*angles)


def validate_config(alpha: float, beta: float, gamma: float) -> LineConfig:
    al, be, ga = float(alpha), float(beta), float(gamma)
    if not all(math.isfinite(t) for t in (al, be, ga)):
        raise ConfigInvalid("non-finite angle", "finite")
    for name, t in (("alpha", al), ("beta", be), ("gamma", ga)):
        if not t > 0.0:
            raise ConfigInvalid(f"{name}={t!r} must be positive", f"{name} > 0")
    checks = (
        (al + be + ga < 2 * math.pi, "alpha + beta + gamma < 2*pi"),
        (al < be + ga, "alpha < beta + gamma"),
        (be < ga + al, "beta < gamma + alpha"),
        (ga < al + be, "gamma < alpha + beta"),
    )
    for ok, which in checks:
        if not ok:
            raise ConfigInvalid(f"config ({al}, {be}, {ga}) fails {which}", which)
    # Implied by the inequalities above; kept to guard rounding at the edges.
    for name, t in (("alpha", al), ("beta", be), ("gamma", ga)):
        if not t < math.pi:
            raise ConfigInvalid(f"{name}={t!r} must be below pi", f"{name} < pi")
    return LineConfig(al, be, ga)


def build_canonical_lines(config: LineConfig) -> LineTriple:
    """Place l1 on the x-axis, l2 in the xy-plane at angle gamma and l3 above it."""
    al, be, ga = config.as_tuple()
    d1 = np.array([1.0, 0.0, 0.0])
    d2 = np.array([math.cos(ga), math.sin(ga), 0.0])
    y3 = (math.cos(al) - math.cos(be) * math.cos(ga)) / math.sin(ga)
    z3_sq = 1.0 - math.cos(be) ** 2 - y3 * y3
    if z3_sq <= EPS_Z3_SQ:
        raise DegenerateConfig(
            f"config {config.as_tuple()} is numerically coplanar (z3^2={z3_sq:.3e})"
        )
    d3 = np.array([math.cos(be), y3, math.sqrt(z3_sq)])
    return LineTriple((d1, d2, d3), config)


def angle_between_directions(u, v) -> float:
    """Angle in [0, pi] between two nonzero vectors, via atan2(|u x v|, u.v)."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if not np.any(u) or not np.any(v):
        raise ZeroVector("angle undefined for a zero vector")
    return math.atan2(float(np.linalg.norm(np.cross(u, v))), float(np.dot(u, v)))


def line_angle(u, v) -> float:
    """Angle between the lines spanned by u and v, in [0, pi/2]."""
    t = angle_between_directions(u, v)
    return min(t, math.pi - t)


def distance_to_line(p, d) -> float:
    """Distance from p to the line through the origin with unit direction d."""
    p = np.asarray(p, dtype=float)
    return float(np.linalg.norm(p - np.dot(p, d) * d))


def interior_angles(A, B, C) -> tuple[float, float, float]:
    A, B, C = (np.asarray(p, dtype=float) for p in (A, B, C))
    ab, bc, ca = B - A, C - B, A - C
    scale = max(np.linalg.norm(ab), np.linalg.norm(bc), np.linalg.norm(ca))
    area2 = float(np.linalg.norm(np.cross(ab, -ca)))
    if scale == 0.0 or area2 <= EPS_AREA * scale * scale:
        raise DegenerateTriangle("triangle is degenerate (collinear or repeated points)")
    return (
        angle_between_directions(ab, -ca),
        angle_between_directions(-ab, bc),
        angle_between_directions(-bc, ca),
    )
