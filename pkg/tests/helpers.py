"""Random instance generators and independent oracles shared by the tests."""

import math

import numpy as np

from trifit.geom import validate_config, validate_shape
from trifit.sullivan import make_frame

HALF_PI = math.pi / 2


def random_acute_shape(rng, margin=1e-3):
    """Every angle at most pi/2 - margin."""
    hi = HALF_PI - margin
    while True:
        a, b = rng.uniform(0.0, hi, 2)
        c = math.pi - a - b
        if 0.0 < c <= hi and min(a, b) > 0.0:
            return validate_shape(a, b, c)


def random_obtuse_shape(rng, margin=1e-3, min_angle=1e-2):
    while True:
        a, b = rng.uniform(min_angle, math.pi, 2)
        c = math.pi - a - b
        if c > min_angle and max(a, b, c) >= HALF_PI + margin:
            return validate_shape(a, b, c)


def random_shape(rng, min_angle=1e-2):
    while True:
        a, b = rng.uniform(min_angle, math.pi, 2)
        c = math.pi - a - b
        if c > min_angle:
            return validate_shape(a, b, c)


def random_config(rng, margin=1e-2):
    while True:
        al, be, ga = rng.uniform(0.0, math.pi, 3)
        if (
            min(al, be, ga) >= margin
            and al + be + ga <= 2 * math.pi - margin
            and al <= be + ga - margin
            and be <= ga + al - margin
            and ga <= al + be - margin
        ):
            return validate_config(al, be, ga)


def random_frame(rng, shape=None):
    shape = shape or random_shape(rng)
    gamma = rng.uniform(0.1, math.pi - 0.1)
    return make_frame(shape, gamma, rng.uniform(0.5, 2.0))


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def circumcenter_2d(p, q, s):
    """Circumcenter of three planar points by solving the bisector equations."""
    p, q, s = (np.asarray(v[:2], dtype=float) for v in (p, q, s))
    M = 2 * np.array([q - p, s - p])
    rhs = np.array([q @ q - p @ p, s @ s - p @ p])
    return np.linalg.solve(M, rhs)


def count_by_side_lengths(shape, lines, a=1.0, n=40000):
    """Count triangles with vertices on the three lines by direct elimination.

    A = x d1 with B = y d2 at distance c and C = z d3 at distance b from A;
    x = X sin t runs over its admissible range with X taken from the tighter
    of the two reach constraints, so that constraint's square root becomes
    X' cos t and stays smooth. The remaining mismatch |B - C|^2 - a^2 is
    scanned over t for both branches of the looser constraint.
    """
    d1, d2, d3 = lines.rays
    _, b, c = (a, a * math.sin(shape.angB) / math.sin(shape.angA), a * math.sin(shape.angC) / math.sin(shape.angA))
    cos_g, sin_g = float(d1 @ d2), float(np.linalg.norm(np.cross(d1, d2)))
    cos_b, sin_b = float(d1 @ d3), float(np.linalg.norm(np.cross(d1, d3)))
    reach_b2, reach_c3 = c / sin_g, b / sin_b
    swap = reach_c3 < reach_b2
    X = min(reach_b2, reach_c3)

    def mismatch(t, branch):
        x = X * np.sin(t)
        if not swap:
            y = x * cos_g + c * np.cos(t)
            z = x * cos_b + branch * np.sqrt(np.maximum(b * b - (x * sin_b) ** 2, 0.0))
        else:
            z = x * cos_b + b * np.cos(t)
            y = x * cos_g + branch * np.sqrt(np.maximum(c * c - (x * sin_g) ** 2, 0.0))
        diff = np.multiply.outer(y, d2) - np.multiply.outer(z, d3)
        return np.sum(diff * diff, axis=-1) - a * a

    ts = np.linspace(0.0, 2 * math.pi, n + 1)
    count = 0
    for branch in (1.0, -1.0):
        vals = mismatch(ts, branch)
        count += int(np.sum(vals[:-1] == 0.0) + np.sum(vals[:-1] * vals[1:] < 0.0))
    return count
