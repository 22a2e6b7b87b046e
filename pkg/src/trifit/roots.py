"""Root finding for continuous 2*pi-periodic scalar functions.

The function is sampled on a uniform grid; sign changes between neighbours
are refined with Brent's method. Grid points that are local extrema of the
same sign as both neighbours are probed with a bounded 1-D minimization, so
pairs of roots closer together than the grid spacing are not lost.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import NumericalFailure

TWO_PI = 2.0 * math.pi


def _refine(f, lo: float, hi: float, xtol: float) -> float:
    try:
        return brentq(f, lo, hi, xtol=xtol, rtol=4 * np.finfo(float).eps, maxiter=200)
    except (RuntimeError, ValueError) as exc:
        raise NumericalFailure(f"root refinement diverged: {exc}", bracket=(lo, hi)) from exc


def periodic_roots(
    f: Callable,
    n: int,
    *,
    touch_tol: float,
    xtol: float = 1e-15,
) -> list[tuple[float, bool]]:
    """Roots of ``f`` on [0, 2*pi).

    ``f`` must accept both floats and float arrays. Returns ``(theta, crossing)``
    pairs sorted by theta; ``crossing`` is False for touching (even-order)
    roots found only by extremum probing, where ``|f| <= touch_tol``.
    """
    h = TWO_PI / n
    thetas = np.arange(n) * h
    vals = np.asarray(f(thetas), dtype=float)
    f_scalar = lambda t: float(f(t))  # noqa: E731

    found: list[tuple[float, bool]] = []
    for i in range(n):
        v0, v1 = vals[i], vals[(i + 1) % n]
        t0 = thetas[i]
        if v0 == 0.0:
            found.append((t0, True))
        elif v0 * v1 < 0.0:
            found.append((_refine(f_scalar, t0, t0 + h, xtol), True))

    for i in range(n):
        vp, v, vn = vals[i - 1], vals[i], vals[(i + 1) % n]
        if v == 0.0 or vp * v <= 0.0 or vn * v <= 0.0:
            continue
        sgn = 1.0 if v > 0 else -1.0
        if not (sgn * v <= sgn * vp and sgn * v <= sgn * vn):
            continue
        lo, hi = thetas[i] - h, thetas[i] + h
        res = minimize_scalar(
            lambda t: sgn * f_scalar(t),
            bounds=(lo, hi),
            method="bounded",
            options={"xatol": 1e-15, "maxiter": 500},
        )
        tm = float(res.x)
        fm = f_scalar(tm)
        if sgn * fm < 0.0:
            found.append((_refine(f_scalar, lo, tm, xtol), True))
            found.append((_refine(f_scalar, tm, hi, xtol), True))
        elif abs(fm) <= touch_tol:
            found.append((tm, False))

    out: list[tuple[float, bool]] = []
    for t, crossing in sorted(((t % TWO_PI, c) for t, c in found), key=lambda p: p[0]):
        if out and abs(t - out[-1][0]) < 1e-13:
            continue
        out.append((t, crossing))
    if len(out) > 1 and TWO_PI - out[-1][0] + out[0][0] < 1e-13:
        out.pop()
    return out
