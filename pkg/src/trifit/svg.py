"""SVG drawing of the planar construction at a given theta."""

from __future__ import annotations

import math

from .sullivan import SullivanFrame, circle_oab, pose_at


def _f(x: float) -> str:
    return format(float(x), ".17g")


def construction_svg(frame: SullivanFrame, theta: float) -> str:
    """Circle OAB, segments AB and C'C'', the lines l1, l2 and the named points.

    The y-axis is flipped so the drawing has the usual mathematical
    orientation; coordinates are written at full precision.
    """
    pose = pose_at(frame, theta)
    circle = circle_oab(frame, theta)
    points = {
        "O": (0.0, 0.0),
        "A": tuple(pose.A[:2]),
        "B": tuple(pose.B[:2]),
        "Cp": tuple(pose.Cp[:2]),
        "Cpp": tuple(pose.Cpp[:2]),
        "F": tuple(pose.F[:2]),
    }
    labels = {"Cp": "C′", "Cpp": "C″"}

    cx, cy, rad = circle.center[0], circle.center[1], circle.radius
    xs = [p[0] for p in points.values()] + [cx - rad, cx + rad]
    ys = [p[1] for p in points.values()] + [cy - rad, cy + rad]
    pad = 0.1 * max(max(xs) - min(xs), max(ys) - min(ys))
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    width, height = x1 - x0, y1 - y0
    stroke = width / 400
    dot = width / 150
    reach = 2 * max(width, height)

    def line(elem_id, p, q, extra=""):
        return (
            f'  <line id="{elem_id}" x1="{_f(p[0])}" y1="{_f(-p[1])}" '
            f'x2="{_f(q[0])}" y2="{_f(-q[1])}" stroke-width="{_f(stroke)}"{extra}/>'
        )

    g = frame.gamma
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_f(x0)} {_f(-y1)} {_f(width)} {_f(height)}" '
        'width="640" height="{}">'.format(max(1, round(640 * height / width))),
        f"  <title>construction at theta={_f(theta)}</title>",
        '  <g fill="none" stroke="black">',
        line("line-l1", (-reach, 0.0), (reach, 0.0), ' stroke="gray" stroke-dasharray="4 4"'),
        line(
            "line-l2",
            (-reach * math.cos(g), -reach * math.sin(g)),
            (reach * math.cos(g), reach * math.sin(g)),
            ' stroke="gray" stroke-dasharray="4 4"',
        ),
        f'  <circle id="circle-OAB" cx="{_f(cx)}" cy="{_f(-cy)}" r="{_f(rad)}" '
        f'stroke="blue" stroke-width="{_f(stroke)}"/>',
        line("segment-AB", points["A"], points["B"]),
        line("segment-CpCpp", points["Cp"], points["Cpp"], ' stroke="red"'),
        "  </g>",
        '  <g fill="black">',
    ]
    for name, (x, y) in points.items():
        out.append(f'  <circle id="point-{name}" cx="{_f(x)}" cy="{_f(-y)}" r="{_f(dot)}"/>')
        out.append(
            f'  <text x="{_f(x + dot)}" y="{_f(-y - dot)}" font-size="{_f(4 * dot)}">'
            f"{labels.get(name, name)}</text>"
        )
    out += ["  </g>", "</svg>", ""]
    return "\n".join(out)
