"""Acceptance gate: each test checks one criterion at its stated tolerance.

One PASS/FAIL line per criterion is printed in the terminal summary.
"""

import math
import subprocess
import sys

import numpy as np
import pytest

from trifit.errors import DegenerateConfig
from trifit.geom import build_canonical_lines, interior_angles, validate_config, validate_shape
from trifit.solver import SolveRequest, solve
from trifit.spherical import (
    EllipticPoint,
    elliptic_construct,
    elliptic_distance,
    oracle_search,
    scene_from_solution,
    verify_question1,
)
from trifit.sullivan import (
    circle_oab,
    fit_conic,
    pose_at,
    predicate_i_solvable_z,
    predicate_ii,
    predicate_iii,
    predicate_iv,
    spatial_point,
    trace_point,
)

from helpers import random_acute_shape, random_config, random_frame, random_obtuse_shape, random_rotation

PI = math.pi
ORTHO = validate_config(PI / 2, PI / 2, PI / 2)
EQ = validate_shape(PI / 3, PI / 3, PI / 3)


@pytest.fixture(scope="module")
def acute_instances():
    rng = np.random.default_rng(20261016)
    out = []
    for _ in range(1000):
        shape, cfg = random_acute_shape(rng), random_config(rng)
        req = SolveRequest(shape, cfg)
        out.append((req, build_canonical_lines(cfg), solve(req)))
    return out


def test_ac1_existence(acute_instances, record):
    empty, worst_res, worst_ang = 0, 0.0, 0.0
    for req, lines, sols in acute_instances:
        empty += not sols
        for s in sols:
            worst_res = max(worst_res, max(np.linalg.norm(np.cross(p, d)) for p, d in zip((s.A, s.B, s.C), lines.rays)))
            got = interior_angles(s.A, s.B, s.C)
            worst_ang = max(worst_ang, max(abs(g - w) for g, w in zip(got, req.shape.as_tuple())))
    ok = empty == 0 and worst_res < 1e-9 and worst_ang < 1e-7
    record("AC1 existence", ok, f"empty={empty}/1000 max_residual={worst_res:.2e} max_angle_err={worst_ang:.2e}")
    assert ok


def test_ac2_question1_equivalence(acute_instances, record):
    failures, worst_dev, worst_sum, n = 0, 0.0, 0.0, 0
    for req, lines, sols in acute_instances:
        for s in sols:
            rep = verify_question1(scene_from_solution(s, lines), req.shape)
            n += 1
            failures += not (rep.passed and max(rep.deviations) < 1e-7 and rep.arc_sum_error <= 1e-10)
            worst_dev = max(worst_dev, max(rep.deviations))
            worst_sum = max(worst_sum, rep.arc_sum_error)
    ok = failures == 0 and n > 0
    record("AC2 spherical equivalence", ok, f"scenes={n} failures={failures} max_dev={worst_dev:.2e} max_sum_err={worst_sum:.2e}")
    assert ok


def test_ac3_predicates(record):
    rng = np.random.default_rng(3)
    frames = [random_frame(rng) for _ in range(10_000)]
    iii_iv = iii_not_ii = flips = z_mismatch = 0
    for i, f in enumerate(frames):
        p2, p3, p4 = predicate_ii(f), predicate_iii(f), predicate_iv(f)
        iii_iv += p3 != p4
        iii_not_ii += p3 and not p2
        flips += any(predicate_ii(f, t) != p2 for t in rng.uniform(0, 2 * PI, 100))
        if i < 1000:
            z_mismatch += (predicate_i_solvable_z(f) is not None) != p2
    ok = iii_iv == 0 and iii_not_ii == 0 and flips == 0 and z_mismatch == 0
    record("AC3 predicate suite", ok,
           f"iii!=iv={iii_iv} iii&!ii={iii_not_ii} theta_flips={flips} z_witness_vs_ii={z_mismatch}")
    assert ok


def test_ac4_construction_identities(record):
    rng = np.random.default_rng(4)
    side_err = line_err = rad_err = circ_err = 0.0
    grid = np.linspace(0, 2 * PI, 20, endpoint=False)
    for _ in range(100):
        f = random_frame(rng)
        d2 = np.array([math.cos(f.gamma), math.sin(f.gamma), 0.0])
        for t in grid:
            p = pose_at(f, t)
            line_err = max(line_err, abs(p.A[1]) / f.scale, np.linalg.norm(np.cross(p.B, d2)) / f.scale)
            circ = circle_oab(f, t)
            rad_err = max(rad_err, abs(circ.radius - f.c / (2 * math.sin(f.gamma))) / circ.radius)
            for q in (np.zeros(3), p.A, p.B):
                circ_err = max(circ_err, abs(circ.implicit(q)) / f.scale**2)
            for s in grid - PI:
                C = spatial_point(f, t, s).Cbreve
                got = (np.linalg.norm(C - p.B), np.linalg.norm(p.A - C), np.linalg.norm(p.B - p.A))
                side_err = max(side_err, *(abs(g - w) / w for g, w in zip(got, (f.a, f.b, f.c))))
    ok = side_err <= 1e-12 and line_err <= 1e-12 and rad_err <= 1e-14 and circ_err <= 1e-12
    record("AC4 construction identities", ok,
           f"side_rel={side_err:.1e} on_line={line_err:.1e} radius_rel={rad_err:.1e} circle_eq={circ_err:.1e}")
    assert ok


def test_ac5_inscribed_angle(record):
    rng = np.random.default_rng(5)
    worst = 0.0
    for _ in range(100):
        f = random_frame(rng)
        t = rng.uniform(0, 2 * PI)
        p, circ = pose_at(f, t), circle_oab(f, t)
        for phi in rng.uniform(0, 2 * PI, 100):
            P = circ.center + circ.radius * np.array([math.cos(phi), math.sin(phi), 0.0])
            if min(np.linalg.norm(P - p.A), np.linalg.norm(P - p.B)) < 1e-6 * f.scale:
                continue
            ang = interior_angles(P, p.A, p.B)[0]
            worst = max(worst, min(abs(ang - f.gamma), abs(ang - (PI - f.gamma))))
    ok = worst <= 1e-9
    record("AC5 inscribed angle", ok, f"max_err={worst:.2e}")
    assert ok


def test_ac6_schooten_ellipse(record):
    rng = np.random.default_rng(6)
    thetas = np.linspace(0, 2 * PI, 256, endpoint=False)
    not_ellipse, worst = 0, 0.0
    for _ in range(20):
        f = random_frame(rng)
        for s in rng.uniform(0, 1, 3):
            coef, res = fit_conic(trace_point(f, s, thetas))
            not_ellipse += not (coef[1] ** 2 - 4 * coef[0] * coef[2] < 0)
            worst = max(worst, res / f.scale**2)
    ok = not_ellipse == 0 and worst < 1e-9
    record("AC6 trammel ellipse", ok, f"non_ellipse={not_ellipse}/60 max_residual={worst:.2e}")
    assert ok


def test_ac7_worked_instance(record):
    sols = solve(SolveRequest(EQ, ORTHO, scale=1.0))
    target_c = np.array([0.0, 0.0, 0.70711])
    hit = [s for s in sols if abs(s.theta - PI / 4) <= 1e-6 and abs(s.psi - 0.95532) <= 1e-5
           and np.max(np.abs(s.C - target_c)) <= 1e-5]
    best = min((abs(s.theta - PI / 4) + abs(s.psi - 0.9553166181245093)
                + np.max(np.abs(s.C - np.array([0, 0, math.sqrt(0.5)])))) for s in sols)
    ok = bool(hit) and best <= 1e-6
    record("AC7 worked instance", ok, f"solutions={len(sols)} closed_form_gap={best:.1e}")
    assert ok


def test_ac8_orthogonal_obtuse_empty(record):
    rng = np.random.default_rng(8)
    nonempty = 0
    for _ in range(100):
        nonempty += bool(solve(SolveRequest(random_obtuse_shape(rng), ORTHO, scan_n=2880)))
    ok = nonempty == 0
    record("AC8 orthogonal obtuse", ok, f"nonempty={nonempty}/100")
    assert ok


def test_ac9_oracle_agreement(record):
    rng = np.random.default_rng(9)
    bad_dev = bad_normal = 0
    worst_dev = worst_ang = 0.0
    for _ in range(50):
        shape, cfg = random_acute_shape(rng), random_config(rng)
        lines = build_canonical_lines(cfg)
        res = oracle_search(shape, lines)
        worst_dev = max(worst_dev, res.deviation)
        bad_dev += not res.deviation < 1e-6
        normals = [scene_from_solution(s, lines).cutting.normal for s in solve(SolveRequest(shape, cfg))]
        gap = min((math.acos(min(1.0, abs(float(res.normal @ n)))) for n in normals), default=math.inf)
        worst_ang = max(worst_ang, gap)
        bad_normal += not gap <= 1e-4
    ok = bad_dev == 0 and bad_normal == 0
    record("AC9 oracle agreement", ok,
           f"dev_fail={bad_dev} normal_fail={bad_normal} max_dev={worst_dev:.1e} max_normal_gap={worst_ang:.1e}")
    assert ok


def _collinear_triple(rng):
    """Three points on a random great circle, pairwise within pi/2, distances summing to pi."""
    while True:
        t1 = rng.uniform(0.05, PI / 2)
        lo, hi = max(PI / 2, t1 + 0.05), min(t1 + PI / 2, PI - 0.05)
        if lo < hi:
            break
    R = random_rotation(rng)
    pts = [R @ np.array([math.cos(t), math.sin(t), 0.0]) for t in (0.0, t1, rng.uniform(lo, hi))]
    return [EllipticPoint.from_vector(pts[i]) for i in rng.permutation(3)]


def test_ac10_elliptic_construct(record):
    rng = np.random.default_rng(10)
    worst_inc = worst_dist = 0.0
    done = 0
    while done < 100:
        P = _collinear_triple(rng)
        cfg = random_config(rng)
        try:
            build_canonical_lines(cfg)
        except DegenerateConfig:
            continue
        Q = elliptic_construct(*P, cfg)
        p, q = [x.rep for x in P], [x.rep for x in Q]
        for pi, qa, qb in ((p[0], q[1], q[2]), (p[1], q[2], q[0]), (p[2], q[0], q[1])):
            worst_inc = max(worst_inc, abs(float(np.linalg.det(np.vstack([pi, qa, qb])))))
        got = (elliptic_distance(q[1], q[2]), elliptic_distance(q[2], q[0]), elliptic_distance(q[0], q[1]))
        want = [min(t, PI - t) for t in cfg.as_tuple()]
        worst_dist = max(worst_dist, *(abs(g - w) for g, w in zip(got, want)))
        done += 1
    ok = worst_inc <= 1e-9 and worst_dist <= 1e-7
    record("AC10 elliptic construction", ok, f"max_incidence={worst_inc:.1e} max_distance_err={worst_dist:.1e}")
    assert ok


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "trifit", *args], capture_output=True)


def test_ac11_cli_round_trip(tmp_path, record):
    problem = ["--angles", "1.0472,1.0472,1.0472", "--sides", "1.5708,1.5708,1.5708"]
    sol = tmp_path / "sol.json"
    first = _cli("solve", *problem, "--out", str(sol))
    text = sol.read_bytes()
    again = _cli("solve", *problem)
    ver = [_cli("verify", "--solution", str(sol)) for _ in range(2)]
    sph = [_cli("spherical", "--solution", str(sol)) for _ in range(2)]
    checks = {
        "solve_exit0": first.returncode == 0,
        "solve_identical": again.stdout == text,
        "verify_pass": all(r.returncode == 0 for r in ver),
        "verify_identical": ver[0].stdout == ver[1].stdout,
        "spherical_pass": all(r.returncode == 0 for r in sph),
        "spherical_identical": sph[0].stdout == sph[1].stdout,
    }
    ok = all(checks.values())
    record("AC11 CLI round trip", ok, " ".join(f"{k}={int(v)}" for k, v in checks.items()))
    assert ok
