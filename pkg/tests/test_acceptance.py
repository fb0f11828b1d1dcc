"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py`` (lines appear in the terminal
summary) or directly with ``python3 tests/test_acceptance.py``.
"""

import json
import math
import random
import time
import xml.etree.ElementTree as ET
from fractions import Fraction

import pytest

from lyapcert.algebra import GaussianRational, Poly, X, Y, evaluate, lie_derivative
from lyapcert.certify import PASS, INCONCLUSIVE, recheck_report, verify_polynomial_lyapunov
from lyapcert.cli import main
from lyapcert.lp import simplex_solve, verify_farkas
from lyapcert.nonexist import (INFEASIBLE, SURVIVED, NonexistenceReport, exclude_degree,
                               final_identity_check, recheck_reports,
                               regression_lp)
from lyapcert.simulate import (TrajectoryRecord, level_set, monitor_decrease, paper_w,
                               periodic_orbit_check)
from lyapcert.sturm import count_roots, sturm_chain, trim, ueval, umul
from lyapcert.systems import bacciotti_rosier, linear_system, paper_system

F = Fraction
RESULTS = []


def record(n, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


# 1 --------------------------------------------------------------------------

def test_criterion_1_exact_certificate(tmp_path):
    t0 = time.perf_counter()
    code = main(["verify", "--system", "paper", "--out", str(tmp_path)])
    elapsed = time.perf_counter() - t0
    doc = json.loads((tmp_path / "verify_report.json").read_text())
    checks = {c["name"]: c for c in doc["report"]["checks"]}
    ev = {c: [e for e in checks[c]["evidence"]] for c in checks}
    a, b = paper_system().f0[1], -paper_system().f0[0]
    ok = (
        code == 0
        and all(c["verdict"] == PASS for c in checks.values()) and len(checks) == 5
        and ev["tangency"][0]["poly"] == "0"
        and all(e["poly"] == "0" for e in ev["decrease_identity"])
        and ev["no_common_zero"][0]["kind"] == "positive_definite"
        and ev["no_common_zero"][0]["sturm"]["real_root_count"] == 0
        and Y * a + X * b - 8 * (X * Y) ** 3 == Poly()
        and ev["no_common_zero"][1]["poly"] == "0"
        and ev["radial_unboundedness"][0]["poly"] == str((X**2 - Y**2) ** 2)
        and elapsed < 1.0
    )
    record(1, ok, f"verify paper: 5/5 checks pass, residuals exact, {elapsed:.3f} s (< 1 s)")


# 2 --------------------------------------------------------------------------

def test_criterion_2_nonexistence(tmp_path):
    t0 = time.perf_counter()
    code = main(["nonexist", "--system", "paper", "--kmax", "6", "--cap", "200",
                 "--out", str(tmp_path)])
    doc = json.loads((tmp_path / "nonexist_report.json").read_text())
    reports = [NonexistenceReport.from_dict(r) for r in doc["reports"]]
    rechecked = recheck_reports(paper_system().f0, reports)
    # the fixed five-direction LP
    lp = regression_lp()
    res = simplex_solve(lp)
    co = [r.coeffs for r in lp.rows]
    # 2c1 <= 0, -2c1 <= 0, c2 <= c0, c0 <= c2, and with c1 = 0, c0 = c2 the (2,1) row is c0 <= 0
    reg_ok = (not res.feasible and verify_farkas(lp, res.certificate)
              and co[1] == (0, 2, 0) and co[3] == (0, -2, 0)
              and co[5] == (-8, 0, 8) and co[7] == (8, 0, -8)
              and co[9][0] + co[9][2] > 0 and co[0] == (1, 0, 0)
              and lp.n_inequalities == 10 and lp.n_equalities == 1)
    elapsed = time.perf_counter() - t0
    ok = (code == 0 and [r.degree for r in reports] == [2, 4, 6]
          and all(r.outcome == INFEASIBLE for r in reports)
          and rechecked and reg_ok and elapsed < 60)
    record(2, ok, f"k = 2, 4, 6 infeasible_certified, certificates re-verified, regression LP "
                  f"infeasible; {elapsed:.2f} s (< 60 s)")


# 3 --------------------------------------------------------------------------

def test_criterion_3_complex_point():
    ok = True
    for k0 in (2, 4, 6, 8):
        for c in (F(1), F(3), F(1, 2)):
            for p in ((X**2 + Y**2) ** (k0 // 2), X**k0 + Y**k0, X ** (k0 - 1) * Y + 2 * Y**k0):
                w = final_identity_check(p, c, k0)
                ok &= w.left == 0 and w.right == GaussianRational(c * c * 2**k0) and w.contradiction
    record(3, ok, "left = 0 and right = c^2 2^k0 exactly for k0 in {2,4,6,8}, c in {1,3,1/2}")


# 4 --------------------------------------------------------------------------

def test_criterion_4_control_system(tmp_path):
    f0 = linear_system().f0
    rep = exclude_degree(f0, 2)
    p = rep.candidate
    exact = (rep.outcome == SURVIVED and p == X**2 + Y**2
             and -lie_derivative(p, f0) == 2 * (X**2 + Y**2)
             and recheck_reports(f0, [rep]))
    code = main(["verify", "--system", "linear", "--certificate", "x^2 + y^2",
                 "--out", str(tmp_path)])
    ok = exact and code == 0
    record(4, ok, f"linear field: k = 2 {rep.outcome} with p = {p}; verify accepts x^2+y^2")


# 5 --------------------------------------------------------------------------

def test_criterion_5_gallery():
    lines = []
    ok = True
    for lam, V in ((1, 2 * X**4 + 3 * X**2 * Y**2 + Y**4), (0, X**2 + Y**2)):
        f, cand = bacciotti_rosier(lam)
        r = verify_polynomial_lyapunov(V, f.full)
        has_evidence = all(c.evidence for c in r.checks) and recheck_report(r)
        ok &= cand == V and r.verdict in (PASS, INCONCLUSIVE) and has_evidence
        if r.verdict == INCONCLUSIVE:
            ok &= any(e.poly is not None for c in r.checks for e in c.evidence)
        dec = r.check("decrease").evidence[0].poly
        lines.append(f"lambda={lam}: {r.verdict} (-dV = {dec})")
    record(5, ok, "; ".join(lines))


# 6 --------------------------------------------------------------------------

def test_criterion_6_periodic_orbit():
    t0 = time.perf_counter()
    f0 = paper_system().f0
    a = periodic_orbit_check(f0, (1.0, 0.0))
    b = periodic_orbit_check(f0, (1.0, 1.0))
    elapsed = time.perf_counter() - t0
    ok = (a.closure_error < 1e-6 and a.W_drift < 1e-8 and abs(a.period - b.period) < 1e-6
          and elapsed < 5)
    record(6, ok, f"period {a.period:.10f} (3pi/4 = {3 * math.pi / 4:.10f}), closure "
                  f"{a.closure_error:.1e}, W drift {a.W_drift:.1e}, periods differ by "
                  f"{abs(a.period - b.period):.1e}; {elapsed:.2f} s (< 5 s)")


# 7 --------------------------------------------------------------------------

def test_criterion_7_figure(tmp_path):
    code = main(["figure", "--x0", "2,2", "--levels", "1/4,1,4", "--out", str(tmp_path)])
    root = ET.fromstring((tmp_path / "figure.svg").read_text())
    ns = "{http://www.w3.org/2000/svg}"
    drawn = sorted(float(p.get("data-level")) for p in root.iter(ns + "polygon"))
    has_traj = any(True for _ in root.iter(ns + "polyline"))
    rows = (tmp_path / "trajectory.csv").read_text().splitlines()[1:]
    samples = [tuple(float(v) for v in r.split(",")) for r in rows]
    mon = monitor_decrease(TrajectoryRecord(samples))
    w_start, w_end = samples[0][3], samples[-1][3]
    crosses = w_start >= 4 and w_end < 0.25
    r_end = math.hypot(samples[-1][1], samples[-1][2])
    on_curve = all(abs(paper_w(x, y) - c) <= 1e-10 * c
                   for c in (0.25, 1.0, 4.0) for _, _, x, y in level_set(c).points)
    ok = (code == 0 and drawn == [0.25, 1.0, 4.0] and has_traj and crosses and mon.monotone
          and mon.worst_violation <= 1e-9 and on_curve and r_end < math.hypot(2, 2))
    record(7, ok, f"SVG with 3 level curves and trajectory; W {w_start:g} -> {w_end:.4g}; "
                  f"worst violation {mon.worst_violation:.1e}; level points within 1e-10 c")


# 8 --------------------------------------------------------------------------

def _random_poly(rng, max_deg=8):
    terms = {}
    for _ in range(rng.randint(0, 10)):
        i = rng.randint(0, max_deg)
        j = rng.randint(0, max_deg - i)
        terms[(i, j)] = F(rng.randint(-9, 9), rng.randint(1, 4))
    return Poly(terms)


def _convolve(p, q):
    out = {}
    for (i1, j1), a in p.items():
        for (i2, j2), b in q.items():
            out[(i1 + i2, j1 + j2)] = out.get((i1 + i2, j1 + j2), 0) + a * b
    return {k: v for k, v in out.items() if v}


def test_criterion_8_oracles(tmp_path):
    rng = random.Random(8)
    mul_ok = all((p * q).terms == _convolve(p, q)
                 for p, q in ((_random_poly(rng), _random_poly(rng)) for _ in range(200)))

    sturm_ok = True
    grid = [F(-57, 8) + F(k, 4) for k in range(58)]
    for _ in range(200):
        roots = rng.sample([F(k, 2) for k in range(-12, 13)], rng.randint(0, 5))
        q, sf = (F(rng.choice([-2, 1, 3])),), (F(1),)
        for r in roots:
            for _ in range(rng.randint(1, 2)):
                q = umul(q, (-r, F(1)))
            sf = umul(sf, (-r, F(1)))
        if rng.random() < 0.5:
            q = umul(q, (F(rng.randint(1, 5)), F(0), F(1)))
        signs = [ueval(sf, t) > 0 for t in grid]
        oracle = sum(a != b for a, b in zip(signs, signs[1:]))
        sturm_ok &= count_roots(sturm_chain(trim(q))) == oracle

    euler_ok = scale_ok = True
    for _ in range(100):
        k = rng.randint(0, 7)
        p = Poly({(k - i, i): F(rng.randint(-9, 9)) for i in range(k + 1)})
        euler_ok &= X * p.diff_x() + Y * p.diff_y() == p.scale(k)
        lam = F(rng.randint(-9, 9), rng.randint(1, 5))
        pt = (F(rng.randint(-9, 9), rng.randint(1, 5)), F(rng.randint(-9, 9), rng.randint(1, 5)))
        scale_ok &= evaluate(p, (lam * pt[0], lam * pt[1])) == lam**k * evaluate(p, pt)

    out = tmp_path / "lp"
    main(["nonexist", "--kmax", "6", "--out", str(out)])
    first = (out / "nonexist_report.json").read_bytes()
    main(["nonexist", "--kmax", "6", "--out", str(out)])
    det_ok = (out / "nonexist_report.json").read_bytes() == first

    ok = mul_ok and sturm_ok and euler_ok and scale_ok and det_ok
    record(8, ok, f"multiplication 200/200 {mul_ok}, Sturm 200/200 {sturm_ok}, Euler 100 "
                  f"{euler_ok}, scaling 100 {scale_ok}, byte-identical LP reports {det_ok}")


if __name__ == "__main__":
    import sys
    sys.exit(pytest.main([__file__, "-q"]))
