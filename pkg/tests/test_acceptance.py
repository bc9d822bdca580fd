"""End-to-end acceptance checks, one test per criterion.

Each test prints a single ``PASS``/``FAIL`` line (visible with or without
``-s``) before asserting, so a run doubles as a compact report.
"""

import json
import math
import time

import numpy as np
import pytest

from bohrlab.bases import FaberSegment, Monomial, member_sups
from bohrlab.certify import borel_caratheodory_check, certify, ratio_sum, schwarz_step, verify_certificate
from bohrlab.cli import main
from bohrlab.compact import Ball, BernsteinEllipse, SamplingPlan
from bohrlab.gamma import (Evidence, borel_caratheodory_general, gamma_closed_form, gamma_curve, gamma_lp,
                           liouville_verdict, plane_by_balls, unit_disc_by_balls)
from bohrlab.radius import individual_bohr_radius, ball_family, kappa_upper_search, mobius_series
from bohrlab.series import TruncatedSeries, random_series
from bohrlab.supnorm import univariate
from oracles import faber_sup_on_ellipse, mobius_bohr_radius, ratio_partial_sum


@pytest.fixture
def report(capsys):
    def emit(number, ok, detail):
        with capsys.disabled():
            print(f"\n[criterion {number}] {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail
    return emit


def test_criterion_1_kappa_one(report):
    t = time.perf_counter()
    est = kappa_upper_search(1, 100, 0)
    elapsed = time.perf_counter() - t
    ok = 0.330 <= est.upper <= 0.337 and elapsed < 10
    report(1, ok, f"kappa_1 upper {est.upper:.5f} in [0.330, 0.337], {elapsed:.2f}s < 10s")


def test_criterion_2_mobius_radius(report):
    plan, K = SamplingPlan(128), Ball(0, 1 - 1e-4)
    errs = {a: abs(individual_bohr_radius(mobius_series(a), Monomial(1), ball_family(1), K, plan).value
                   - mobius_bohr_radius(a)) for a in (0.3, 0.5, 0.7, 0.9)}
    report(2, max(errs.values()) < 2e-3, f"max |r(a) - 1/(1+2a)| = {max(errs.values()):.2e} < 2e-3")


def test_criterion_3_schwarz_step(report):
    plan = SamplingPlan(128)
    rng = np.random.default_rng(3)
    violations, worst = 0, math.inf
    for i in range(500):
        f = random_series(1, 12, float(rng.uniform(0.1, 0.9)), 1000 + i).without_constant()
        for r in (0.5, 1.0, 2.0):
            lhs, rhs = schwarz_step(f, r, plan)
            worst = min(worst, rhs - lhs)
            violations += lhs > rhs + 1e-9
    report(3, violations == 0, f"500 series x 3 radii, {violations} violations, worst slack {worst:.3e}")


def test_criterion_4_borel_caratheodory(report):
    plan = SamplingPlan(128)
    rng = np.random.default_rng(4)
    violations = 0
    for i in range(200):
        f = random_series(1, 12, float(rng.uniform(0.1, 0.9)), 2000 + i)
        r1 = float(rng.choice([0.5, 1.0]))
        lhs, rhs = borel_caratheodory_check(f, r1, 3 * r1, plan)
        violations += lhs > rhs + 1e-9
    lhs, rhs = borel_caratheodory_check(univariate(np.exp), 1.0, 3.0)
    spot = abs(lhs - (math.e - 1)) < 1e-5 and abs(rhs - (math.exp(3) - 1)) < 1e-4
    report(4, violations == 0 and spot,
           f"200 series, {violations} violations; e^z - 1: lhs {lhs:.5f}, rhs {rhs:.4f}")


def test_criterion_5_certificate(report):
    cert = certify(Monomial(1), 1.0)
    v = verify_certificate(cert, seed=20260101, corpus_size=200)
    ok = cert.C == 2 and cert.R == 10 and v.check.checked == 200 and v.check.worst_slack >= -1e-6
    report(5, ok, f"C={cert.C}, R={cert.R}; fresh-seed worst slack {v.check.worst_slack:.3e} over "
                  f"{v.check.checked} functions")


def test_criterion_6_ratio_sums(report):
    sums = [ratio_sum(Monomial(1), Ball(0, 1), Ball(0, lam), n_max=64) for lam in (2, 3, 5)]
    errs = [abs(s - ratio_partial_sum(lam)) for s, lam in zip(sums, (2, 3, 5))]
    ok = max(errs) < 1e-9 and sums[0] > sums[1] > sums[2]
    report(6, ok, f"sums {[round(s, 12) for s in sums]}, max error {max(errs):.1e}, strictly decreasing")


def test_criterion_7_gamma_engine(report):
    lp = gamma_lp(Ball(0, 2), 0j, 1.0).value
    plane = gamma_curve(plane_by_balls(8), 0.5)
    plane_err = max(abs(v - 0.5 / (n + 1)) for n, v in zip(plane.indices, plane.values))
    disc = gamma_curve(unit_disc_by_balls(8), 0.5)
    verdict = liouville_verdict(disc)
    ok = (abs(lp - gamma_closed_form(Ball(0, 2), 1.0)) < 1e-3 and plane_err < 1e-3
          and abs(disc.values[-1] - 0.5) < 1e-2 and verdict.evidence is Evidence.PLATEAU)
    report(7, ok, f"LP {lp:.5f} vs 0.5; plane max error {plane_err:.1e}; unit disc tail {disc.values[-1]:.5f} "
                  f"-> {verdict.evidence.value}")


def test_criterion_8_general_borel_caratheodory(report):
    E, K = plane_by_balls(8), Ball(0, 1)
    n1, rep = borel_caratheodory_general(E, K, 1.0)
    # gamma_n = |z|/n on the disc of radius n, so max over the unit circle is 1/n
    predicted = min(n for n in range(len(E)) if 1 / (n + 1) <= rep["delta"])
    _, zrep = borel_caratheodory_general(E, K, 1.0, [TruncatedSeries.monomial((1,))])
    ok = (rep["delta"] == 1 / 3 and n1 == predicted and rep["checked"] == 100 and rep["holds"]
          and zrep["worst_slack"] == pytest.approx(E.domains[n1].radius - 1))
    report(8, ok, f"delta={rep['delta']:.6f}; K1 radius {E.domains[n1].radius:g} (closed form: smallest n with "
                  f"1/n <= 1/3 is {predicted + 1}); {rep['checked']} functions, {rep['violations']} violations")


def test_criterion_9_faber(report, tmp_path):
    worst = 0.0
    for rho in (1.5, 2.0, 3.0):
        sups = member_sups(FaberSegment(), list(range(13)), BernsteinEllipse(rho), SamplingPlan(256))
        ref = np.array([faber_sup_on_ellipse(n, rho) for n in range(13)])
        worst = max(worst, float(np.max(np.abs(sups - ref) / ref)))
    brackets = []
    for k in (5, 10, 20, 40):
        out = tmp_path / f"r0_{k}.json"
        assert main(["faber-r0", "--corpus", str(k), "--out", str(out)]) == 0
        res = json.loads(out.read_text())["result"]
        brackets.append((res["lower"], res["upper"]))
    mono = all(a[0] <= b[0] and a[1] <= b[1] for a, b in zip(brackets, brackets[1:]))
    report(9, worst < 1e-9 and mono, f"max relative sup error {worst:.1e}; R0 brackets "
                                     f"{[round(b[1], 5) for b in brackets]} nondecreasing in corpus size")
