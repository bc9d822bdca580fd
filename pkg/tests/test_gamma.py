import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohrlab.compact import Ball, BernsteinEllipse, SamplingPlan
from bohrlab.gamma import (Evidence, ExhaustionSpec, GammaCurve, Method, SchwarzPropertyError,
                           borel_caratheodory_general, build_gamma_lp, ellipse_exhaustion, gamma_closed_form,
                           gamma_curve, gamma_lp, liouville_verdict, plane_by_balls, schwarz_property_K1,
                           unit_disc_by_balls)
from bohrlab.series import TruncatedSeries
from oracles import linprog_max, pseudo_hyperbolic

SMALL = SamplingPlan(64, 32)


def test_closed_form_examples():
    assert gamma_closed_form(Ball(0, 2), 1) == pytest.approx(0.5)
    assert gamma_closed_form(Ball(0, 1), 0.5) == pytest.approx(0.5)
    assert gamma_closed_form(Ball(0, 1), 0.3) == 0.3
    assert gamma_closed_form(Ball(0, 1), 0.5, 0.2j) == pytest.approx(pseudo_hyperbolic(0.5, 0.2j))
    with pytest.raises(ValueError):
        gamma_closed_form(Ball(0, 1), 1.0)
    with pytest.raises(TypeError):
        gamma_closed_form(BernsteinEllipse(2), 0.1)


@pytest.mark.parametrize("D,z,expected", [(Ball(0, 2), 1.0, 0.5), (Ball(0, 1), 0.5, 0.5),
                                          (Ball(1j, 3), 1j + 1.5, 0.5)])
def test_lp_matches_schwarz_lemma(D, z, expected):
    res = gamma_lp(D, D.center[0], z)
    assert abs(res.value - expected) < 1e-3
    assert res.value <= res.slack_bound + 1e-12


def test_lp_vanishes_at_base_point():
    assert gamma_lp(Ball(0, 2), 0.3, 0.3).value < 1e-9


def test_lp_off_centre_base_point():
    res = gamma_lp(Ball(0, 1), 0.3, -0.4, m=16)
    assert res.value == pytest.approx(pseudo_hyperbolic(-0.4, 0.3), abs=2e-3)


def test_lp_agrees_with_highs_on_an_ellipse():
    prob = build_gamma_lp(BernsteinEllipse(2.0), 0j, 0.6 + 0.2j, 8, SMALL)
    from bohrlab.simplex import maximize
    ours = maximize(prob.objective, prob.A_ub, prob.b_ub, prob.A_eq, prob.b_eq).value
    assert ours == pytest.approx(linprog_max(prob.objective, prob.A_ub, prob.b_ub, prob.A_eq, prob.b_eq),
                                 abs=1e-8)


def test_lp_value_dominates_explicit_competitor():
    # f(w) = w/a is bounded by 1 on E_2 (semi-major axis a) and vanishes at 0
    E = BernsteinEllipse(2.0)
    a = E.semi_axes[0]
    for z in (0.5, 0.3 + 0.4j, -0.6j):
        assert abs(z) / a <= gamma_lp(E, 0j, z, plan=SMALL).value + 1e-9


def test_degree_convergence():
    E = BernsteinEllipse(1.8)
    g1 = gamma_lp(E, 0j, 0.4 + 0.1j, m=10, plan=SMALL).value
    g2 = gamma_lp(E, 0j, 0.4 + 0.1j, m=20, plan=SMALL).value
    assert abs(g1 - g2) <= 1e-3


@given(st.floats(-0.5, 0.5), st.floats(-0.3, 0.3), st.floats(-0.05, 0.05), st.floats(-0.05, 0.05))
@settings(max_examples=8)
def test_continuity(x, y, dx, dy):
    # |f(z) - f(z')| <= 2 |z - z'| / s when B(z, s) lies in the domain and |f| <= 1
    E = BernsteinEllipse(2.0)
    z, zp = complex(x, y), complex(x + dx, y + dy)
    s = E.semi_axes[1] - abs(z) - 0.1
    g, gp = (gamma_lp(E, 0j, w, m=8, plan=SMALL).value for w in (z, zp))
    assert abs(g - gp) <= 2 * abs(z - zp) / s + 1e-3


def test_plane_curve_decays_like_one_over_n():
    curve = gamma_curve(plane_by_balls(8), 0.5)
    assert curve.monotone
    for n, v in zip(curve.indices, curve.values):
        assert abs(v - 0.5 / (n + 1)) < 1e-3
    verdict = liouville_verdict(curve)
    assert verdict.evidence is Evidence.DECAY and verdict.confident


def test_unit_disc_curve_plateaus():
    curve = gamma_curve(unit_disc_by_balls(8), 0.5)
    assert curve.monotone and curve.indices[0] == 1  # radius 1/2 does not contain z
    assert abs(curve.values[-1] - 0.5) < 1e-2
    verdict = liouville_verdict(curve)
    assert verdict.evidence is Evidence.PLATEAU and verdict.confident
    assert verdict.limit_estimate == pytest.approx(0.5, abs=1e-2)
    assert verdict.label == "numerical evidence, not proof"


def test_lp_curve_on_ellipses_is_monotone():
    curve = gamma_curve(ellipse_exhaustion([1.5, 2.5, 4.0]), 0.5, m=10, plan=SMALL)
    assert all(m is Method.LP for m in curve.methods)
    assert curve.monotone


def test_verdict_edge_cases():
    zeros = GammaCurve(0.5, [0, 1, 2, 3], [0.0] * 4, [Method.LP] * 4, True)
    assert liouville_verdict(zeros).evidence is Evidence.DECAY
    flat = GammaCurve(0.5, list(range(6)), [0.3] * 6, [Method.LP] * 6, True)
    v = liouville_verdict(flat)
    assert v.evidence is Evidence.PLATEAU and v.confident
    with pytest.raises(ValueError):
        liouville_verdict(GammaCurve(0.5, [0, 1], [0.5, 0.4], [Method.LP] * 2, True))


def test_curve_csv_and_dict():
    curve = gamma_curve(plane_by_balls(4), 0.5)
    lines = curve.to_csv().splitlines()
    assert lines[0] == "index,gamma,method" and len(lines) == 5
    assert lines[1].endswith("ClosedForm")
    assert curve.to_dict()["monotone"]


def test_schwarz_property_examples():
    K = Ball(0, 1)
    assert schwarz_property_K1(plane_by_balls(8), K, 0.25) == 3  # 1/n <= 1/4 at radius 4
    assert schwarz_property_K1(plane_by_balls(8), K, 1.0) == 0
    with pytest.raises(SchwarzPropertyError):
        schwarz_property_K1(unit_disc_by_balls(8), Ball(0, 0.4), 0.1)


def test_exhaustion_validation():
    with pytest.raises(ValueError):
        ExhaustionSpec((Ball(0, 2), Ball(0, 1)))
    with pytest.raises(ValueError):
        ExhaustionSpec((Ball(0, 1), Ball(0.5, 1.2)))
    with pytest.raises(ValueError):
        ExhaustionSpec((Ball(0, 1),), z0=2.0)


def test_borel_caratheodory_general():
    E = plane_by_balls(8)
    n1, rep = borel_caratheodory_general(E, Ball(0, 1), 1.0)
    assert rep["delta"] == pytest.approx(1 / 3)
    # gamma = 1/n on the unit circle, so the first radius with 1/n <= 1/3 is 3
    assert n1 == min(n for n in range(8) if 1 / (n + 1) <= 1 / 3)
    assert rep["checked"] == 100 and rep["holds"]


def test_borel_caratheodory_simple_functions():
    E = plane_by_balls(8)
    _, rep = borel_caratheodory_general(E, Ball(0, 1), 1.0, [TruncatedSeries.monomial((1,))])
    # |z|_K = 1 and sup Re z on the radius-3 disc is 3
    assert rep["worst_slack"] == pytest.approx(2.0)
    _, rep = borel_caratheodory_general(E, Ball(0, 1), 1.0, [TruncatedSeries.constant(2.0)])
    assert rep["worst_slack"] == 0 and rep["holds"]
    with pytest.raises(ValueError):
        borel_caratheodory_general(E, Ball(0, 1), 0.0)
