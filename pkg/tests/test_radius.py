import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bohrlab.bases import FaberSegment, Monomial
from bohrlab.compact import Ball, BernsteinEllipse, Polydisc, SamplingPlan, Segment
from bohrlab.radius import (RadiusEstimate, ball_family, faber_bohr_R0, green_family, individual_bohr_radius,
                            kappa_upper_search, majorant, majorant_curve, mobius_radius, mobius_series,
                            random_faber_corpus)
from bohrlab.series import TruncatedSeries, random_series
from bohrlab.supnorm import sup_norm
from oracles import faber_sup_on_ellipse, geometric_partial_sum, mobius_bohr_radius

PLAN = SamplingPlan(128)
K_REF = Ball(0, 1 - 1e-4)


def test_majorant_of_constant():
    for K in (Ball(0, 5), Segment(), BernsteinEllipse(3)):
        B = Monomial(1) if isinstance(K, Ball) else FaberSegment()
        assert majorant({0: 1.0}, B, K, PLAN) == 1


@pytest.mark.parametrize("a,r", [(0.5, 1.0), (0.9, 0.7), (1.3, 0.5)])
def test_majorant_geometric(a, r):
    f = TruncatedSeries.from_univariate([a ** n for n in range(31)])
    assert majorant(f, Monomial(1), Ball(0, r), PLAN) == pytest.approx(geometric_partial_sum(a * r, 30).real,
                                                                      abs=1e-10)


def test_majorant_faber_unit_five():
    # 2 T_5 on E_2 peaks at 2**5 + 2**-5
    assert majorant({5: 1.0}, FaberSegment(), BernsteinEllipse(2), PLAN) == pytest.approx(32.03125, abs=1e-8)


@pytest.mark.parametrize("a", [0.3, 0.5, 0.7, 0.9])
def test_mobius_radius(a):
    r = individual_bohr_radius(mobius_series(a), Monomial(1), ball_family(1), K_REF, PLAN)
    assert mobius_radius(a) == mobius_bohr_radius(a)
    assert abs(r.value - mobius_bohr_radius(a)) < 2e-3
    assert not r.saturated


def test_saturation_cases():
    const = individual_bohr_radius(TruncatedSeries.constant(0.7), Monomial(1), ball_family(1), Ball(0, 1), PLAN)
    assert const.saturated and const.value == 1
    z = individual_bohr_radius(TruncatedSeries.monomial((1,)), Monomial(1), ball_family(1), Ball(0, 1), PLAN)
    assert z.saturated and z.value == 1


def test_bisection_consistency():
    f = mobius_series(0.6)
    r = individual_bohr_radius(f, Monomial(1), ball_family(1), K_REF, PLAN).value
    S = sup_norm(f, K_REF, PLAN)
    assert majorant(f, Monomial(1), Ball(0, r - 1e-4), PLAN) <= S
    assert majorant(f, Monomial(1), Ball(0, r + 1e-4), PLAN) > S


def test_generic_family_path_matches_fast_path():
    f = mobius_series(0.5)
    fast = individual_bohr_radius(f, Monomial(1), ball_family(1), K_REF, PLAN).value
    slow = individual_bohr_radius(f, Monomial(1), lambda r: Ball(0, r), K_REF, PLAN, (1e-3, 1.0)).value
    assert fast == pytest.approx(slow, abs=2e-6)


def test_majorant_curve_is_monotone():
    curve = majorant_curve(mobius_series(0.5), Monomial(1), ball_family(1), np.linspace(0.05, 1, 11), K_REF, PLAN)
    assert all(a <= b for a, b in zip(curve.values, curve.values[1:]))
    assert curve.values[0] <= curve.reference_sup
    assert curve.to_csv().splitlines()[0] == "r,M(r),S"


@given(st.integers(0, 2**32), st.floats(0.1, 0.9), st.floats(0.2, 1.5))
def test_majorant_dominates_sup(seed, decay, r):
    f = random_series(1, 12, decay, seed)
    assert majorant(f, Monomial(1), Ball(0, r), PLAN) >= sup_norm(f, Ball(0, r), PLAN) - 1e-9


def test_kappa_one():
    est = kappa_upper_search(1, 500, 7)
    assert 0.330 <= est.upper <= 0.337
    assert est.lower <= est.upper
    assert est.metadata["holds_at_0.33"]


@pytest.mark.slow
def test_kappa_monotone_in_dimension():
    ups = {d: kappa_upper_search(d, 50, 3).upper for d in (1, 2, 3, 4)}
    assert ups[2] <= 1 / 2.8 + 2e-3
    for d in (2, 3, 4):
        assert ups[d] <= ups[d - 1] + 5e-3
    assert ups[4] <= ups[2] + 5e-3


def test_radius_estimate_invariant():
    with pytest.raises(ValueError):
        RadiusEstimate(0.5, 0.4, {})


def test_faber_r0_constant():
    est = faber_bohr_R0([{0: 1.0}])
    assert est.lower == est.upper == 1.0


def _r0_oracle(eps, n):
    """Smallest rho with max_{|w| = rho} |1 + i eps (w^n + w^-n)| >= 1 + 2 eps, by dense phase grid."""
    phi = np.linspace(0, 2 * np.pi, 20001)

    def sup(rho):
        x = (rho ** n + rho ** -n) * np.cos(phi) + 1j * (rho ** n - rho ** -n) * np.sin(phi)
        return np.abs(1 + 1j * eps * x).max()

    lo, hi = 1.0, 4.0
    for _ in range(60):
        mid = (lo + hi) / 2
        lo, hi = (lo, mid) if sup(mid) >= 1 + 2 * eps else (mid, hi)
    return hi


@pytest.mark.parametrize("eps,n", [(0.1, 2), (0.05, 3), (0.2, 1)])
def test_faber_r0_two_term_closed_form(eps, n):
    f = {0: 1.0, n: 1j * eps}
    est = faber_bohr_R0([f], SamplingPlan(512))
    assert est.lower == pytest.approx(_r0_oracle(eps, n), abs=1e-4)
    # real perturbations already peak on the segment
    assert faber_bohr_R0([{0: 1.0, n: eps}]).upper == 1.0


def test_faber_r0_monotone_in_corpus():
    corpus = random_faber_corpus(40, 12, 3)
    rhos = [faber_bohr_R0(corpus[:k]).upper for k in (5, 10, 20, 40)]
    assert all(a <= b for a, b in zip(rhos, rhos[1:]))


def test_green_family():
    assert green_family(1.0) == Segment()
    assert green_family(2.0) == BernsteinEllipse(2.0)
    assert faber_sup_on_ellipse(3, 2.0) == 8.125
    assert Polydisc(0, 1, 2).dimension == 2
