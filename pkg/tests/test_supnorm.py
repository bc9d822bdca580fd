import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from bohrlab.compact import Ball, BernsteinEllipse, Polydisc, SamplingPlan, Segment
from bohrlab.series import TruncatedSeries, random_series
from bohrlab.supnorm import EvaluationError, series_batch, sup_batch, sup_estimate, sup_norm, sup_real, univariate
from oracles import brute_sup_circle, brute_sup_ellipse, faber_value


@pytest.mark.parametrize("r", [0.3, 1.0, 2.7])
def test_sup_of_z(r):
    assert sup_norm(TruncatedSeries.monomial((1,)), Ball(0, r), SamplingPlan(64)) == pytest.approx(r, abs=1e-10)


@pytest.mark.parametrize("n", [2, 5, 11])
def test_sup_of_power(n):
    est = sup_norm(TruncatedSeries.monomial((n,)), Ball(0, 1.3), SamplingPlan(64))
    assert est == pytest.approx(1.3 ** n, rel=1e-10)


def test_faber_three_on_ellipse():
    f = univariate(lambda z: faber_value(3, z))
    assert sup_norm(f, BernsteinEllipse(2), SamplingPlan(64)) == pytest.approx(8.125, abs=1e-9)


def test_sup_on_sphere_of_linear_form():
    # |z1 + z2| on the unit sphere of C^2 peaks at sqrt(2); the estimate is
    # limited by the direction set, the phase sweep cannot improve it
    f = TruncatedSeries(2, {(1, 0): 1.0, (0, 1): 1.0})
    est = sup_norm(f, Ball(0, 1, 2), SamplingPlan(64))
    assert est <= np.sqrt(2) + 1e-12
    assert est == pytest.approx(np.sqrt(2), rel=5e-3)


def test_polydisc_sup_is_majorant_for_positive_coefficients():
    f = TruncatedSeries(2, {(1, 0): 1.0, (0, 2): 2.0, (1, 1): 0.5})
    assert sup_norm(f, Polydisc(0, 1, 2), SamplingPlan(32)) == pytest.approx(3.5, rel=1e-12)


def test_lower_bound_against_dense_oracle():
    f = random_series(1, 15, 0.8, 4)
    est = sup_norm(f, Ball(0.2, 1.1), SamplingPlan(64))
    ref = brute_sup_circle(lambda z: f(z[:, None]), 0.2, 1.1)
    assert est <= ref * (1 + 1e-11)
    assert est == pytest.approx(ref, rel=1e-9)


def test_ellipse_against_dense_oracle():
    f = random_series(1, 10, 0.9, 8)
    est = sup_norm(f, BernsteinEllipse(1.7), SamplingPlan(64))
    assert est == pytest.approx(brute_sup_ellipse(lambda z: f(z[:, None]), 1.7), rel=1e-8)


def test_sup_real_and_resolution():
    f = TruncatedSeries.from_univariate([0, 1j])
    assert sup_real(f, Ball(0, 2), SamplingPlan(32)) == pytest.approx(2.0)
    est = sup_estimate(f, Ball(0, 2), SamplingPlan(32))
    assert est.resolution["boundary_count"] == 32 and est.resolution["points"] == 32


def test_segment_sup():
    f = univariate(lambda z: faber_value(4, z))
    assert sup_norm(f, Segment(), SamplingPlan(64)) == pytest.approx(2.0, abs=1e-12)


def test_non_finite_value_reported():
    with pytest.raises(EvaluationError) as err:
        sup_norm(univariate(lambda z: 1 / (z - 1)), Ball(0, 1), SamplingPlan(8))
    assert err.value.point is not None


def test_batch_matches_individual_estimates():
    fs = [random_series(1, 8, 0.7, s) for s in range(5)]
    batch = sup_batch(series_batch(fs), Ball(0, 1.5), SamplingPlan(32)).value
    single = [sup_norm(f, Ball(0, 1.5), SamplingPlan(32)) for f in fs]
    np.testing.assert_allclose(batch, single, rtol=1e-12)


@given(st.integers(0, 2**32), st.floats(0.2, 0.9), st.floats(0.3, 2.0), st.floats(1.0, 2.0))
def test_maximum_modulus_consistency(seed, decay, r, grow):
    f = random_series(1, 10, decay, seed)
    plan = SamplingPlan(32)
    assert sup_norm(f, Ball(0, r), plan) <= sup_norm(f, Ball(0, r * grow), plan) + 1e-12


@given(st.integers(0, 2**32), st.integers(1, 2), st.sampled_from([8, 16, 32]))
def test_doubling_boundary_count_never_decreases(seed, d, n):
    f = random_series(d, 6, 0.8, seed)
    K = Ball(0, 1, d) if d == 1 else Polydisc(0, 1, d)
    assert sup_norm(f, K, SamplingPlan(2 * n)) >= sup_norm(f, K, SamplingPlan(n))
