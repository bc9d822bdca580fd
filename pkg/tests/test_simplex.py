import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bohrlab.simplex import LPError, maximize
from oracles import linprog_max


def _bounded_lp(seed, n=4, m=30, eq=False):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(m, n))
    # a box keeps the primal bounded
    A = np.vstack([A, np.eye(n), -np.eye(n)])
    b = np.concatenate([rng.uniform(0.5, 2.0, m), np.full(2 * n, 5.0)])
    c = rng.normal(size=n)
    if eq:
        return c, A, b, rng.normal(size=(1, n)), np.zeros(1)
    return c, A, b, None, None


@given(st.integers(0, 2**32), st.integers(2, 6))
@settings(max_examples=30)
def test_matches_highs(seed, n):
    c, A, b, _, _ = _bounded_lp(seed, n)
    res = maximize(c, A, b)
    assert res.value == pytest.approx(linprog_max(c, A, b), abs=1e-8)
    assert np.all(A @ res.x <= b + 1e-8)


@given(st.integers(0, 2**32))
@settings(max_examples=20)
def test_equality_rows(seed):
    c, A, b, Ae, be = _bounded_lp(seed, 5, eq=True)
    res = maximize(c, A, b, Ae, be)
    assert res.value == pytest.approx(linprog_max(c, A, b, Ae, be), abs=1e-8)
    np.testing.assert_allclose(Ae @ res.x, be, atol=1e-9)


def test_tiny_example():
    # max x + y on the unit square
    A = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], float)
    res = maximize([1, 1], A, [1, 1, 0, 0])
    assert res.value == pytest.approx(2.0)
    np.testing.assert_allclose(res.x, [1, 1], atol=1e-12)


def test_degenerate_zero_objective_over_many_rows():
    # every vertex constraint active at the optimum 0
    t = np.linspace(0, 2 * np.pi, 400, endpoint=False)
    A = np.stack([np.cos(t), np.sin(t)], axis=1)
    res = maximize([1.0, 0.0], A, np.ones(400), np.array([[1.0, 0.0]]), np.zeros(1))
    assert abs(res.value) < 1e-9


def test_infeasible_primal_raises():
    with pytest.raises(LPError):
        maximize([1.0], [[1.0], [-1.0]], [-1.0, -1.0])


def test_unbounded_primal_raises():
    with pytest.raises(LPError):
        maximize([1.0, 0.0], [[0.0, 1.0]], [1.0])
