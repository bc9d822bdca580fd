"""Sup-norm estimation by boundary sampling with golden-section polish.

By the maximum principle ``|f|_K`` (and ``sup_K Re f``) is attained on the
boundary of ``K``.  The estimate is the maximum over a nested family of
boundary grids (``n, n/2, n/4, ...`` down to 8 points per boundary
dimension), each followed by ``refinement_rounds`` of coordinate-wise
golden-section search around that grid's best sample.  Every evaluated
point lies on the boundary, so the result is a lower bound on the true sup;
nesting makes it non-decreasing under doubling of ``boundary_count``.

Many functions can be handled at once through a *batch*: any object with

* ``__len__()`` -- number of functions ``k``;
* ``take(rows: slice)`` -- sub-batch;
* ``grid(Z)`` -- values at all points, shape ``(k, M)``;
* ``pointwise(Z)`` -- function ``i`` at point ``Z[i]``, shape ``(k,)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .compact import CompactSet, SamplingPlan
from .series import TruncatedSeries, as_points, monomial_matrix

_INV_PHI = (np.sqrt(5.0) - 1.0) / 2.0
_GOLDEN_STEPS = 36
_BLOCK = 1 << 21


class EvaluationError(ArithmeticError):
    """A function returned a non-finite value at a sample point."""

    def __init__(self, point):
        self.point = np.asarray(point)
        super().__init__(f"non-finite value at point {self.point.tolist()}")


@dataclass(frozen=True)
class SupEstimate:
    value: float
    resolution: dict


class FunctionBatch:
    """Batch of one: wraps a callable ``f(Z) -> (M,)``."""

    def __init__(self, f: Callable[[np.ndarray], np.ndarray], dimension: int):
        self.f = f
        self.dimension = dimension

    def __len__(self):
        return 1

    def take(self, rows):
        return self

    def grid(self, Z):
        return np.asarray(self.f(Z), dtype=complex).reshape(1, -1)

    def pointwise(self, Z):
        return np.asarray(self.f(Z), dtype=complex).reshape(-1)


class CoefficientBatch:
    """Functions ``sum_t C[i, t] * member_t`` sharing one set of members.

    ``members(Z)`` must return the member values at ``Z`` with shape
    ``(n_members, M)``.
    """

    def __init__(self, members: Callable[[np.ndarray], np.ndarray], C: np.ndarray, dimension: int):
        self.members = members
        self.C = np.atleast_2d(np.asarray(C, dtype=complex))
        self.dimension = dimension

    def __len__(self):
        return self.C.shape[0]

    def take(self, rows):
        return CoefficientBatch(self.members, self.C[rows], self.dimension)

    def grid(self, Z):
        return self.C @ self.members(Z)

    def pointwise(self, Z):
        return np.einsum("it,ti->i", self.C, self.members(Z))


def series_batch(series: list[TruncatedSeries]) -> CoefficientBatch:
    """Batch of series; the union of their supports becomes the member set."""
    d = series[0].dimension
    keys = sorted({a for s in series for a in s.coefficients}, key=lambda a: (sum(a), a))
    if not keys:
        keys = [(0,) * d]
    index = {a: t for t, a in enumerate(keys)}
    C = np.zeros((len(series), len(keys)), dtype=complex)
    for i, s in enumerate(series):
        if s.dimension != d:
            raise ValueError("all series in a batch must share the dimension")
        for a, c in s.items():
            C[i, index[a]] = c
    exps = np.array(keys, dtype=np.int64).reshape(len(keys), d)
    return CoefficientBatch(lambda Z: monomial_matrix(Z, exps).T, C, d)


def _as_batch(f, dimension: int):
    if hasattr(f, "pointwise") and hasattr(f, "take"):
        return f
    if isinstance(f, TruncatedSeries):
        return series_batch([f])
    return FunctionBatch(f, dimension)


def _levels(n: int) -> list[int]:
    levels = [n]
    while levels[-1] % 2 == 0 and levels[-1] // 2 >= 8:
        levels.append(levels[-1] // 2)
    return levels


def _part(vals: np.ndarray, part: str) -> np.ndarray:
    return np.abs(vals) if part == "abs" else vals.real


def _check_finite(vals: np.ndarray, Z: np.ndarray) -> None:
    bad = ~np.isfinite(vals)
    if bad.any():
        j = np.argwhere(bad)[0]
        raise EvaluationError(Z[j[-1]])


def _polish(batch, K, T0, aux0, h, best, rounds, seed, part):
    """Coordinate-wise golden-section ascent on each row's own boundary parameters."""
    T = T0.copy()
    best = best.copy()
    h = np.asarray(h, dtype=float).copy()

    fast = part == "abs" and hasattr(batch, "abs_pointwise")

    def value(Tc):
        Z = K.points(Tc, aux0, seed)
        v = batch.abs_pointwise(Z) if fast else batch.pointwise(Z)
        _check_finite(v, Z)
        return v if fast else _part(v, part)

    for _ in range(rounds):
        for c in range(T.shape[1]):
            lo = T[:, c] - h[c]
            hi = T[:, c] + h[c]
            arg = T[:, c].copy()
            trial = T.copy()
            for _ in range(_GOLDEN_STEPS):
                x1 = hi - _INV_PHI * (hi - lo)
                x2 = lo + _INV_PHI * (hi - lo)
                trial[:, c] = x1
                f1 = value(trial)
                trial[:, c] = x2
                f2 = value(trial)
                for x, fx in ((x1, f1), (x2, f2)):
                    up = fx > best
                    best = np.where(up, fx, best)
                    arg = np.where(up, x, arg)
                keep_left = f1 >= f2
                lo = np.where(keep_left, lo, x1)
                hi = np.where(keep_left, x2, hi)
            T[:, c] = arg
        h /= 2
    return best


def sup_batch(f, K: CompactSet, plan: SamplingPlan, part: str = "abs") -> SupEstimate:
    """Sup estimates for every function of a batch; ``value`` is an array of length ``k``.

    ``part="abs"`` estimates ``sup_K |f|``; ``part="real"`` estimates ``sup_K Re f``.
    """
    if part not in ("abs", "real"):
        raise ValueError("part must be 'abs' or 'real'")
    batch = _as_batch(f, K.dimension)
    k = len(batch)
    levels = _levels(plan.boundary_count)
    best = np.full(k, -np.inf)
    npts = 0
    for lvl in levels:
        T, aux = K.grid(lvl, plan.seed)
        Z = K.points(T, aux, plan.seed)
        npts = max(npts, Z.shape[0])
        step = max(1, _BLOCK // max(1, Z.shape[0]))
        for s in range(0, k, step):
            rows = slice(s, min(k, s + step))
            sub = batch.take(rows)
            if part == "abs" and hasattr(sub, "abs_grid"):
                vals = sub.abs_grid(Z)
                _check_finite(vals, Z)
            else:
                vals = sub.grid(Z)
                _check_finite(vals, Z)
                vals = _part(vals, part)
            idx = np.argmax(vals, axis=1)
            top = vals[np.arange(vals.shape[0]), idx]
            a0 = None if aux is None else aux[idx]
            top = _polish(sub, K, T[idx], a0, K.spacing(lvl), top, plan.refinement_rounds, plan.seed, part)
            best[rows] = np.maximum(best[rows], top)
    resolution = {
        "boundary_count": plan.boundary_count,
        "levels": levels,
        "points": npts,
        "spacing": float(K.spacing(plan.boundary_count)[0]),
        "refinement_rounds": plan.refinement_rounds,
    }
    return SupEstimate(best, resolution)


def sup_estimate(f, K: CompactSet, plan: SamplingPlan, part: str = "abs") -> SupEstimate:
    est = sup_batch(_as_batch(f, K.dimension), K, plan, part)
    if len(est.value) != 1:
        raise ValueError("sup_estimate expects a single function; use sup_batch")
    return SupEstimate(float(est.value[0]), est.resolution)


def sup_norm(f, K: CompactSet, plan: SamplingPlan) -> float:
    """Lower-bound estimate of ``sup_K |f|``.

    ``f`` is a :class:`TruncatedSeries` or a callable on ``(M, d)`` point arrays.
    """
    return sup_estimate(f, K, plan).value


def sup_real(f, K: CompactSet, plan: SamplingPlan) -> float:
    """Lower-bound estimate of ``sup_K Re f``."""
    return sup_estimate(f, K, plan, part="real").value


def univariate(g: Callable[[np.ndarray], np.ndarray]) -> Callable[[np.ndarray], np.ndarray]:
    """Adapt a function of one complex array to the ``(M, 1)`` point convention."""
    return lambda Z: g(as_points(Z, 1)[:, 0])
