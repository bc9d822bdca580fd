"""Majorant sums and Bohr radii.

The majorant of ``f = sum f_n phi_n`` on ``K`` is ``sum |f_n| |phi_n|_K``.
A Bohr radius is the largest parameter of a growing family ``K_r`` for
which the majorant on ``K_r`` stays below a reference sup of ``f``.

``kappa_upper_search`` bounds the polydisc Bohr radius ``kappa_d`` from
above by minimizing individual radii over a candidate corpus (Moebius
functions and seeded random polynomials), and ``faber_bohr_R0`` locates the
smallest Bernstein ellipse that dominates the Faber majorant on ``[-1, 1]``
for a given test corpus.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from .bases import (BasisFamily, CombinationBatch, FaberSegment, Monomial, as_coefficients,
                    coefficient_matrix, member_sups)
from .compact import Ball, CompactSet, Polydisc, SamplingPlan, Segment, default_plan, ellipse_or_segment, scale
from .series import TruncatedSeries, multi_indices
from .supnorm import sup_batch, sup_norm

BISECTION_TOL = 1e-6
# relative slack when comparing a majorant with a sup that can be equal to it
_EQ_SLACK = 1e-12


@dataclass(frozen=True)
class MajorantCurve:
    r: list[float]
    values: list[float]
    basis: BasisFamily
    reference_sup: float

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "M(r)", "S"])
        for r, m in zip(self.r, self.values):
            w.writerow([repr(float(r)), repr(float(m)), repr(float(self.reference_sup))])
        return buf.getvalue()


@dataclass(frozen=True)
class RadiusEstimate:
    lower: float
    upper: float
    witness: dict
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"lower {self.lower} exceeds upper {self.upper}")

    def to_dict(self) -> dict:
        return {"lower": self.lower, "upper": self.upper, "witness": self.witness, "metadata": self.metadata}


@dataclass(frozen=True)
class IndividualRadius:
    value: float
    saturated: bool
    bracket: tuple[float, float]
    reference_sup: float

    def __float__(self) -> float:
        return self.value


class Homothety:
    """The family ``r -> r * base`` (balls and polydiscs, scaled about their center)."""

    def __init__(self, base: CompactSet):
        self.base = base

    def __call__(self, r: float) -> CompactSet:
        return scale(self.base, r)

    def centered_at_origin(self) -> bool:
        return all(c == 0 for c in self.base.center)


def ball_family(d: int = 1) -> Homothety:
    return Homothety(Ball(0.0, 1.0, d))


def polydisc_family(d: int = 1) -> Homothety:
    return Homothety(Polydisc(0.0, 1.0, d))


def green_family(rho: float) -> CompactSet:
    """Sub-level sets of the Green function of ``[-1, 1]``: the segment, then ellipses."""
    return ellipse_or_segment(rho)


# --------------------------------------------------------------------------


def majorant(coeffs, B: BasisFamily, K: CompactSet, plan: SamplingPlan) -> float:
    """``sum_n |f_n| |phi_n|_K`` with sampled member sups."""
    c = as_coefficients(coeffs, B)
    idx = [n for n, v in c.items() if v != 0]
    if not idx:
        return 0.0
    sups = member_sups(B, idx, K, plan)
    return float(np.dot(np.abs([c[n] for n in idx]), sups))


def _reference_sup(coeffs: dict, B: BasisFamily, K_ref: CompactSet, plan: SamplingPlan) -> float:
    support, C = coefficient_matrix(B, [coeffs])
    return float(sup_batch(CombinationBatch(B, support, C), K_ref, plan).value[0])


def _homogeneous(B: BasisFamily, family) -> bool:
    return isinstance(B, Monomial) and isinstance(family, Homothety) and family.centered_at_origin()


def _bisect(holds: Callable[[float], bool], lo: float, hi: float, tol: float) -> tuple[float, float]:
    """Shrink ``[lo, hi]`` with ``holds(lo)`` true and ``holds(hi)`` false."""
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            lo = mid
        else:
            hi = mid
    return lo, hi


def _bisect_many(holds: Callable[[np.ndarray], np.ndarray], lo: np.ndarray, hi: np.ndarray,
                 tol: float) -> tuple[np.ndarray, np.ndarray]:
    lo, hi = lo.astype(float).copy(), hi.astype(float).copy()
    while np.any(hi - lo > tol):
        mid = 0.5 * (lo + hi)
        ok = holds(mid)
        lo = np.where(ok, mid, lo)
        hi = np.where(ok, hi, mid)
    return lo, hi


def individual_bohr_radius(f, B: BasisFamily, family, K_ref: CompactSet, plan: SamplingPlan,
                           r_range: tuple[float, float] = (0.0, 1.0),
                           tol: float = BISECTION_TOL) -> IndividualRadius:
    """Largest ``r`` in ``r_range`` with ``majorant(f, B, family(r)) <= |f|_{K_ref}``.

    Returns 0 when the inequality already fails at ``r_range[0]`` and the
    range maximum with ``saturated=True`` when it never fails.  For monomials
    on a homothety family about the origin the member sups scale as
    ``r**|alpha|``, so they are sampled once on the base set.
    """
    coeffs = {n: v for n, v in as_coefficients(f, B).items() if v != 0}
    S = _reference_sup(coeffs, B, K_ref, plan) if coeffs else 0.0
    lo, hi = map(float, r_range)
    idx = list(coeffs)
    absc = np.abs([coeffs[n] for n in idx])

    if _homogeneous(B, family):
        base = member_sups(B, idx, family.base, plan)
        deg = np.array([B.degree(n) for n in idx], dtype=float)

        def M(r):
            return float(np.dot(absc, base * r ** deg)) if idx else 0.0
    else:
        def M(r):
            K = family(r)
            return float(np.dot(absc, member_sups(B, idx, K, plan))) if idx else 0.0

    def holds(r):
        return M(r) <= S * (1 + _EQ_SLACK) + 1e-300

    if holds(hi):
        return IndividualRadius(hi, True, (hi, hi), S)
    if not holds(lo):
        return IndividualRadius(0.0, False, (lo, lo), S)
    a, b = _bisect(holds, lo, hi, tol)
    return IndividualRadius(a, False, (a, b), S)


def majorant_curve(f, B: BasisFamily, family, rs: Sequence[float], K_ref: CompactSet,
                   plan: SamplingPlan) -> MajorantCurve:
    coeffs = as_coefficients(f, B)
    values = [majorant(coeffs, B, family(r), plan) for r in rs]
    S = _reference_sup({n: v for n, v in coeffs.items() if v != 0}, B, K_ref, plan)
    return MajorantCurve(list(map(float, rs)), values, B, S)


# --------------------------------------------------------------------------
# kappa_d


def mobius_series(a: float, d: int = 1, variable: int = 0, tail: float = 1e-13) -> TruncatedSeries:
    """Taylor series of ``(a - z)/(1 - a z)`` in ``z = z_variable``, truncated once ``a**n < tail``.

    ``(a - z)/(1 - a z) = a - (1 - a**2) sum_{n >= 1} a**(n - 1) z**n``.
    """
    if not 0 <= a < 1:
        raise ValueError("Moebius parameter must lie in [0, 1)")
    N = 1 if a == 0 else max(1, math.ceil(math.log(tail) / math.log(a)) + 1)
    table = {(0,) * d: a}
    for n in range(1, N + 1):
        alpha = [0] * d
        alpha[variable] = n
        table[tuple(alpha)] = -(1 - a * a) * a ** (n - 1)
    return TruncatedSeries(d, table, N)


def mobius_radius(a: float) -> float:
    """Bohr radius of the Moebius map: ``a + (1 - a**2) r/(1 - a r) = 1`` at ``r = 1/(1 + 2a)``."""
    return 1.0 / (1.0 + 2.0 * a)


MOBIUS_GRID = (0.3, 0.5, 0.7, 0.9, 0.95, 0.98, 0.99)
PRODUCT_GRID = (0.5, 0.7)


def _random_polynomials(k: int, d: int, degree: int, count: int, seed: int) -> list[TruncatedSeries]:
    """``count`` seeded polynomials in the first ``k`` of ``d`` variables, all of total degree <= ``degree``."""
    rng = np.random.default_rng([seed, k, degree])
    keys = list(multi_indices(k, degree))
    out = []
    for _ in range(count):
        c = rng.normal(size=len(keys)) + 1j * rng.normal(size=len(keys))
        s = TruncatedSeries(k, dict(zip(keys, c)), degree)
        out.append(s if k == d else s.embed(d))
    return out


def _product_mobius(a: float, d: int) -> TruncatedSeries:
    """``phi_a(z_1) phi_a(z_2)`` truncated in total degree."""
    one = mobius_series(a, 1)
    N = one.degree_bound
    table = {}
    for (i,), ci in one.items():
        for (j,), cj in one.items():
            if i + j <= N:
                alpha = [0] * d
                alpha[0], alpha[1] = i, j
                table[tuple(alpha)] = ci * cj
    return TruncatedSeries(d, table, N)


def _homothetic_radii(series: list[TruncatedSeries], d: int, plan: SamplingPlan,
                      tol: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Brackets of individual radii over ``r U^d`` for many series at once.

    Member sups are sampled once on ``U^d`` and scaled by ``r**|alpha|``.
    """
    unit = Polydisc(0.0, 1.0, d)
    B = Monomial(d)
    support, C = coefficient_matrix(B, [dict(s.items()) for s in series])
    S = sup_batch(CombinationBatch(B, support, C), unit, plan).value
    s = member_sups(B, support, unit, plan)
    deg = np.array([sum(a) for a in support], dtype=float)
    A = np.abs(C) * s[None, :]

    def holds(r):
        return (A * r[:, None] ** deg[None, :]).sum(axis=1) <= S * (1 + _EQ_SLACK)

    n = len(series)
    lo, hi = _bisect_many(holds, np.zeros(n), np.ones(n), tol)
    sat = holds(np.ones(n))
    lo = np.where(sat, 1.0, lo)
    hi = np.where(sat, 1.0, hi)
    return lo, hi, S


def kappa_upper_search(d: int, budget: int = 100, seed: int = 0, plan: SamplingPlan | None = None,
                       tol: float = BISECTION_TOL) -> RadiusEstimate:
    """Upper estimate of the Bohr radius of the unit polydisc ``U^d`` from a candidate corpus.

    Candidates: the Moebius maps ``phi_a(z_1)`` for ``a`` in ``MOBIUS_GRID``,
    products ``phi_a(z_1) phi_a(z_2)`` when ``d >= 2``, and for each
    ``k <= d`` a batch of ``budget`` seeded random polynomials in ``k``
    variables.  The corpus for ``d`` contains the corpus for ``d - 1``, so
    the estimate cannot increase with ``d`` beyond sampling effects.

    ``upper`` is the smallest candidate radius (top of its bisection
    bracket) and ``lower`` the largest ``r`` at which every candidate was
    seen to satisfy the inequality.  Both are relative to the corpus.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    plan = plan or default_plan(d, seed)
    labels: list[str] = []
    candidates: list[TruncatedSeries] = []
    for a in MOBIUS_GRID:
        candidates.append(mobius_series(a, d))
        labels.append(f"mobius(a={a}) in z1")
    if d >= 2:
        for a in PRODUCT_GRID:
            candidates.append(_product_mobius(a, d))
            labels.append(f"mobius(a={a}) in z1 times mobius(a={a}) in z2")
    lows, highs = [], []
    for cand in candidates:
        r = individual_bohr_radius(cand, Monomial(d), polydisc_family(d), Polydisc(0.0, 1.0, d), plan,
                                   (0.0, 1.0), tol)
        lows.append(r.value)
        highs.append(r.bracket[1])
    degree = 6 if d == 1 else 3 if d == 2 else 2
    for k in range(1, d + 1):
        polys = _random_polynomials(k, d, degree, budget, seed)
        lo, hi, _ = _homothetic_radii(polys, d, plan, tol)
        lows.extend(lo.tolist())
        highs.extend(hi.tolist())
        labels.extend(f"random polynomial #{i} in {k} variable(s), degree {degree}" for i in range(budget))
        candidates.extend(polys)
    highs_a = np.array(highs)
    best = int(np.argmin(highs_a))
    upper = float(highs_a[best])
    lower = float(min(min(lows), upper))
    witness = {"description": labels[best], "series": candidates[best].to_dict()
               if len(candidates[best]) <= 64 else None}
    meta = {
        "dimension": d,
        "candidates": len(candidates),
        "corpus_relative": True,
        "note": "upper is a radius attained by an explicit candidate; lower is not a certified bound on kappa_d",
        "plan": plan.to_dict(),
    }
    if d == 1:
        meta["holds_at_0.33"] = bool(min(lows) >= 0.33)
    return RadiusEstimate(lower, upper, witness, meta)


# --------------------------------------------------------------------------
# Faber basis, Green-level radius R_0


def faber_bohr_R0(test_set: Sequence, plan: SamplingPlan | None = None, rho_max: float = 10.0,
                  tol: float = BISECTION_TOL) -> RadiusEstimate:
    """Smallest ellipse parameter ``rho`` with ``majorant(f, Faber, [-1, 1]) <= |f|_{E_rho}`` for every test function.

    Test functions are Faber coefficient sequences (lists or dicts).  The
    sup on ``E_rho`` grows with ``rho``, so the joint condition is monotone
    and bisection applies.  The bracket is relative to the test corpus.
    """
    plan = plan or SamplingPlan(256)
    B = FaberSegment()
    corpus = [as_coefficients(f, B) for f in test_set]
    if not corpus:
        raise ValueError("empty test set")
    support, C = coefficient_matrix(B, corpus)
    batch = CombinationBatch(B, support, C)
    seg_sups = member_sups(B, support, Segment(), plan)
    lhs = np.abs(C) @ seg_sups

    def sups(rho):
        return sup_batch(batch, green_family(rho), plan).value

    def slack(rho):
        return sups(rho) - lhs * (1 - _EQ_SLACK)

    def holds(rho):
        return bool(np.all(slack(rho) >= 0))

    meta = {"corpus_size": len(corpus), "corpus_relative": True, "rho_max": rho_max, "plan": plan.to_dict(),
            "note": "R0 is an infimum over all bounded functions; this bracket covers the test corpus only"}
    if holds(1.0):
        return RadiusEstimate(1.0, 1.0, {"index": None, "description": "holds on the segment itself"}, meta)
    if not holds(rho_max):
        worst = int(np.argmin(slack(rho_max)))
        raise FaberRadiusError(worst, corpus[worst], rho_max)
    lo, hi = _bisect(lambda rho: not holds(rho), 1.0, rho_max, tol)
    worst = int(np.argmin(slack(lo)))
    witness = {"index": worst, "coefficients": [[int(n), complex(c).real, complex(c).imag]
                                                for n, c in corpus[worst].items()]}
    return RadiusEstimate(lo, hi, witness, meta)


class FaberRadiusError(RuntimeError):
    def __init__(self, index: int, coeffs: Mapping, rho_max: float):
        self.index = index
        self.coefficients = dict(coeffs)
        super().__init__(f"test function #{index} still violates the inequality at rho_max={rho_max}")


def random_faber_corpus(size: int, degree: int = 12, seed: int = 0) -> list[dict]:
    """Seeded Faber coefficient sequences with ``|c_n| <= 0.7**n`` and random phases."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(size):
        rad = np.sqrt(rng.random(degree + 1)) * 0.7 ** np.arange(degree + 1)
        ph = rng.uniform(0, 2 * np.pi, degree + 1)
        out.append({n: complex(v) for n, v in enumerate(rad * np.exp(1j * ph))})
    return out
