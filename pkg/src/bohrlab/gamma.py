"""Extremal functions ``gamma_n`` along an exhaustion of a planar domain.

For domains ``D_1 ⋐ D_2 ⋐ ...`` and a base point ``z0``,

    gamma_n(z) = sup { |f(z)| : f analytic on D_n, f(z0) = 0, |f| <= 1 on D_n }.

On a disc this is the pseudo-hyperbolic distance (Schwarz lemma).  In
general it is approximated by a linear program over polynomials of degree
``m``: the modulus bound is imposed at boundary samples through
``angle_count`` half-planes ``Re(e^{i theta} f(w)) <= 1`` and, after a
rotation, the objective is ``Re f(z)``.  The half-plane polygon circumscribes
the unit circle, so the LP may exceed the true value by at most the factor
``sec(pi / angle_count)``; this factor is reported as ``slack_bound``.

Decay of ``gamma_n(z)`` to zero along the exhaustion is the numerical
signature of the Liouville property; a plateau signals bounded
non-constant functions.  The same quantities give the compact ``K_1`` of the
Schwarz property and the generalized Borel-Caratheodory inequality.
"""

from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .bases import chebyshev_table
from .compact import Ball, BernsteinEllipse, CompactSet, SamplingPlan, boundary_samples
from .series import TruncatedSeries, random_series
from .simplex import LPError, maximize
from .supnorm import sup_norm, sup_real


class SchwarzPropertyError(RuntimeError):
    """No domain of the exhaustion brings ``gamma`` below the requested ``delta``."""


@dataclass(frozen=True)
class ExhaustionSpec:
    domains: tuple[CompactSet, ...]
    z0: complex = 0j
    label: str = "custom"

    def __post_init__(self):
        doms = tuple(self.domains)
        object.__setattr__(self, "domains", doms)
        object.__setattr__(self, "z0", complex(self.z0))
        if not doms:
            raise ValueError("empty exhaustion")
        for D in doms:
            if D.dimension != 1:
                raise ValueError("exhaustions are planar")
        for a, b in zip(doms, doms[1:]):
            if not _strictly_inside(a, b):
                raise ValueError(f"exhaustion not strictly nested: {a} is not inside {b}")
        if not doms[0].contains(self.z0, interior=True):
            raise ValueError("z0 must lie in the interior of the first domain")

    def __len__(self):
        return len(self.domains)


def _strictly_inside(a: CompactSet, b: CompactSet) -> bool:
    if isinstance(a, Ball) and isinstance(b, Ball):
        return abs(a.center[0] - b.center[0]) + a.radius < b.radius
    if isinstance(a, BernsteinEllipse) and isinstance(b, BernsteinEllipse):
        return a.rho < b.rho
    pts = boundary_samples(a, SamplingPlan(64))
    return all(b.contains(p, interior=True) for p in pts)


def plane_by_balls(n: int = 8, z0: complex = 0j) -> ExhaustionSpec:
    """Discs of radius ``1, 2, ..., n`` about the origin."""
    return ExhaustionSpec(tuple(Ball(0.0, k) for k in range(1, n + 1)), z0, "PlaneByBalls")


def unit_disc_by_balls(n: int = 8, z0: complex = 0j) -> ExhaustionSpec:
    """Discs of radius ``1 - 2**-k``, ``k = 1..n``, exhausting the unit disc."""
    return ExhaustionSpec(tuple(Ball(0.0, 1 - 2.0 ** -k) for k in range(1, n + 1)), z0, "UnitDiscByBalls")


def ellipse_exhaustion(rhos: Sequence[float], z0: complex = 0j) -> ExhaustionSpec:
    return ExhaustionSpec(tuple(BernsteinEllipse(r) for r in rhos), z0, "EllipseFamily")


# --------------------------------------------------------------------------
# single values


def gamma_closed_form(D: Ball, z: complex, z0: complex | None = None) -> float:
    """Schwarz-lemma extremal value on a disc: the pseudo-hyperbolic distance of ``z`` to ``z0``."""
    if not isinstance(D, Ball) or D.dimension != 1:
        raise TypeError("closed form is available for planar discs only")
    c = D.center[0]
    z0 = c if z0 is None else complex(z0)
    if not D.contains(z, interior=True) or not D.contains(z0, interior=True):
        raise ValueError(f"point {z} or base point {z0} is not interior to the disc")
    u = (complex(z) - c) / D.radius
    u0 = (z0 - c) / D.radius
    return abs(u - u0) / abs(1 - u0.conjugate() * u)


@dataclass(frozen=True)
class LpProblem:
    """``maximize objective.x`` s.t. ``A_ub x <= b_ub``, ``A_eq x = b_eq``; ``x`` = (Re c, Im c)."""

    objective: np.ndarray
    A_ub: np.ndarray
    b_ub: np.ndarray
    A_eq: np.ndarray
    b_eq: np.ndarray
    degree: int
    slack_bound: float


@dataclass(frozen=True)
class GammaLP:
    value: float
    slack_bound: float
    iterations: int
    coefficients: np.ndarray  # complex, in the normalized polynomial basis of the domain

    def __float__(self):
        return self.value


def _poly_basis(D: CompactSet, m: int):
    """Callable ``w -> (m + 1, M)`` of well-scaled polynomials of degree ``0..m`` on ``D``."""
    if isinstance(D, Ball):
        c, r = D.center[0], D.radius
        return lambda w: ((np.asarray(w, dtype=complex) - c) / r)[None, :] ** np.arange(m + 1)[:, None]
    if isinstance(D, BernsteinEllipse):
        scale = np.array([1.0] + [D.rho ** k for k in range(1, m + 1)])
        return lambda w: chebyshev_table(np.asarray(w, dtype=complex), m) / scale[:, None]
    raise TypeError(f"no polynomial basis for {D.kind}")


def _interior_or_raise(D: CompactSet, *points):
    for p in points:
        if not D.contains(p, interior=True):
            raise ValueError(f"point {p} is not interior to {D}")


def build_gamma_lp(D: CompactSet, z0: complex, z: complex, m: int, plan: SamplingPlan) -> LpProblem:
    """Discretized extremal problem for ``gamma(z)`` over polynomials of degree ``m``."""
    if m < 1:
        raise ValueError("degree m must be >= 1")
    _interior_or_raise(D, z0, z)
    phi = _poly_basis(D, m)
    W = boundary_samples(D, plan)[:, 0]
    V = phi(W)  # (m + 1, J)
    norm = np.abs(V).max(axis=1)
    V = V / norm[:, None]
    th = 2 * np.pi * np.arange(plan.angle_count) / plan.angle_count
    rot = np.exp(1j * th)
    R = (rot[:, None, None] * V[None, :, :]).transpose(0, 2, 1).reshape(-1, m + 1)  # (L*J, m+1)
    A_ub = np.hstack([R.real, -R.imag])
    b_ub = np.ones(A_ub.shape[0])
    p0 = phi(np.array([z0]))[:, 0] / norm
    A_eq = np.vstack([np.concatenate([p0.real, -p0.imag]), np.concatenate([p0.imag, p0.real])])
    b_eq = np.zeros(2)
    pz = phi(np.array([z]))[:, 0] / norm
    obj = np.concatenate([pz.real, -pz.imag])
    return LpProblem(obj, A_ub, b_ub, A_eq, b_eq, m, 1.0 / math.cos(math.pi / plan.angle_count))


def gamma_lp(D: CompactSet, z0: complex, z: complex, m: int = 12, plan: SamplingPlan | None = None) -> GammaLP:
    """LP estimate of ``gamma(z)`` on ``D`` with base point ``z0``."""
    plan = plan or SamplingPlan(128, 64)
    prob = build_gamma_lp(D, z0, z, m, plan)
    res = maximize(prob.objective, prob.A_ub, prob.b_ub, prob.A_eq, prob.b_eq)
    coef = res.x[: m + 1] + 1j * res.x[m + 1:]
    return GammaLP(max(res.value, 0.0), prob.slack_bound, res.iterations, coef)


# --------------------------------------------------------------------------
# curves and verdicts


class Method(str, enum.Enum):
    CLOSED_FORM = "ClosedForm"
    LP = "LP"


@dataclass(frozen=True)
class GammaCurve:
    z: complex
    indices: list[int]
    values: list[float]
    methods: list[Method]
    monotone: bool

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "gamma", "method"])
        for i, v, mth in zip(self.indices, self.values, self.methods):
            w.writerow([i, repr(float(v)), mth.value])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {"z": [self.z.real, self.z.imag], "indices": self.indices, "values": self.values,
                "methods": [m.value for m in self.methods], "monotone": self.monotone}


def _gamma_at(D, z0, z, m, plan, method):
    if method in ("auto", "closed") and isinstance(D, Ball):
        return gamma_closed_form(D, z, z0), Method.CLOSED_FORM
    if method == "closed":
        raise TypeError(f"no closed form on {D.kind}")
    return gamma_lp(D, z0, z, m, plan).value, Method.LP


def gamma_curve(E: ExhaustionSpec, z: complex, m: int = 12, plan: SamplingPlan | None = None,
                method: str = "auto") -> GammaCurve:
    """``gamma_n(z)`` for every domain of ``E`` whose interior contains ``z``.

    ``method`` is ``"auto"`` (closed form on discs, LP elsewhere), ``"lp"``
    or ``"closed"``.  Monotonicity in ``n`` is checked, not enforced.
    """
    z = complex(z)
    idx, vals, meths = [], [], []
    for n, D in enumerate(E.domains):
        if not D.contains(z, interior=True):
            if idx:
                raise ValueError("exhaustion domains must be nested")
            continue
        v, mth = _gamma_at(D, E.z0, z, m, plan, method)
        idx.append(n)
        vals.append(float(v))
        meths.append(mth)
    if not idx:
        raise ValueError(f"{z} lies in no domain of the exhaustion")
    mono = all(b <= a + 1e-6 for a, b in zip(vals, vals[1:]))
    return GammaCurve(z, idx, vals, meths, mono)


class Evidence(str, enum.Enum):
    DECAY = "DecayEvidence"
    PLATEAU = "PlateauEvidence"


@dataclass(frozen=True)
class Verdict:
    """Numerical evidence about the tail of a gamma curve; not a proof."""

    evidence: Evidence
    confident: bool
    limit_estimate: float
    power_slope: float
    detail: str = ""
    label: str = field(default="numerical evidence, not proof")

    def to_dict(self) -> dict:
        return {"evidence": self.evidence.value, "confident": self.confident,
                "limit_estimate": self.limit_estimate, "power_slope": self.power_slope,
                "detail": self.detail, "label": self.label}


def _geometric_limit(v: np.ndarray) -> tuple[float, float] | None:
    """Aitken-style limit of a tail whose successive differences shrink geometrically."""
    d = np.diff(v)
    if d.size < 2 or np.any(d == 0) or np.any(np.sign(d) != np.sign(d[0])):
        return None
    q = d[1:] / d[:-1]
    if q.min() <= 0 or q.max() >= 0.9 or q.max() > 1.1 * q.min():
        return None
    qm = float(np.exp(np.log(q).mean()))
    return float(v[-1] + d[-1] * qm / (1 - qm)), qm


def liouville_verdict(curve: GammaCurve, tol: float = 1e-2) -> Verdict:
    """Classify the tail of ``curve`` as decaying to 0 or plateauing above ``tol``.

    The tail is the second half of the curve (at least 3 points), fitted by a
    power law ``v ~ n**p`` in the exhaustion index; ``p <= -0.5`` counts as
    decay.  Otherwise, when the differences shrink at a steady geometric
    ratio the limit is extrapolated and compared with ``tol``.  A flat tail
    (``|p| < 0.05``, relative spread under 5%) is a plateau; anything else a
    low-confidence plateau.
    """
    v = np.asarray(curve.values, dtype=float)
    if v.size < 4:
        raise ValueError("need at least 4 curve values")
    n = np.asarray(curve.indices, dtype=float) + 1.0
    tail = slice(min(v.size // 2, v.size - 3), None)
    vt, nt = v[tail], n[tail]
    if vt.max() <= tol:
        return Verdict(Evidence.DECAY, True, float(vt[-1]), -math.inf, "tail already below tolerance")
    if np.any(vt <= 0):
        return Verdict(Evidence.DECAY, False, 0.0, -math.inf, "tail reaches zero")
    p = float(np.polyfit(np.log(nt), np.log(vt), 1)[0])
    if p <= -0.5:
        return Verdict(Evidence.DECAY, True, 0.0, p, "power-law decay of the tail")
    geo = _geometric_limit(vt)
    if geo is not None:
        lim, q = geo
        if lim > tol:
            return Verdict(Evidence.PLATEAU, True, lim, p, f"geometric convergence (ratio {q:.3g}) to a positive limit")
        return Verdict(Evidence.DECAY, True, max(lim, 0.0), p, f"geometric convergence (ratio {q:.3g}) to ~0")
    spread = float((vt.max() - vt.min()) / vt.max())
    if abs(p) < 0.05 and spread < 0.05:
        return Verdict(Evidence.PLATEAU, True, float(vt[-1]), p, "flat tail above tolerance")
    return Verdict(Evidence.PLATEAU, False, float(vt[-1]), p, "ambiguous tail")


# --------------------------------------------------------------------------
# Schwarz property and Borel-Caratheodory


def _k_grid(K: CompactSet, count: int) -> np.ndarray:
    return boundary_samples(K, SamplingPlan(count))[:, 0]


def schwarz_property_K1(E: ExhaustionSpec, K: CompactSet, delta: float, m: int = 12,
                        plan: SamplingPlan | None = None, grid_count: int = 16,
                        method: str = "auto") -> int:
    """Smallest index ``n1`` with ``max_K gamma_{n1} <= delta``.

    Then ``|f - f(z0)|_K <= delta |f - f(z0)|_{K1}`` with ``K1`` the closure
    of ``E.domains[n1]``.  ``gamma`` is the upper envelope of moduli of
    analytic functions, so its max over ``K`` is taken on the boundary grid.
    A domain whose closure contains ``K`` but not in its interior is only
    credited with the trivial bound ``gamma <= 1``.
    """
    if delta <= 0:
        raise ValueError("delta must be > 0")
    pts = _k_grid(K, grid_count)
    for n, D in enumerate(E.domains):
        if not all(D.contains(p) for p in pts):
            continue
        if all(D.contains(p, interior=True) for p in pts):
            g = max(_gamma_at(D, E.z0, p, m, plan, method)[0] for p in pts)
        else:
            g = 1.0
        if g <= delta + 1e-12:
            return n
    raise SchwarzPropertyError(f"no domain of the exhaustion reaches delta={delta} on {K}")


def default_bc_corpus(size: int = 100, seed: int = 0, degree: int = 12) -> list[TruncatedSeries]:
    """Seeded one-variable series with decays spread over ``[0.2, 0.9]``."""
    rng = np.random.default_rng(seed)
    decays = rng.uniform(0.2, 0.9, size)
    return [random_series(1, degree, float(dc), int(rng.integers(2**63))) for dc in decays]


def borel_caratheodory_general(E: ExhaustionSpec, K: CompactSet, epsilon: float,
                               corpus: Sequence[TruncatedSeries] | None = None, m: int = 12,
                               plan: SamplingPlan | None = None, tol: float = 1e-9) -> tuple[int, dict]:
    """Find ``K1`` with ``|f - f(z0)|_K <= epsilon sup_{K1} Re(f - f(z0))`` and check it on a corpus.

    ``K1`` comes from the Schwarz property with ``delta = epsilon/(2 + epsilon)``:
    for ``f(z0) = 0`` and ``A = sup_{K1} Re f`` the map ``f/(2A - f)`` is
    bounded by 1 on ``K1``, whence ``|f| <= 2 delta A/(1 - delta) = epsilon A`` on ``K``.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    delta = epsilon / (2 + epsilon)
    n1 = schwarz_property_K1(E, K, delta, m, plan)
    K1 = E.domains[n1]
    corpus = default_bc_corpus() if corpus is None else list(corpus)
    sp = SamplingPlan(256)
    z0 = np.array([[E.z0]])
    worst, witness, violations, checked = math.inf, None, 0, 0
    for i, f in enumerate(corpus):
        g = f - TruncatedSeries.constant(complex(f(z0)[0]), 1)
        lhs = sup_norm(g, K, sp)
        rhs = epsilon * sup_real(g, K1, sp) if len(g.without_constant()) else 0.0
        slack = rhs - lhs
        checked += 1
        if slack < worst:
            worst, witness = slack, i
        if lhs > rhs + tol:
            violations += 1
    report = {
        "epsilon": epsilon,
        "delta": delta,
        "index": n1,
        "K1": K1.to_dict(),
        "checked": checked,
        "violations": violations,
        "worst_slack": worst if checked else None,
        "witness": None if witness is None or violations == 0 else corpus[witness].to_dict(),
        "holds": violations == 0,
    }
    return n1, report
