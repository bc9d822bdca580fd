"""Constructive Bohr certificates: from a ball ``B(r)`` to a ball ``B(R)``.

Given a basis ``(phi_n)`` with ``phi_0 = 1`` and a ball ``B(r)`` about the
origin, the pipeline produces ``R`` such that

    sum_n |f_n| |phi_n|_{B(r)} <= |f|_{B(R)}

for every entire ``f = sum f_n phi_n``, and then checks this on a corpus.

The chain of estimates, for ``g = f - f(0)``:

* absolute-basis constant ``C``: ``sum_{n>=1} |f_n| |phi_n|_{K'} <= C |g|_{B(r1)}``
  (Cauchy estimates for monomials, Chebyshev coefficient decay for Faber);
* Borel-Caratheodory: ``|g|_{B(r1)} <= 2 r1/(R - r1) sup_{B(R)} Re g``, which
  equals ``sup Re g / C`` at ``R = (2C + 1) r1``;
* after rotating ``f(0) >= 0``, ``f(0) + sup Re g = sup Re f <= |f|_{B(R)}``.

When every ``phi_n(0)`` vanishes (monomials) ``K' = B(r)`` and this is the whole
proof.  Otherwise ``K' = B(r_tilde)`` where ``r_tilde >= 3r`` makes
``|phi_n(0)| <= |phi_n|_{B(r_tilde)}/4``; with the Schwarz step
``|psi_n|_{B(r)} <= |psi_n|_{B(3r)}/3`` for ``psi_n = phi_n - phi_n(0)`` one gets
``|phi_n|_{B(r)} <= (2/3)|phi_n|_{B(r_tilde)}`` and
``|f_0| <= f(0) + (1/4) sup Re g``, which again sums to ``sup Re f``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import __version__
from .bases import (BasisFamily, CombinationBatch, ExpansionBudget, FaberSegment, Monomial,
                    as_coefficients, basis_from_dict, coefficient_matrix, extract_coefficients, member_sups)
from .compact import Ball, BernsteinEllipse, CompactSet, SamplingPlan, Segment, boundary_samples, dilate
from .radius import random_faber_corpus
from .series import TruncatedSeries, random_series
from .supnorm import sup_batch, sup_norm, sup_real

SCHEMA = "bohr-lab/1"
VALID_SLACK = -1e-9
VERIFY_SLACK = -1e-6
N_MAX = 64


class CertificateError(ValueError):
    """Input rejected before any certificate is assembled."""


class RTildeError(RuntimeError):
    def __init__(self, worst_index, ratio: float, cap: float):
        self.worst_index = worst_index
        self.ratio = ratio
        super().__init__(f"no dilation up to {cap} brings |phi_n(0)|/|phi_n| below 1/4; "
                         f"worst index {worst_index} (ratio {ratio:.4g})")


# --------------------------------------------------------------------------
# absolute-basis constants


@dataclass(frozen=True)
class BasisConstant:
    value: float
    certified: bool
    method: str
    detail: dict = field(default_factory=dict)

    def __float__(self):
        return self.value


def _green_parameter_of_ball_cover(r: float) -> float:
    """Smallest ``rho`` with ``B(0, r) ⊆ E_rho`` (semi-minor axis equal to ``r``)."""
    return r + math.sqrt(r * r + 1)


def _green_parameter_inside_ball(r1: float) -> float:
    """Largest ``rho`` with ``E_rho ⊆ B(0, r1)`` (semi-major axis equal to ``r1``)."""
    if r1 <= 1:
        return 1.0
    return r1 + math.sqrt(r1 * r1 - 1)


def _faber_sum(rho: float, rho1: float) -> float:
    """``1 + sum_{n>=1} rho1**-n (rho**n + rho**-n)``."""
    q1, q2 = rho / rho1, 1 / (rho * rho1)
    return 1 + q1 / (1 - q1) + q2 / (1 - q2)


def absolute_basis_constant(B: BasisFamily, r: float, r1: float, geometry: str = "auto",
                            plan: SamplingPlan | None = None, samples: int = 100, seed: int = 0) -> BasisConstant:
    """``C`` with ``sum_n |f_n| |phi_n|_K <= C |f|_{K1}`` for all ``f`` analytic near ``K1``.

    * Monomial in ``d`` variables, ``K = P(r)``, ``K1 = P(r1)``: ``(r1/(r1 - r))**d``
      from Cauchy estimates.
    * FaberSegment with ``geometry="green"``: ``r`` and ``r1`` are ellipse
      parameters ``rho < rho1`` and ``C = 1 + sum rho1**-n (rho**n + rho**-n)``
      from ``|a_n| <= 2 rho1**-n |f|_{E_rho1}``.
    * FaberSegment with ``geometry="ball"``: discs ``B(r) ⊆ E_rho ⊆ E_rho1 ⊆ B(r1)``,
      then the Green formula.
    * anything else: empirical lower bound over random coefficient vectors,
      flagged as not certified.
    """
    r, r1 = float(r), float(r1)
    if not 0 < r < r1:
        raise CertificateError(f"need 0 < r < r1, got r={r}, r1={r1}")
    if isinstance(B, Monomial):
        d = B.dimension
        return BasisConstant((r1 / (r1 - r)) ** d, True, "cauchy-polydisc", {"dimension": d})
    if isinstance(B, FaberSegment):
        if geometry == "auto":
            geometry = "green"
        if geometry == "green":
            if r < 1:
                raise CertificateError("Green parameters are >= 1")
            return BasisConstant(_faber_sum(r, r1), True, "chebyshev-green", {"rho": r, "rho1": r1})
        if geometry == "ball":
            rho, rho1 = _green_parameter_of_ball_cover(r), _green_parameter_inside_ball(r1)
            if rho1 <= rho:
                raise CertificateError(f"B({r1}) does not contain an ellipse enclosing B({r})")
            return BasisConstant(_faber_sum(rho, rho1), True, "chebyshev-ellipse-sandwich",
                                 {"rho": rho, "rho1": rho1})
        raise ValueError(f"unknown geometry {geometry!r}")
    return _empirical_constant(B, r, r1, plan or SamplingPlan(128), samples, seed)


def _empirical_constant(B, r, r1, plan, samples, seed) -> BasisConstant:
    rng = np.random.default_rng(seed)
    idx = B.indices(8)
    K, K1 = Ball(0.0, r, B.dimension), Ball(0.0, r1, B.dimension)
    C = rng.normal(size=(samples, len(idx))) + 1j * rng.normal(size=(samples, len(idx)))
    C *= (r / r1) ** np.array([B.degree(n) for n in idx])
    lhs = np.abs(C) @ member_sups(B, idx, K, plan)
    rhs = sup_batch(CombinationBatch(B, idx, C), K1, plan).value
    return BasisConstant(float(np.max(lhs / rhs)), False, "empirical", {"samples": samples, "seed": seed})


# --------------------------------------------------------------------------
# the two one-line inequalities of the chain


def schwarz_step(f, r: float, plan: SamplingPlan | None = None) -> tuple[float, float]:
    """``(|f|_{B(r)}, |f|_{B(3r)}/3)`` for ``f`` vanishing at the origin."""
    plan = plan or SamplingPlan(256)
    d = f.dimension if isinstance(f, TruncatedSeries) else 1
    f0 = complex(f(np.zeros((1, d)))[0])
    if abs(f0) > 1e-12:
        raise CertificateError(f"f(0) = {f0} is not zero")
    return sup_norm(f, Ball(0.0, r, d), plan), sup_norm(f, Ball(0.0, 3 * r, d), plan) / 3


def borel_caratheodory_check(f, r1: float, r2: float, plan: SamplingPlan | None = None) -> tuple[float, float]:
    """``(|g|_{B(r1)}, 2 r1/(r2 - r1) sup_{B(r2)} Re g)`` for ``g = f - f(0)``."""
    if not 0 < r1 < r2:
        raise CertificateError("need 0 < r1 < r2")
    plan = plan or SamplingPlan(256)
    d = f.dimension if isinstance(f, TruncatedSeries) else 1
    f0 = complex(f(np.zeros((1, d)))[0])
    if isinstance(f, TruncatedSeries):
        g = f - TruncatedSeries.constant(f0, d)
    else:
        g = lambda Z: f(Z) - f0  # noqa: E731
    lhs = sup_norm(g, Ball(0.0, r1, d), plan)
    rhs = 2 * r1 / (r2 - r1) * sup_real(g, Ball(0.0, r2, d), plan)
    return lhs, rhs


# --------------------------------------------------------------------------
# r_tilde


def ratio_sum(B: BasisFamily, K: CompactSet, K1: CompactSet, n_max: int = N_MAX,
              plan: SamplingPlan | None = None) -> float:
    """``sum_{1 <= deg n <= n_max} |phi_n|_K / |phi_n|_{K1}``."""
    plan = plan or SamplingPlan(256)
    idx = B.indices(n_max, 1)
    return float(np.sum(member_sups(B, idx, K, plan) / member_sups(B, idx, K1, plan)))


@dataclass(frozen=True)
class RTilde:
    compact: CompactSet
    factor: float
    max_ratios: list[float]
    factors_tested: list[float]

    @property
    def radius(self) -> float:
        if isinstance(self.compact, Ball):
            return self.compact.radius
        if isinstance(self.compact, BernsteinEllipse):
            return self.compact.rho
        raise TypeError("r_tilde radius is defined for balls and ellipses")


def find_r_tilde(B: BasisFamily, K: CompactSet, n_max: int = N_MAX, plan: SamplingPlan | None = None,
                 max_doublings: int = 12) -> RTilde:
    """Smallest dilation ``dilate(K, 3 * 2**j)`` on which ``|phi_n(0)| <= |phi_n|/4`` for ``1 <= deg n <= n_max``.

    Members are unbounded, so ratios shrink as the compact grows; the
    recorded per-factor maxima document this.  Beyond ``n_max`` the sups grow
    geometrically in ``n`` for both shipped families while ``|phi_n(0)|`` stays
    bounded, so the tail only helps.
    """
    plan = plan or SamplingPlan(256)
    idx = B.indices(n_max, 1)
    d = B.dimension
    at0 = np.abs(B.values(B.prepare(idx), np.zeros((1, d)))[:, 0])
    factors, maxima = [], []
    if not np.any(at0 > 0):
        return RTilde(dilate(K, 3.0), 3.0, [0.0], [3.0])
    ratios = None
    for j in range(max_doublings):
        lam = 3.0 * 2 ** j
        Kt = dilate(K, lam)
        ratios = at0 / member_sups(B, idx, Kt, plan)
        factors.append(lam)
        maxima.append(float(ratios.max()))
        if ratios.max() <= 0.25:
            return RTilde(Kt, lam, maxima, factors)
    worst = int(np.argmax(ratios))
    raise RTildeError(idx[worst], float(ratios[worst]), factors[-1])


# --------------------------------------------------------------------------
# certificates


@dataclass(frozen=True)
class GbpCertificate:
    basis: BasisFamily
    r: float
    r1: float
    C: float
    r_tilde: float
    R: float
    checked_count: int
    worst_slack: float
    certified: bool  # C comes from a proof, not from sampling
    shift_needed: bool
    witness: dict | None = None
    metadata: dict = field(default_factory=dict)

    @property
    def valid(self) -> bool:
        return self.worst_slack >= VALID_SLACK

    @property
    def compact(self) -> Ball:
        return Ball(0.0, self.r, self.basis.dimension)

    @property
    def output_compact(self) -> Ball:
        return Ball(0.0, self.R, self.basis.dimension)

    def to_dict(self, plan: SamplingPlan | None = None) -> dict:
        out = {
            "schema": SCHEMA,
            "tool_version": __version__,
            "basis": self.basis.to_dict(),
            "r": self.r,
            "r1": self.r1,
            "C": self.C,
            "r_tilde": self.r_tilde,
            "R": self.R,
            "checked_count": self.checked_count,
            "worst_slack": self.worst_slack,
            "certified": self.certified,
            "shift_needed": self.shift_needed,
            "valid": self.valid,
            "witness": self.witness,
            "metadata": self.metadata,
        }
        if plan is not None:
            out["plan"] = plan.to_dict()
        return out

    @classmethod
    def from_dict(cls, data: Mapping) -> "GbpCertificate":
        if data.get("schema") != SCHEMA:
            raise ValueError(f"unknown certificate schema {data.get('schema')!r}")
        return cls(basis_from_dict(data["basis"]), data["r"], data["r1"], data["C"], data["r_tilde"], data["R"],
                   data["checked_count"], data["worst_slack"], data["certified"], data["shift_needed"],
                   data.get("witness"), data.get("metadata", {}))


def save_certificate(cert: GbpCertificate, path, plan: SamplingPlan | None = None) -> None:
    Path(path).write_text(json.dumps(cert.to_dict(plan), indent=2, sort_keys=True) + "\n")


def load_certificate(path) -> tuple[GbpCertificate, SamplingPlan | None]:
    data = json.loads(Path(path).read_text())
    plan = SamplingPlan(**data["plan"]) if "plan" in data else None
    return GbpCertificate.from_dict(data), plan


def _default_degree(d: int) -> int:
    return {1: 24, 2: 10, 3: 6}.get(d, 4)


def default_corpus(B: BasisFamily, size: int, seed: int) -> list[dict]:
    """Seeded coefficient dicts for ``B``; the first entry is the constant 1."""
    if size < 1:
        raise ValueError("corpus size must be >= 1")
    out: list[dict] = [{B.constant_index: 1.0}]
    rng = np.random.default_rng([seed, 17])
    if isinstance(B, FaberSegment):
        for s in rng.integers(2**63, size=size - 1):
            out.append(random_faber_corpus(1, 12, int(s))[0])
        return out
    d = B.dimension
    for dec, s in zip(rng.uniform(0.05, 0.6, size - 1), rng.integers(2**63, size=size - 1)):
        f = random_series(d, _default_degree(d), float(dec), int(s))
        out.append(as_coefficients(f, B))
    return out


@dataclass(frozen=True)
class CorpusCheck:
    checked: int
    violations: int
    worst_slack: float
    witness: dict | None

    def to_dict(self) -> dict:
        return {"checked": self.checked, "violations": self.violations, "worst_slack": self.worst_slack,
                "witness": self.witness}


def check_inequality(B: BasisFamily, K: CompactSet, G: CompactSet, corpus: Sequence, plan: SamplingPlan,
                     tol: float = 1e-9) -> CorpusCheck:
    """``|f|_G - majorant(f, B, K)`` over a corpus of coefficient tables."""
    coeffs = [as_coefficients(f, B) for f in corpus]
    support, C = coefficient_matrix(B, coeffs)
    lhs = np.abs(C) @ member_sups(B, support, K, plan)
    rhs = sup_batch(CombinationBatch(B, support, C), G, plan).value
    slack = rhs - lhs
    i = int(np.argmin(slack))
    bad = int(np.sum(slack < -tol))
    witness = None
    if bad:
        witness = {"index": i, "coefficients": [[_index_json(n), complex(c).real, complex(c).imag]
                                                for n, c in coeffs[i].items()]}
    return CorpusCheck(len(coeffs), bad, float(slack[i]), witness)


def _index_json(n):
    return list(n) if isinstance(n, tuple) else int(n)


def certify(B: BasisFamily, r: float, corpus: Sequence | None = None, plan: SamplingPlan | None = None,
            r1: float | None = None, corpus_size: int = 200, seed: int = 0) -> GbpCertificate:
    """Assemble ``(r1, C, r_tilde, R)`` for ``B`` on ``B(r)`` and check the inequality on a corpus."""
    if not B.has_constant_member():
        raise CertificateError("the basis must contain the constant function 1 as member 0")
    r = float(r)
    if r <= 0:
        raise CertificateError("r must be > 0")
    plan = plan or SamplingPlan(128)
    d = B.dimension
    K = Ball(0.0, r, d)
    rt = find_r_tilde(B, K, plan=plan)
    shift_needed = rt.max_ratios != [0.0]
    inner = rt.radius if shift_needed else r
    if r1 is None:
        r1 = 2 * inner
        if isinstance(B, FaberSegment):
            while _green_parameter_inside_ball(r1) <= _green_parameter_of_ball_cover(inner):
                r1 *= 2
    r1 = float(r1)
    const = absolute_basis_constant(B, inner, r1, geometry="ball", plan=plan)
    inflate = math.sqrt(d) if d > 1 else 1.0
    R = (2 * const.value + 1) * r1 * inflate
    if corpus is None:
        corpus = default_corpus(B, corpus_size, seed)
    res = check_inequality(B, K, Ball(0.0, R, d), corpus, plan)
    meta = {
        "constant_method": const.method,
        "constant_detail": const.detail,
        "inner_radius": inner,
        "ball_radius_of_r1": r1 * inflate,
        "r_tilde_factors": rt.factors_tested,
        "r_tilde_max_ratios": rt.max_ratios,
        "n_max": N_MAX,
        "tail_argument": "member sups grow geometrically in the degree while |phi_n(0)| stays bounded",
        "corpus_relative": True,
        "corpus_seed": seed,
        "violations": res.violations,
    }
    if isinstance(B, Monomial) and d == 1:
        classical = check_inequality(B, K, Ball(0.0, 3 * r), corpus, plan)
        meta["classical_dilation_3"] = classical.to_dict() | {"witness": None}
    return GbpCertificate(B, r, r1, const.value, rt.radius, R, res.checked, res.worst_slack, const.certified,
                          shift_needed, res.witness, meta)


@dataclass(frozen=True)
class Verification:
    check: CorpusCheck
    seed: int
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.check.worst_slack >= self.tolerance

    def to_dict(self) -> dict:
        return self.check.to_dict() | {"seed": self.seed, "tolerance": self.tolerance, "ok": self.ok}


def verify_certificate(cert: GbpCertificate, seed: int, corpus_size: int = 200,
                       plan: SamplingPlan | None = None, tolerance: float = VERIFY_SLACK) -> Verification:
    """Re-check a certificate's inequality on a fresh corpus."""
    plan = plan or SamplingPlan(128)
    corpus = default_corpus(cert.basis, corpus_size, seed)
    res = check_inequality(cert.basis, cert.compact, cert.output_compact, corpus, plan, tol=-tolerance)
    return Verification(res, seed, tolerance)


def _contains_ball(G: CompactSet, R: float, d: int) -> bool:
    if isinstance(G, Ball):
        return float(np.linalg.norm(np.asarray(G.center))) + R <= G.radius * (1 + 1e-12)
    if isinstance(G, BernsteinEllipse):
        return d == 1 and G.semi_axes[1] >= R
    pts = boundary_samples(Ball(0.0, R, d), SamplingPlan(256))
    return all(G.contains(p) for p in pts)


def transfer_to_compact(cert: GbpCertificate, G: CompactSet, f, plan: SamplingPlan | None = None,
                      tol: float = 1e-9, budget: ExpansionBudget | None = None) -> bool:
    """Check ``majorant(f, B, B(r)) <= |f|_G`` for a compact ``G ⊇ B(R)``.

    ``f`` is a coefficient table, or a callable whose expansion is extracted
    first (a non-converged expansion raises :class:`ExpansionError`).
    """
    if not cert.valid:
        raise CertificateError("certificate is not valid")
    if isinstance(G, Segment) or not _contains_ball(G, cert.R, cert.basis.dimension):
        raise CertificateError(f"{G} does not contain B({cert.R})")
    plan = plan or SamplingPlan(256)
    if callable(f) and not isinstance(f, TruncatedSeries):
        budget = budget or ExpansionBudget(radius=1.25 * cert.R)
        f = extract_coefficients(cert.basis, f, budget, plan).coefficients
    c = as_coefficients(f, cert.basis)
    res = check_inequality(cert.basis, cert.compact, G, [c], plan, tol)
    return res.violations == 0
