"""Quick sanity checks with exact answers, run by ``bohr selftest``."""

from __future__ import annotations

import math
from typing import Callable

import numpy as np


def _checks() -> list[tuple[str, Callable[[], bool]]]:
    from .bases import ExplicitBasis, FaberSegment, Monomial, basis_eval
    from .certify import CertificateError, certify, schwarz_step
    from .compact import Ball, SamplingPlan, Segment, boundary_samples, dilate
    from .gamma import gamma_closed_form, gamma_lp, plane_by_balls, schwarz_property_K1
    from .radius import ball_family, individual_bohr_radius, majorant
    from .series import TruncatedSeries, evaluate, random_series

    plan = SamplingPlan(64)
    z = TruncatedSeries.from_univariate([0, 1])

    def rejects_nonconstant_basis():
        members = (lambda Z: Z[:, 0],)
        try:
            certify(ExplicitBasis(members, 1), 1.0, corpus=[{0: 1.0}], plan=plan)
        except CertificateError:
            return True
        return False

    return [
        ("constant series evaluates to 1", lambda: evaluate(TruncatedSeries.constant(1.0), 5 + 2j) == 1),
        ("z1*z2 at (2, 3) is 6", lambda: evaluate(TruncatedSeries.monomial((1, 1)), (2, 3)) == 6),
        ("unit circle samples have modulus 1",
         lambda: np.allclose(np.abs(boundary_samples(Ball(0, 1), SamplingPlan(8))), 1)),
        ("segment samples lie in [-1, 1]",
         lambda: bool(np.all(np.abs(boundary_samples(Segment(), SamplingPlan(8)).real) <= 1))),
        ("dilate by 1 is the identity", lambda: dilate(Ball(0, 2), 1) == Ball(0, 2)),
        ("dilate(Ball(0,2), 3) = Ball(0,6)", lambda: dilate(Ball(0, 2), 3) == Ball(0, 6)),
        ("random_series with decay 0 is constant", lambda: len(random_series(1, 9, 0.0, 1).without_constant()) == 0),
        ("z^3 at 2 is 8", lambda: basis_eval(Monomial(1), 3, 2) == 8),
        ("F_2(1) = 2", lambda: abs(basis_eval(FaberSegment(), 2, 1) - 2) < 1e-15),
        ("majorant of 1 is 1", lambda: majorant({0: 1.0}, Monomial(1), Ball(0, 3), plan) == 1),
        ("Bohr radius of z is saturated at 1",
         lambda: individual_bohr_radius(z, Monomial(1), ball_family(1), Ball(0, 1), plan).saturated),
        ("Schwarz step is sharp for z", lambda: math.isclose(*schwarz_step(z, 1.0, plan), rel_tol=1e-12)),
        ("gamma vanishes at the base point", lambda: gamma_closed_form(Ball(0, 2), 0) == 0),
        ("LP gamma vanishes at the base point", lambda: gamma_lp(Ball(0, 2), 0, 0, 4, SamplingPlan(32, 16)).value
         < 1e-9),
        ("delta >= 1 gives the first domain", lambda: schwarz_property_K1(plane_by_balls(3), Ball(0, 1), 1.0) == 0),
        ("a basis without constant member is rejected", rejects_nonconstant_basis),
    ]


def run_all() -> list[dict]:
    out = []
    for name, check in _checks():
        try:
            ok, err = bool(check()), None
        except Exception as exc:  # report, do not abort the suite
            ok, err = False, f"{type(exc).__name__}: {exc}"
        out.append({"name": name, "ok": ok} | ({"error": err} if err else {}))
    return out
