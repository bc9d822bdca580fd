"""Numerical Bohr inequalities for bases of entire functions.

Truncated power series and compact sets (:mod:`series`, :mod:`compact`),
sampled sup norms (:mod:`supnorm`), the monomial and Faber bases
(:mod:`bases`), majorants and Bohr radii (:mod:`radius`), constructive
certificates (:mod:`certify`) and extremal functions on exhaustions
(:mod:`gamma`).
"""

__version__ = "0.1.0"

from .series import TruncatedSeries, evaluate, multi_indices, random_series  # noqa: E402
from .compact import (Ball, BernsteinEllipse, Polydisc, SamplingPlan, Segment, boundary_samples,  # noqa: E402
                      dilate)
from .supnorm import sup_estimate, sup_norm, sup_real  # noqa: E402
from .bases import (ExpansionBudget, FaberSegment, Monomial, Shifted, basis_eval,  # noqa: E402
                    extract_coefficients, shift_basis)
from .radius import (faber_bohr_R0, individual_bohr_radius, kappa_upper_search, majorant,  # noqa: E402
                     majorant_curve, mobius_series)
from .certify import (GbpCertificate, absolute_basis_constant, borel_caratheodory_check, certify,  # noqa: E402
                      find_r_tilde, ratio_sum, transfer_to_compact, schwarz_step, verify_certificate)
from .gamma import (ExhaustionSpec, borel_caratheodory_general, gamma_closed_form, gamma_curve,  # noqa: E402
                    gamma_lp, liouville_verdict, plane_by_balls, schwarz_property_K1, unit_disc_by_balls)

__all__ = [
    "TruncatedSeries", "evaluate", "multi_indices", "random_series",
    "Ball", "BernsteinEllipse", "Polydisc", "SamplingPlan", "Segment", "boundary_samples", "dilate",
    "sup_estimate", "sup_norm", "sup_real",
    "ExpansionBudget", "FaberSegment", "Monomial", "Shifted", "basis_eval", "extract_coefficients", "shift_basis",
    "faber_bohr_R0", "individual_bohr_radius", "kappa_upper_search", "majorant", "majorant_curve",
    "mobius_series",
    "GbpCertificate", "absolute_basis_constant", "borel_caratheodory_check", "certify", "find_r_tilde",
    "ratio_sum", "transfer_to_compact", "schwarz_step", "verify_certificate",
    "ExhaustionSpec", "borel_caratheodory_general", "gamma_closed_form", "gamma_curve", "gamma_lp",
    "liouville_verdict", "plane_by_balls", "schwarz_property_K1", "unit_disc_by_balls",
]
