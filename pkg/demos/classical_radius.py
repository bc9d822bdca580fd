"""Recover the one-variable Bohr radius and the radius of single Moebius maps.

Run:  python3 demos/classical_radius.py
"""

from bohrlab import Ball, Monomial, SamplingPlan
from bohrlab.radius import ball_family, individual_bohr_radius, kappa_upper_search, mobius_radius, mobius_series

est = kappa_upper_search(1, budget=200, seed=1)
print(f"kappa_1 in [{est.lower:.5f}, {est.upper:.5f}]  (exact value 1/3)")

plan, K = SamplingPlan(128), Ball(0, 1 - 1e-4)
print("\n   a   numeric   1/(1+2a)")
for a in (0.3, 0.5, 0.7, 0.9):
    r = individual_bohr_radius(mobius_series(a), Monomial(1), ball_family(1), K, plan)
    print(f"{a:4.1f}   {r.value:.5f}   {mobius_radius(a):.5f}")
