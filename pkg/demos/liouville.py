"""Extremal gamma curves on two exhaustions and the tail verdicts they produce.

On growing discs the values fall like 1/n; on discs filling the unit disc
they level off at |z|.  The LP route on Bernstein ellipses is shown too.

Run:  python3 demos/liouville.py
"""

from bohrlab.compact import Ball, SamplingPlan
from bohrlab.gamma import (ellipse_exhaustion, gamma_curve, liouville_verdict, plane_by_balls,
                           schwarz_property_K1, unit_disc_by_balls)

for name, E in (("growing discs", plane_by_balls(8)), ("unit disc", unit_disc_by_balls(8)),
                ("ellipses", ellipse_exhaustion([1.5, 2.5, 4, 6.5, 10]))):
    curve = gamma_curve(E, 0.5, m=10, plan=SamplingPlan(64, 32))
    v = liouville_verdict(curve)
    vals = " ".join(f"{x:.4f}" for x in curve.values)
    print(f"{name:>13}: {vals}\n{'':>15}{v.evidence.value} (confident={v.confident}), limit ~ {v.limit_estimate:.4f}")

for delta in (1.0, 0.5, 0.25, 0.1):
    n1 = schwarz_property_K1(plane_by_balls(16), Ball(0, 1), delta)
    print(f"delta={delta:<5} first disc with max gamma <= delta on the unit disc: radius {n1 + 1}")
