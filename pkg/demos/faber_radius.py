"""Ellipse level R0 past which the Faber majorant is dominated on random samples.

Run:  python3 demos/faber_radius.py
"""

from bohrlab.radius import faber_bohr_R0, random_faber_corpus

corpus = random_faber_corpus(80, degree=12, seed=0)
for k in (5, 10, 20, 40, 80):
    est = faber_bohr_R0(corpus[:k])
    print(f"{k:3d} functions: R0 in [{est.lower:.5f}, {est.upper:.5f}]")

# a purely imaginary perturbation of 1 needs the ellipse rho - 1/rho = 2
print(faber_bohr_R0([{0: 1.0, 1: 0.2j}]).upper, "vs", 1 + 2 ** 0.5)
