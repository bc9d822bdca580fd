"""Independent reference computations used by the tests.

Nothing here imports the package under test.  Each function is either a
closed form or a brute-force route that shares no code with the library.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import chebyshev as npcheb


def geometric_partial_sum(q: complex, N: int) -> complex:
    """sum_{n=0}^{N} q**n."""
    return (1 - q ** (N + 1)) / (1 - q)


def faber_sup_on_ellipse(n: int, rho: float) -> float:
    """|F_n| on the Bernstein ellipse E_rho, with F_0 = 1 and F_n = 2 T_n."""
    return 1.0 if n == 0 else rho ** n + rho ** -n


def faber_value(n: int, z) -> np.ndarray:
    """F_n(z) via numpy's Chebyshev series evaluation."""
    z = np.asarray(z, dtype=complex)
    if n == 0:
        return np.ones_like(z)
    c = np.zeros(n + 1)
    c[n] = 2.0
    return npcheb.chebval(z, c)


def mobius_bohr_radius(a: float) -> float:
    """Root of a + (1 - a**2) r / (1 - a r) = 1."""
    return 1.0 / (1.0 + 2.0 * a)


def pseudo_hyperbolic(z: complex, w: complex) -> float:
    return abs(z - w) / abs(1 - w.conjugate() * z)


def _refined_max(g, n: int) -> float:
    """max of a 2 pi periodic g: dense grid, then Brent refinement around the best node."""
    from scipy.optimize import minimize_scalar

    t = np.linspace(0, 2 * np.pi, n, endpoint=False)
    v = g(t)
    k = int(np.argmax(v))
    h = 2 * np.pi / n
    res = minimize_scalar(lambda s: -g(np.array([s]))[0], bounds=(t[k] - h, t[k] + h), method="bounded",
                          options={"xatol": 1e-13})
    return float(max(v[k], -res.fun))


def brute_sup_circle(f, center: complex, radius: float, n: int = 200_000) -> float:
    """max |f| on a circle; f acts on a 1-d complex array."""
    return _refined_max(lambda t: np.abs(f(center + radius * np.exp(1j * t))), n)


def brute_sup_ellipse(f, rho: float, n: int = 200_000) -> float:
    def g(t):
        w = rho * np.exp(1j * t)
        return np.abs(f((w + 1 / w) / 2))

    return _refined_max(g, n)


def horner(coefs, z):
    """sum coefs[n] z**n by Horner's rule."""
    out = np.zeros_like(np.asarray(z, dtype=complex))
    for c in reversed(list(coefs)):
        out = out * z + c
    return out


def exp_taylor(n: int) -> float:
    return 1.0 / math.factorial(n)


def ratio_partial_sum(lam: float, n_max: int = 64) -> float:
    """sum_{n=1}^{n_max} lam**-n = 1/(lam - 1) - lam**-n_max/(lam - 1)."""
    return 1 / (lam - 1) - lam ** -n_max / (lam - 1)


def linprog_max(c, A_ub, b_ub, A_eq=None, b_eq=None) -> float:
    """Optimum of max c.x via scipy's HiGHS (free variables)."""
    from scipy.optimize import linprog

    res = linprog(-np.asarray(c), A_ub=A_ub, b_ub=b_ub, A_eq=A_eq, b_eq=b_eq,
                  bounds=[(None, None)] * len(c), method="highs")
    if res.status != 0:
        raise RuntimeError(res.message)
    return -res.fun
