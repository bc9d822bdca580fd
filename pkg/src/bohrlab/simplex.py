"""Dense two-phase revised simplex for small linear programs.

The extremal problems in :mod:`bohrlab.gamma` have few variables (the real
and imaginary parts of polynomial coefficients) and many inequality rows
(boundary samples times half-planes).  :func:`maximize` therefore solves the
*dual* problem, whose basis is only as large as the number of primal
variables, and reads the primal solution off the simplex multipliers.

Primal (``x`` free)::

    maximize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq

Dual (standard form, ``lam >= 0``)::

    minimize g.lam  subject to  G lam = c,
    G = [A_ub^T, A_eq^T, -A_eq^T],  g = [b_ub, b_eq, -b_eq]
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


_PERTURB = 1e-9


class LPError(RuntimeError):
    """Raised on non-convergence, unboundedness or infeasibility."""

    def __init__(self, message: str, iterations: int = 0):
        self.iterations = iterations
        super().__init__(f"{message} (after {iterations} iterations)")


@dataclass(frozen=True)
class LpResult:
    x: np.ndarray
    value: float
    iterations: int
    dual: np.ndarray


def _solve_standard(G, g, c, basis, max_iter, tol, start_iter=0):
    """Revised simplex on ``min g.lam, G lam = c, lam >= 0`` from a feasible basis.

    Dantzig pricing; switches to Bland's rule after a run of degenerate
    pivots so that cycling cannot persist.
    """
    m, N = G.shape
    basis = list(basis)
    it = start_iter
    stall = 0
    bland = False
    while True:
        if it - start_iter > max_iter:
            raise LPError("simplex did not converge", it)
        Bm = G[:, basis]
        lam_B = np.linalg.solve(Bm, c)
        pi = np.linalg.solve(Bm.T, g[basis])
        reduced = g - G.T @ pi
        reduced[basis] = 0.0
        scale = 1.0 + np.abs(g).max(initial=0.0)
        cand = np.flatnonzero(reduced < -tol * scale)
        if cand.size == 0:
            lam = np.zeros(N)
            lam[basis] = lam_B
            return lam, pi, basis, it
        enter = int(cand[0]) if bland else int(cand[np.argmin(reduced[cand])])
        d = np.linalg.solve(Bm, G[:, enter])
        pos = d > tol
        if not pos.any():
            raise LPError("dual problem unbounded (primal infeasible)", it)
        ratios = np.full(m, np.inf)
        ratios[pos] = np.maximum(lam_B[pos], 0.0) / d[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol)
        leave = int(ties[np.argmin([basis[i] for i in ties])]) if bland else int(ties[np.argmax(d[ties])])
        stall = stall + 1 if best <= tol else 0
        bland = bland or stall > 50
        basis[leave] = enter
        it += 1


def maximize(c, A_ub, b_ub, A_eq=None, b_eq=None, max_iter: int = 20000, tol: float = 1e-10) -> LpResult:
    """Maximize ``c.x`` over free ``x`` with ``A_ub x <= b_ub`` and ``A_eq x = b_eq``."""
    c = np.asarray(c, dtype=float)
    n = c.size
    A_ub = np.asarray(A_ub, dtype=float).reshape(-1, n)
    b_ub = np.asarray(b_ub, dtype=float).reshape(-1)
    if A_eq is None:
        A_eq = np.zeros((0, n))
        b_eq = np.zeros(0)
    A_eq = np.asarray(A_eq, dtype=float).reshape(-1, n)
    b_eq = np.asarray(b_eq, dtype=float).reshape(-1)

    G = np.hstack([A_ub.T, A_eq.T, -A_eq.T])
    g = np.concatenate([b_ub, b_eq, -b_eq])
    N = G.shape[1]

    # phase 1: artificial columns with rows signed so the right-hand side is >= 0
    sign = np.where(c < 0, -1.0, 1.0)
    Gs = G * sign[:, None]
    cs = c * sign
    G1 = np.hstack([Gs, np.eye(n)])
    g1 = np.concatenate([np.zeros(N), np.ones(n)])
    lam1, _, basis, it = _solve_standard(G1, g1, cs, range(N, N + n), max_iter, tol)
    if lam1[N:].sum() > 1e-8 * (1.0 + np.abs(c).max(initial=0.0)):
        raise LPError("dual problem infeasible (primal unbounded)", it)

    # drive zero-level artificials out of the basis where a real column can replace them
    for row, col in enumerate(list(basis)):
        if col < N:
            continue
        Bm = G1[:, basis]
        tableau_row = np.linalg.solve(Bm, Gs)[row]
        choices = [j for j in np.flatnonzero(np.abs(tableau_row) > 1e-9) if j not in basis]
        if not choices:
            raise LPError("redundant equality rows in the dual; primal variables are not determined", it)
        basis[row] = int(choices[0])

    # phase 2 on a slightly perturbed right-hand side: the starting basis stays
    # feasible and becomes nondegenerate, which prevents long degenerate runs.
    # Multipliers depend only on the basis, so x is exactly primal feasible.
    delta = _PERTURB * (1.0 + np.abs(c).max(initial=0.0)) * np.random.default_rng(0).uniform(0.5, 1.0, n)
    cp = cs + Gs[:, basis] @ delta
    lam, pi, basis, it = _solve_standard(Gs, g, cp, basis, max_iter, tol, it)
    lam[basis] = np.linalg.solve(Gs[:, basis], cs)
    x = pi * sign
    return LpResult(x=x, value=float(c @ x), iterations=it, dual=lam)
