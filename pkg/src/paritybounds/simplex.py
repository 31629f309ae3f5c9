"""Dense tableau simplex with Bland's anti-cycling rule.

Solves max c.y subject to A y <= b, y >= 0 with b >= 0, so the all-slack
basis is feasible and no phase-1 is needed. Problem sizes here are tiny
(tens of rows, at most ~1000 columns), so a plain dense tableau is adequate.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

FEAS_TOL = 1e-9


@dataclass
class SimplexResult:
    x: np.ndarray        # optimal variable values
    value: float         # optimal objective c.x
    duals: np.ndarray    # shadow prices of the <= constraints
    iterations: int


def simplex_max(c, a, b, tol: float = FEAS_TOL, max_iter: int | None = None) -> SimplexResult:
    """Maximize c.y over {A y <= b, y >= 0}; requires b >= 0.

    Bland's rule (smallest eligible index enters; among minimum-ratio ties the
    row whose basic variable has the smallest index leaves) guarantees
    termination on degenerate problems.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = a.shape
    if b.shape != (m,) or c.shape != (n,):
        raise ValueError("inconsistent LP dimensions")
    if np.any(b < -tol):
        raise ValueError("simplex_max needs b >= 0 (all-slack basis must be feasible)")
    tableau = np.hstack([a, np.eye(m), np.maximum(b, 0.0).reshape(-1, 1)])
    red = np.concatenate([c, np.zeros(m)])  # reduced costs c_j - z_j
    basis = list(range(n, n + m))
    if max_iter is None:
        max_iter = 200 * (m + n + 10)
    iterations = 0
    while True:
        enter = -1
        for j in range(n + m):
            if red[j] > tol:
                enter = j
                break
        if enter < 0:
            break
        col = tableau[:, enter]
        candidates = [(tableau[i, -1] / col[i], basis[i], i)
                      for i in range(m) if col[i] > tol]
        if not candidates:
            raise ArithmeticError("LP is unbounded")
        rmin = min(r for r, _, _ in candidates)
        leave = min((bv, i) for r, bv, i in candidates if r <= rmin + 1e-12)[1]
        pivot = tableau[leave, enter]
        tableau[leave] /= pivot
        for i in range(m):
            if i != leave and tableau[i, enter] != 0.0:
                tableau[i] -= tableau[i, enter] * tableau[leave]
        red -= red[enter] * tableau[leave, :-1]
        basis[leave] = enter
        iterations += 1
        if iterations > max_iter:
            raise ArithmeticError("simplex iteration limit exceeded")
    full = np.zeros(n + m)
    for i, bv in enumerate(basis):
        full[bv] = tableau[i, -1]
    return SimplexResult(
        x=full[:n],
        value=float(c @ full[:n]),
        duals=-red[n:],
        iterations=iterations,
    )
