"""Power-law fitting n -> beta * n^alpha + gamma.

For a fixed exponent the best (beta, gamma) is a linear least-squares solve,
so the exponent is optimized on the bracketed interval [0, 3] (covering the
linear-to-quadratic regimes with margin) by a coarse scan plus golden-section
refinement, followed by one Gauss-Newton polish of all three parameters.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .evt import golden_section_minimize

ALPHA_BRACKET = (0.0, 3.0)


@dataclass
class FitResult:
    alpha: float
    beta: float
    gamma: float
    covariance: list | None  # 3x3 Gauss-Newton estimate, order (alpha, beta, gamma)
    rms: float
    flagged: bool = False
    message: str = ""

    def predict(self, n) -> np.ndarray:
        return self.beta * np.asarray(n, dtype=float) ** self.alpha + self.gamma


def _linear_fit(x: np.ndarray, y: np.ndarray, alpha: float):
    basis = np.column_stack([x ** alpha, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    resid = y - basis @ coef
    return coef, float(resid @ resid)


def fit_power_law(points) -> FitResult:
    """Least-squares fit of (n, y) points to beta * n^alpha + gamma."""
    pts = sorted((float(n), float(v)) for n, v in points)
    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    if len(x) < 4:
        raise ValueError("power-law fit needs at least 4 points")
    if len(set(x.tolist())) != len(x):
        raise ValueError("n values must be distinct")
    if np.ptp(y) == 0.0:
        return FitResult(alpha=0.0, beta=0.0, gamma=float(y[0]), covariance=None,
                         rms=0.0, flagged=True,
                         message="all y equal: exponent unidentifiable")

    def rss(alpha: float) -> float:
        return _linear_fit(x, y, alpha)[1]

    grid = np.linspace(*ALPHA_BRACKET, 61)
    values = [rss(a) for a in grid]
    best = int(np.argmin(values))
    lo = grid[max(0, best - 1)]
    hi = grid[min(len(grid) - 1, best + 1)]
    alpha = golden_section_minimize(rss, lo, hi, tol=1e-11)
    (beta, gamma), best_rss = _linear_fit(x, y, alpha)

    def jacobian(a, b):
        xa = x ** a
        return np.column_stack([b * xa * np.log(x), xa, np.ones_like(x)])

    # one Gauss-Newton polish, kept only if it helps
    theta = np.array([alpha, beta, gamma])
    jac = jacobian(alpha, beta)
    resid = y - (beta * x ** alpha + gamma)
    try:
        step = np.linalg.lstsq(jac, resid, rcond=None)[0]
        cand = theta + step
        cand_rss = float(np.sum((y - (cand[1] * x ** cand[0] + cand[2])) ** 2))
        if np.isfinite(cand_rss) and cand_rss < best_rss:
            theta, best_rss = cand, cand_rss
    except np.linalg.LinAlgError:
        pass
    alpha, beta, gamma = (float(t) for t in theta)

    covariance = None
    dof = len(x) - 3
    if dof > 0:
        jac = jacobian(alpha, beta)
        jtj = jac.T @ jac
        try:
            covariance = (np.linalg.inv(jtj) * best_rss / dof).tolist()
        except np.linalg.LinAlgError:
            covariance = None
    return FitResult(
        alpha=alpha,
        beta=beta,
        gamma=gamma,
        covariance=covariance,
        rms=float(np.sqrt(best_rss / len(x))),
    )
