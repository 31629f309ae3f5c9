"""MaxCut semidefinite relaxation with a certified dual value.

The primal solves the unit-diagonal relaxation through a low-rank
factorization X = Y Y^T with unit rows and rank ~ sqrt(2n) (projected
gradient on the product of spheres with backtracking line search). A dual
feasible point is then read off the first-order conditions: with
u_i = (A Y)_i . y_i, the matrix A - diag(u) is positive semidefinite at a
global optimum; any remaining negative curvature lambda_min < 0 is absorbed
by shifting u uniformly, and a small safety margin keeps the shifted point
strictly feasible so

    opt_sdp <= dual_value = |E|/2 - (1/4) sum_i u'_i

holds with certainty up to the margin. Negative curvature also drives a
rank-increase escape so the primal does not stall in saddle points.

The single-violator upper bound a1+ scans all consecutive tripartitions
A = {1..k}, B = {k+1..j}, C = {j+1..n} (each part >= 2): for the plaquette
[k, j] the sign-flipped couplings are exactly the A x C block, so the energy
of every block-sign pattern is a closed form in six block sums of J, and the
resulting states all violate exactly one plaquette. All four sign patterns
(up to global flip) are evaluated; the minimum can only tighten the bound.

With cut_max <= opt_sdp, the first-excited bound l0 + 2 <= e for integer
couplings, and a1 <= a1+, the quantity

    c_sdp = -2 opt_sdp + |E| + 2 - a1+

is a certified lower bound on the exact c_{-1}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .instances import encode_maxcut
from .rng import derive_seed, generator

GRAD_TOL_SCALE = 1e-7     # convergence: riemannian gradient norm < scale * |E|
EIG_RTOL = 1e-9           # power-iteration Rayleigh-quotient stopping
ESCAPE_TOL = 1e-7         # negative curvature that triggers a rank escape
DUAL_MARGIN = 1e-8        # safety shift keeping the dual point feasible


@dataclass
class SdpResult:
    primal_value: float   # feasible relaxation value from the low-rank search
    dual_value: float     # certified upper bound on opt_sdp
    rank_used: int
    iterations: int
    converged: bool       # False: returned best dual with a widened gap
    dual_vector: np.ndarray | None = None  # u' with A - diag(u') PSD

    @property
    def gap(self) -> float:
        return self.dual_value - self.primal_value


def _power_lambda_max(mat: np.ndarray, seed: int,
                      max_iter: int = 50000) -> tuple[float, np.ndarray]:
    """Largest eigenvalue (Rayleigh quotient) and its vector, power iteration."""
    rng = generator(seed)
    v = rng.standard_normal(mat.shape[0])
    v /= np.linalg.norm(v)
    rho = float(v @ (mat @ v))
    for _ in range(max_iter):
        w = mat @ v
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0, v
        v = w / norm
        new = float(v @ (mat @ v))
        if abs(new - rho) <= EIG_RTOL * max(1.0, abs(new)):
            return new, v
        rho = new
    return rho, v


def lambda_min_sym(mat: np.ndarray, seed: int) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue of a symmetric matrix via a Gershgorin shift.

    Power-iteration accuracy (~1e-6 absolute) is fine for detecting negative
    curvature and extracting an escape direction; the dual certificate uses
    the bisection below instead.
    """
    c = 1.0 + float(np.abs(mat).sum(axis=1).max())
    lam, v = _power_lambda_max(c * np.eye(mat.shape[0]) - mat, seed)
    return c - lam, v


def certified_lambda_min(mat: np.ndarray, tol: float = 1e-12) -> float:
    """Certified lower bound on lambda_min: bisection on the diagonal shift.

    Returns the largest probed t for which mat - t I admits a Cholesky
    factorization, so mat - t I is numerically positive semidefinite and t
    never overshoots the true smallest eigenvalue by more than fp roundoff.
    """
    n = mat.shape[0]
    eye = np.eye(n)

    def psd(t):
        try:
            np.linalg.cholesky(mat - t * eye)
            return True
        except np.linalg.LinAlgError:
            return False

    lo = -float(np.abs(mat).sum(axis=1).max()) - 1.0  # Gershgorin, strictly inside
    hi = float(mat.diagonal().min())                  # lambda_min <= min diagonal
    if psd(hi):
        return hi
    if not psd(lo):
        return lo  # fully defensive; cannot happen for symmetric input
    while hi - lo > tol * max(1.0, abs(lo)):
        mid = 0.5 * (lo + hi)
        if psd(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _normalize_rows(y: np.ndarray) -> np.ndarray:
    return y / np.linalg.norm(y, axis=1, keepdims=True)


def solve_maxcut_sdp(graph, seed: int = 0,
                     max_rounds: int = 6, max_iter: int = 20000) -> SdpResult:
    """Relaxation value of max sum (1 - X_ij)/2 over unit-diagonal PSD X."""
    n = graph.n
    edges = graph.edges()
    n_edges = len(edges)
    if n_edges == 0:
        return SdpResult(0.0, 0.0, 0, 0, True, np.zeros(n))
    adj = np.zeros((n, n))
    for i, j in edges:
        adj[i - 1, j - 1] = adj[j - 1, i - 1] = 1.0
    rank = max(2, math.isqrt(2 * n - 1) + 1)  # ceil(sqrt(2n))
    rng = generator(derive_seed(seed, n, n_edges))
    y = _normalize_rows(rng.standard_normal((n, rank)))
    grad_tol = GRAD_TOL_SCALE * n_edges
    total_iters = 0
    lam_min = -np.inf

    def objective(mat):
        # (1/2) <A, M M^T>
        return 0.5 * float(np.einsum("ij,ij->", adj @ mat, mat))

    for round_idx in range(max_rounds):
        f = objective(y)
        step = 1.0
        for _ in range(max_iter):
            g = adj @ y
            u = np.einsum("ij,ij->i", g, y)
            r = g - u[:, None] * y
            gnorm = float(np.linalg.norm(r))
            if gnorm < grad_tol:
                break
            improved = False
            while step > 1e-14:
                cand = _normalize_rows(y - step * r)
                fc = objective(cand)
                if fc <= f - 1e-4 * step * gnorm * gnorm:
                    y, f = cand, fc
                    improved = True
                    break
                step *= 0.5
            total_iters += 1
            if not improved:
                break
            step = min(step * 2.0, 1.0)
        u = np.einsum("ij,ij->i", adj @ y, y)
        lam_min, vec = lambda_min_sym(adj - np.diag(u), derive_seed(seed, 7, round_idx))
        if lam_min >= -ESCAPE_TOL * (1.0 + n_edges):
            break
        # negative curvature: escape along the offending eigenvector with one
        # extra rank dimension and keep optimizing
        y = _normalize_rows(np.hstack([math.sqrt(1.0 - 0.01) * y,
                                       0.1 * vec[:, None]]))
    u = np.einsum("ij,ij->i", adj @ y, y)
    slack = adj - np.diag(u)
    lam_min = certified_lambda_min(slack)
    margin = DUAL_MARGIN * (1.0 + float(np.abs(slack).sum(axis=1).max()))
    shift = min(lam_min, 0.0) - margin
    u_feasible = u + shift
    dual_value = 0.5 * n_edges - 0.25 * float(u_feasible.sum())
    primal_value = 0.5 * n_edges - 0.5 * objective(y)
    converged = lam_min >= -ESCAPE_TOL * (1.0 + n_edges)
    return SdpResult(
        primal_value=primal_value,
        dual_value=dual_value,
        rank_used=y.shape[1],
        iterations=total_iters,
        converged=converged,
        dual_vector=u_feasible,
    )


def tripartition_a1_upper(inst) -> float:
    """a1+ >= a1: minimum energy over single-defect block states.

    Scans every consecutive tripartition (parts of size >= 2) and all block
    sign patterns; each candidate lives in the single-defect subspace of
    plaquette [k, j], so the minimum upper-bounds the true a1.
    """
    n = inst.n
    if n < 6:
        raise ValueError("tripartition bound needs n >= 6")
    w = inst.weight_matrix()
    corner = np.zeros((n + 1, n + 1))
    corner[1:, 1:] = w.cumsum(axis=0).cumsum(axis=1)

    def rect(i0, i1, j0, j1):
        return (corner[i1, j1] - corner[i0 - 1, j1]
                - corner[i1, j0 - 1] + corner[i0 - 1, j0 - 1])

    best = math.inf
    for k in range(2, n - 3):
        for j in range(k + 2, n - 1):
            w_in = 0.5 * (rect(1, k, 1, k) + rect(k + 1, j, k + 1, j)
                          + rect(j + 1, n, j + 1, n))
            w_ab = rect(1, k, k + 1, j)
            w_ac = rect(1, k, j + 1, n)
            w_bc = rect(k + 1, j, j + 1, n)
            for sa, sb, sc in ((1, 1, 1), (1, 1, -1), (1, -1, 1), (1, -1, -1)):
                e = w_in + sa * sb * w_ab + sb * sc * w_bc - sa * sc * w_ac
                if e < best:
                    best = e
    return best + inst.offset


@dataclass
class C1SdpBound:
    value: float
    primal: float
    dual: float
    a1_plus: float
    n_edges: int
    meaningful: bool
    converged: bool


def c1_sdp_bound(graph, seed: int = 0,
                 sdp: SdpResult | None = None) -> C1SdpBound:
    """Certified lower bound -2 opt_sdp + |E| + 2 - a1+ on c_{-1}.

    Degenerates (flagged not meaningful) on an empty graph.
    """
    edges = graph.edges()
    if not edges:
        return C1SdpBound(value=math.nan, primal=0.0, dual=0.0, a1_plus=math.nan,
                          n_edges=0, meaningful=False, converged=True)
    if sdp is None:
        sdp = solve_maxcut_sdp(graph, seed=seed)
    a1_plus = tripartition_a1_upper(encode_maxcut(graph))
    value = -2.0 * sdp.dual_value + len(edges) + 2.0 - a1_plus
    return C1SdpBound(
        value=value,
        primal=sdp.primal_value,
        dual=sdp.dual_value,
        a1_plus=a1_plus,
        n_edges=len(edges),
        meaningful=True,
        converged=sdp.converged,
    )
