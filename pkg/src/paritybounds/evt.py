"""Extreme-value model of ground-state statistics for centered couplings.

Models the 2^n correlated eigenvalues of a size-n instance as 2^(delta n)
independent Gaussians of scale sigma = sqrt(n(n-1)/2). The expected minimum
of m independent standard Gaussians is taken from the Gumbel limit law with
location/scale read off the exact normal quantile function:

    alpha = probit(1 - 1/m),  beta = probit(1 - 1/(e m)) - alpha,
    M_ind(m, sigma) = -sigma (alpha + EULER_GAMMA * beta).

The probit is an Acklam rational initial guess polished by two Halley steps
on erfc, giving ~1e-15 absolute accuracy over p in [1e-300, 1 - 1e-16]
(symmetry handles the upper tail exactly: 1-p is exact for p >= 1/2). The
crude inverse-erf approximation erfinv(x) ~ sqrt(-log(1 - x^2)) is kept
separately: it is only the analytic device behind the large-n expansions,
not a numeric primitive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .rng import generator

EULER_GAMMA = 0.57721566490153286061  # Euler-Mascheroni, 20 digits
DEFAULT_DELTA = 0.798158              # fitted eigenvalue-count exponent
_SQRT2 = math.sqrt(2.0)
_SQRT2PI = math.sqrt(2.0 * math.pi)

# Acklam's rational approximation of the normal quantile (initial guess only;
# Halley refinement below brings it to machine accuracy).
_A = (-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
      1.383577518672690e+02, -3.066479806614716e+01, 2.506628277459239e+00)
_B = (-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
      6.680131188771972e+01, -1.328068155288572e+01)
_C = (-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
      -2.549732539343734e+00, 4.374664141464968e+00, 2.938163982698783e+00)
_D = (7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
      3.754408661907416e+00)
_P_LOW = 0.02425


def _acklam(p: float) -> float:
    if p < _P_LOW:
        q = math.sqrt(-2.0 * math.log(p))
        return ((((((_C[0] * q + _C[1]) * q + _C[2]) * q + _C[3]) * q + _C[4]) * q + _C[5])
                / ((((_D[0] * q + _D[1]) * q + _D[2]) * q + _D[3]) * q + 1.0))
    q = p - 0.5
    r = q * q
    return ((((((_A[0] * r + _A[1]) * r + _A[2]) * r + _A[3]) * r + _A[4]) * r + _A[5]) * q
            / (((((_B[0] * r + _B[1]) * r + _B[2]) * r + _B[3]) * r + _B[4]) * r + 1.0))


def probit(p: float) -> float:
    """Standard normal quantile for p in (0, 1)."""
    if not 0.0 < p < 1.0:
        raise ValueError(f"probit domain is (0, 1), got {p}")
    if p > 0.5:
        return -probit(1.0 - p)  # 1-p is exact here; keeps tail accuracy
    x = _acklam(p)
    if p > 1e-300:  # refinement needs exp(x^2/2) to stay finite
        for _ in range(2):
            err = 0.5 * math.erfc(-x / _SQRT2) - p
            u = err * _SQRT2PI * math.exp(0.5 * x * x)
            x -= u / (1.0 + 0.5 * x * u)
    return x


def erfinv_crude(x: float) -> float:
    """The asymptotic device erfinv(x) ~ sqrt(-log(1 - x^2)) for x near 1."""
    if not 0.0 < x < 1.0:
        raise ValueError("crude inverse erf defined for x in (0, 1)")
    return math.sqrt(-math.log1p(-x * x))


@dataclass(frozen=True)
class GumbelParams:
    alpha: float
    beta: float
    m: float

    @property
    def mean_max(self) -> float:
        return self.alpha + EULER_GAMMA * self.beta


def gumbel_params(m: float) -> GumbelParams:
    """Location/scale of the Gumbel law for the extreme of m Gaussians.

    Evaluated through the lower tail (probit(1 - q) = -probit(q)), which stays
    accurate for very large m.
    """
    if m < 2:
        raise ValueError("needs m >= 2")
    alpha = -probit(1.0 / m)
    beta = -probit(1.0 / (math.e * m)) - alpha
    return GumbelParams(alpha=alpha, beta=beta, m=m)


def expected_min_independent(m: float, sigma: float) -> float:
    """M_ind = -sigma (alpha + EULER_GAMMA beta): expected minimum of m
    independent centered Gaussians of standard deviation sigma."""
    if sigma <= 0:
        raise ValueError("needs sigma > 0")
    g = gumbel_params(m)
    return -sigma * g.mean_max


def sk_sigma(n: int) -> float:
    """Eigenvalue scale sqrt(n(n-1)/2) for unit-variance couplings on K_n."""
    return math.sqrt(n * (n - 1) / 2.0)


def expected_l0_independent(n: int, delta: float = DEFAULT_DELTA) -> float:
    """Model mean ground energy: M_ind(2^(delta n), sk_sigma(n))."""
    return expected_min_independent(2.0 ** (delta * n), sk_sigma(n))


def default_defect_polynomial(n: float) -> float:
    """Average count factor of states one spin-flip family away: n(n+1)/12."""
    return n * (n + 1) / 12.0


def expected_a1_independent(n: int, delta: float = DEFAULT_DELTA,
                            p_of_n: Callable[[float], float] | None = None) -> float:
    """Model mean single-violator minimum: M_ind(2^(delta n) p(n), sk_sigma)."""
    if n < 3:
        raise ValueError("needs n >= 3")
    p = (p_of_n or default_defect_polynomial)(n)
    return expected_min_independent(2.0 ** (delta * n) * p, sk_sigma(n))


def f1_scaling(n: int, delta: float = DEFAULT_DELTA) -> float:
    """Leading-order model of the mean l0 - a1 gap:
    f1 = sqrt(n) log(n(n+1)/12) / (2 sqrt(delta log 2))."""
    if n < 3:
        raise ValueError("needs n >= 3")
    return math.sqrt(n) * math.log(n * (n + 1) / 12.0) / (2.0 * math.sqrt(delta * math.log(2.0)))


@dataclass(frozen=True)
class ApproxChain:
    """Large-n closed-form approximations of the independent-Gaussian model.

    alpha_approx is the inverse-erf-scale location sqrt((delta n - 2) log 2)
    (the probit-scale location is sqrt(2) times it)."""

    n: int
    delta: float
    alpha_approx: float
    l0_approx: float
    a1_approx: float
    diff_approx: float


def approx_chain(n: int, delta: float = DEFAULT_DELTA,
                 p_of_n: Callable[[float], float] | None = None) -> ApproxChain:
    """Asymptotic chain: alpha, model l0, model a1 and their difference."""
    if delta * n <= 2.0:
        raise ValueError("approximations need delta * n > 2")
    log2 = math.log(2.0)
    eps = math.log((p_of_n or default_defect_polynomial)(n))
    alpha = math.sqrt((delta * n - 2.0) * log2)
    scale = math.sqrt(n * (n - 1.0))
    return ApproxChain(
        n=n,
        delta=delta,
        alpha_approx=alpha,
        l0_approx=-scale * alpha,
        a1_approx=-scale * math.sqrt((delta * n - 2.0) * log2 + eps),
        diff_approx=scale * eps / (2.0 * math.sqrt(delta * n * log2)),
    )


@dataclass(frozen=True)
class EvtCalibration:
    delta: float
    fit_range: tuple[int, int]
    residual: float  # rms of l0 means against the model


def golden_section_minimize(fn: Callable[[float], float], lo: float, hi: float,
                            tol: float = 1e-9) -> float:
    """Golden-section search for the minimizer of a unimodal scalar function."""
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = fn(c), fn(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = fn(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = fn(d)
    return 0.5 * (a + b)


def calibrate_delta(empirical: Sequence[tuple[int, float]],
                    lo: float = 0.05, hi: float = 1.0) -> EvtCalibration:
    """Least-squares fit of delta to mean ground energies (n, l0_mean)."""
    data = [(int(n), float(v)) for n, v in empirical]
    if len(data) < 3:
        raise ValueError("calibration needs at least 3 data points")
    ns = [n for n, _ in data]
    if len(set(ns)) < 3 or any(n < 2 for n in ns):
        raise ValueError("calibration needs >= 3 distinct sizes n >= 2")

    def sse(delta: float) -> float:
        return sum((v - expected_l0_independent(n, delta)) ** 2 for n, v in data)

    delta = golden_section_minimize(sse, lo, hi)
    return EvtCalibration(
        delta=delta,
        fit_range=(min(ns), max(ns)),
        residual=math.sqrt(sse(delta) / len(data)),
    )


def c_minus_k_model(n: int, k: int, delta: float = DEFAULT_DELTA) -> float:
    """Model curve for the k-defect lower bound: with ~n^(2k) states in the
    k-defect subspace, (1/k)(model l0 - model a_k)."""
    if n < 3 or k < 1:
        raise ValueError("needs n >= 3, k >= 1")
    p_k = default_defect_polynomial(float(n)) ** k
    m0 = 2.0 ** (delta * n)
    diff = expected_min_independent(m0 * p_k, sk_sigma(n)) - expected_l0_independent(n, delta)
    return -diff / k


def model_curve_rows(n_values: Sequence[int], delta: float = DEFAULT_DELTA,
                     p_of_n: Callable[[float], float] | None = None) -> list[dict]:
    """Rows (n, l0_model, a1_model, f1) for model-curve tables."""
    rows = []
    for n in n_values:
        rows.append({
            "n": n,
            "l0_model": expected_l0_independent(n, delta),
            "a1_model": expected_a1_independent(n, delta, p_of_n),
            "f1": f1_scaling(n, delta),
        })
    return rows


def mc_min_gaussians(m: int, trials: int, seed: int,
                     chunk_trials: int = 256) -> tuple[float, float]:
    """Monte-Carlo mean of the minimum of m standard Gaussians.

    Returns (sample mean, standard error); trials are chunked to bound memory
    and each run is reproducible from the seed.
    """
    rng = generator(seed)
    mins = np.empty(trials)
    done = 0
    while done < trials:
        take = min(chunk_trials, trials - done)
        g = rng.standard_normal((take, m))
        mins[done:done + take] = g.min(axis=1)
        done += take
    return float(mins.mean()), float(mins.std(ddof=1) / math.sqrt(trials))
