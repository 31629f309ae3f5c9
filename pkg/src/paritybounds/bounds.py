"""Constraint-strength bounds: homogeneous optimum, bound chain, LP.

The homogeneous optimum over defect counts up to k is
c_hat = max_k (e - a_k) / k, each term c_{-k} = (e - a_k)/k being a lower
bound on the true optimal strength. Upper bounds use the spectrum enclosure
[p0, -p0] of the field term: c_i = max{c_{-1}, ..., c_{-i}, (e - p0)/(i + 1)},
with c_0 = e - p0, and they form the chain
c_hat <= c_q <= ... <= c_1 <= c_0 <= 2|p0|.

The inhomogeneous problem (minimize sum c_ij subject to
sum_{p in omega} c_p >= e - a_omega for every profile omega in a family) is
solved through its LP dual with the dense simplex, with variables kept
nonnegative: negative penalties would reward violations, which the paper's
formulation leaves open but we exclude as physically meaningless.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from .parity import ParityLayout, Plaquette
from .simplex import simplex_max
from .solver import (
    CapacityError,
    SpectrumSummary,
    all_defect_minima,
    logical_spectrum,
    min_over_defect_count,
    minima_for_masks,
    restricted_minima_map,
)

VERIFY_TOL = 1e-9
ACTIVE_TOL = 1e-7
FULL_LP_MAX_N = 6


@dataclass(frozen=True)
class ConstraintAssignment:
    """Homogeneous strength c or per-plaquette map [i, j] -> c_ij."""

    value: float | None = None
    per_plaquette: dict | None = None

    @classmethod
    def homogeneous(cls, c: float) -> "ConstraintAssignment":
        return cls(value=float(c))

    @classmethod
    def from_map(cls, strengths: dict) -> "ConstraintAssignment":
        return cls(per_plaquette={tuple(p): float(v) for p, v in strengths.items()})

    def strength(self, plaquette: Plaquette) -> float:
        if self.value is not None:
            return self.value
        return self.per_plaquette.get(tuple(plaquette), 0.0)

    @property
    def homogeneous_value(self) -> float | None:
        return self.value

    @property
    def has_negative(self) -> bool:
        if self.value is not None:
            return self.value < 0
        return any(v < 0 for v in self.per_plaquette.values())


@dataclass
class LpSolution:
    assignment: ConstraintAssignment
    objective: float
    dual_objective: float
    active: list  # profiles (frozensets) binding at the optimum
    family: str   # "full" or "k<=KMAX"
    certified: bool  # full family => true inhomogeneous optimum
    iterations: int
    max_violation: float

    def to_dict(self) -> dict:
        return {
            "objective": self.objective,
            "dual_objective": self.dual_objective,
            "c_ij": [[list(p), v] for p, v in sorted(self.assignment.per_plaquette.items())],
            "active": [sorted(list(map(list, omega))) for omega in self.active],
            "family": self.family,
            "certified": self.certified,
        }


@dataclass
class BoundsReport:
    """Spectrum data plus the lower/upper bound families for one instance."""

    n: int
    l0: float
    e: float
    gap: float
    p0: float
    trivial: float
    lower: list  # lower[k-1] = c_{-k}
    upper: list  # upper[i] = c_i, i = 0..k_max_used
    c_hat: float
    k_max_used: int
    full_range: bool
    lp: LpSolution | None = field(default=None)

    def to_dict(self) -> dict:
        doc = {
            "n": self.n,
            "l0": self.l0,
            "e": self.e,
            "gap": self.gap,
            "p0": self.p0,
            "trivial": self.trivial,
            "lower": list(self.lower),
            "upper": list(self.upper),
            "c_hat": self.c_hat,
            "k_max_used": self.k_max_used,
            "c_hat_label": "optimum (full k range)" if self.full_range
                           else f"lower bound (k <= {self.k_max_used})",
        }
        if self.lp is not None:
            doc["lp"] = self.lp.to_dict()
        return doc


def homogeneous_optimum(inst, layout: ParityLayout, k_max: int = 2,
                        budget: int | None = None, full: bool = False,
                        spectrum: SpectrumSummary | None = None) -> BoundsReport:
    """Bound chain report; with full=True sweeps every defect count (n <= 8).

    With a truncated k range, c_hat is a certified lower bound on the true
    homogeneous optimum rather than the optimum itself.
    """
    if spectrum is None:
        spectrum = logical_spectrum(inst)
    e = spectrum.e
    if full:
        a_vals = all_defect_minima(inst, layout)
        k_used = layout.q
    else:
        k_used = min(k_max, layout.q)
        a_vals = np.array([
            min_over_defect_count(inst, layout, k, budget=budget)
            for k in range(1, k_used + 1)
        ])
    lower = [float((e - a_vals[k - 1]) / k) for k in range(1, k_used + 1)]
    c_hat = max(lower)
    p0 = inst.p0()
    diff0 = (e - inst.offset) - p0  # offset-free e - p0
    upper = [float(diff0)]
    running = -np.inf
    for i in range(1, k_used + 1):
        running = max(running, lower[i - 1])
        upper.append(float(max(running, diff0 / (i + 1))))
    return BoundsReport(
        n=inst.n,
        l0=spectrum.l0,
        e=e,
        gap=spectrum.gap,
        p0=p0,
        trivial=2.0 * abs(p0),
        lower=lower,
        upper=upper,
        c_hat=c_hat,
        k_max_used=k_used,
        full_range=full or k_used == layout.q,
    )


@dataclass
class Verdict:
    satisfied: bool
    slack: float               # min over checked profiles of (sum c - (e - a))
    worst_omega: frozenset | None
    checked: int
    family: str


def _profiles_up_to(layout: ParityLayout, k_max: int):
    for k in range(1, k_max + 1):
        for combo in itertools.combinations(layout.plaquettes, k):
            yield frozenset(combo)


def verify_assignment(inst, layout: ParityLayout, assign: ConstraintAssignment,
                      k_max: int | None = None, full: bool = False,
                      spectrum: SpectrumSummary | None = None) -> Verdict:
    """Check sum_{p in omega} c_p >= e - a_omega over a family of profiles.

    full=True enumerates every non-empty profile (n <= 6); otherwise profiles
    with |omega| <= k_max are checked.
    """
    if spectrum is None:
        spectrum = logical_spectrum(inst)
    e = spectrum.e
    if full:
        minima = restricted_minima_map(inst, layout)
        profiles = list(minima.a_omega.items())
        family = "full"
    else:
        if k_max is None:
            k_max = 1
        profs = list(_profiles_up_to(layout, k_max))
        masks = [layout.combined_mask(p) for p in profs]
        vals = minima_for_masks(inst, layout, masks)
        profiles = list(zip(profs, vals))
        family = f"k<={k_max}"
    scale = max(1.0, abs(e))
    if assign.value is not None:
        scale = max(scale, abs(assign.value))
    elif assign.per_plaquette:
        scale = max(scale, max(abs(v) for v in assign.per_plaquette.values()))
    tol = VERIFY_TOL * scale
    worst = None
    slack = np.inf
    for omega, a in profiles:
        margin = sum(assign.strength(p) for p in omega) - (e - a)
        if margin < slack:
            slack = margin
            worst = omega
    return Verdict(
        satisfied=bool(slack >= -tol),
        slack=float(slack),
        worst_omega=worst,
        checked=len(profiles),
        family=family,
    )


def solve_lp(inst, layout: ParityLayout, k_max: int | None = None,
             full: bool = False, profiles=None,
             spectrum: SpectrumSummary | None = None) -> LpSolution:
    """Minimize sum c_ij over c >= 0 subject to the profile inequalities.

    The family is all profiles with |omega| <= k_max, every profile (full,
    small n), or an explicit list. Solved through the LP dual (max b.y with
    at most one unit of dual weight crossing each plaquette), which has a
    feasible all-slack basis; the primal strengths are read off the dual's
    shadow prices. With a truncated family the objective is a lower bound on
    the true inhomogeneous optimum.
    """
    if spectrum is None:
        spectrum = logical_spectrum(inst)
    e = spectrum.e
    if full:
        if inst.n > FULL_LP_MAX_N:
            raise CapacityError(f"full LP family capped at n={FULL_LP_MAX_N}")
        minima = restricted_minima_map(inst, layout)
        profiles = list(minima.a_omega.keys())
        b_all = np.array([e - minima.a_omega[p] for p in profiles])
        family = "full"
    elif profiles is not None:
        profiles = [frozenset(tuple(p) for p in omega) for omega in profiles]
        masks = [layout.combined_mask(p) for p in profiles]
        b_all = e - minima_for_masks(inst, layout, masks)
        family = f"explicit({len(profiles)})"
    else:
        if k_max is None:
            k_max = 1
        profiles = list(_profiles_up_to(layout, k_max))
        masks = [layout.combined_mask(p) for p in profiles]
        b_all = e - minima_for_masks(inst, layout, masks)
        family = f"k<={k_max}"
    keep = b_all > 0.0  # c >= 0 satisfies nonpositive right-hand sides for free
    kept_profiles = [p for p, k in zip(profiles, keep) if k]
    b = b_all[keep]
    q = layout.q
    strengths = np.zeros(q)
    iterations = 0
    dual_objective = 0.0
    if kept_profiles:
        d = np.zeros((q, len(kept_profiles)))
        for col, omega in enumerate(kept_profiles):
            for p in omega:
                d[layout.plaquette_index[p], col] = 1.0
        res = simplex_max(b, d, np.ones(q))
        strengths = res.duals
        iterations = res.iterations
        dual_objective = res.value
    assignment = ConstraintAssignment.from_map({
        p: strengths[layout.plaquette_index[p]] for p in layout.plaquettes
    })
    objective = float(strengths.sum())
    active = []
    max_violation = 0.0
    for omega, rhs in zip(profiles, b_all):
        lhs = sum(assignment.strength(p) for p in omega)
        max_violation = max(max_violation, rhs - lhs)
        if rhs > 0.0 and abs(lhs - rhs) <= ACTIVE_TOL * max(1.0, abs(rhs)):
            active.append(omega)
    return LpSolution(
        assignment=assignment,
        objective=objective,
        dual_objective=dual_objective,
        active=active,
        family=family,
        certified=full,
        iterations=iterations,
        max_violation=float(max_violation),
    )
