"""First-stage designer problem: optimal prizes and the one-artificial-bug rule.

The designer maximizes

    W(c_hat) = sum_l w_l mu_l P(c_hat; q_l) - n F(c_hat) c_hat

over thresholds the budget can induce. W is unimodal: its derivative has the
sign of Omega(c_hat) - c_hat, where

    Omega(c_hat) = sum_l w_l mu_l q_l (1 - q_l F(c_hat))**(n-1) - F(c_hat)/f(c_hat),

so the unconstrained optimum c_tilde is the fixed point of Omega. The budget
caps the inducible threshold at c_a (all money on a certain-to-be-found
artificial bug) or, with organic prizes only, at c_0 = max_l c_l (all money
on the single best organic bug). The optimal threshold is min(c_tilde, c_a),
and planting an artificial bug helps exactly when c_tilde > c_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .game import (
    ArtificialBugDesign,
    GameConfig,
    PrizeSchedule,
    solve_equilibrium,
    win_prob_phi,
)
from .rootfind import bisect_decreasing

# |c_tilde - c_0| at or below this is reported as a marginal verdict.
MARGINAL_BAND = 1e-10


def designer_utility(c_hat: float, config: GameConfig) -> float:
    """W(c_hat): expected bug value to the designer net of expected payouts."""
    F = config.dist.cdf(c_hat)
    n = config.n
    value = 0.0
    for bug in config.bugs:
        value += bug.w * bug.mu * _detect_from_F(F, bug.q, n)
    return value - n * F * c_hat


def _detect_from_F(F: float, q: float, n: int) -> float:
    x = q * F
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-x))


def _pow_one_minus(x: float, m: int) -> float:
    """(1 - x)**m for x in [0, 1], stable for large m."""
    if m == 0:
        return 1.0
    if x >= 1.0:
        return 0.0
    if x <= 0.0:
        return 1.0
    return math.exp(m * math.log1p(-x))


def omega(c_hat: float, config: GameConfig) -> float:
    """First-order locus: marginal bug value minus the hazard ratio F/f."""
    F = config.dist.cdf(c_hat)
    n = config.n
    total = 0.0
    for bug in config.bugs:
        total += bug.w * bug.mu * bug.q * _pow_one_minus(bug.q * F, n - 1)
    return total - config.dist.hazard_ratio(c_hat)


def solve_c_tilde(config: GameConfig) -> float:
    """Fixed point of Omega: the unconstrained optimal threshold.

    Clamped to the designer-relevant range [max(c_low, 0), c_high]; when
    Omega is one-sided on that range the nearer endpoint is returned.
    """
    lo = max(config.dist.c_low, 0.0)
    hi = config.dist.upper_bound()
    return bisect_decreasing(lambda c: omega(c, config) - c, lo, hi)


def solve_c_a(budget: float, config: GameConfig) -> float:
    """Highest inducible threshold: equilibrium of the whole budget posted on
    an artificial bug with q_a = 1 (fixed point of budget * Phi(c; 1))."""
    if not budget > 0.0:
        raise ValueError("budget must be > 0")
    schedule = PrizeSchedule(
        v=(0.0,) * len(config.bugs),
        artificial=(ArtificialBugDesign(v_a=budget, q_a=1.0),),
    )
    return solve_equilibrium(schedule, config).c_star


@dataclass(frozen=True)
class C0Breakdown:
    """Best threshold reachable with organic prizes only, and per-bug detail."""

    c_0: float
    per_bug: tuple[float, ...]
    best_bug: int  # index into config.bugs


def solve_c0(budget: float, config: GameConfig) -> C0Breakdown:
    """Per-bug fixed points of budget * mu_l * Phi(c; q_l) and their max."""
    if not budget > 0.0:
        raise ValueError("budget must be > 0")
    thresholds = []
    for l in range(len(config.bugs)):
        v = [0.0] * len(config.bugs)
        v[l] = budget
        outcome = solve_equilibrium(PrizeSchedule.organic_only(v), config)
        thresholds.append(outcome.c_star)
    best = max(range(len(thresholds)), key=thresholds.__getitem__)
    return C0Breakdown(c_0=thresholds[best], per_bug=tuple(thresholds), best_bug=best)


@dataclass(frozen=True)
class BenefitVerdict:
    beneficial: bool
    margin: float  # c_tilde - c_0
    marginal: bool  # |margin| within the tolerance band


def _beneficial_from(c_tilde: float, c_a: float, c_0: float) -> tuple[bool, float, bool]:
    # An artificial bug pays off iff it moves the constrained optimum, i.e.
    # min(c_tilde, c_a) > c_0. On any config whose best organic bug has
    # mu q < 1 this is the plain c_tilde > c_0 test (since then c_a > c_0);
    # the min() guard only matters when c_0 = c_a and nothing can be gained.
    margin = c_tilde - c_0
    gain = min(c_tilde, c_a) - c_0
    return gain > MARGINAL_BAND, margin, abs(margin) <= MARGINAL_BAND


def is_artificial_beneficial(config: GameConfig) -> BenefitVerdict:
    """Does an artificial bug strictly raise achievable designer utility?

    True iff the optimal achievable threshold min(c_tilde, c_a) strictly
    exceeds c_0(budget); a margin within 1e-10 of zero reports marginal.
    """
    c_tilde = solve_c_tilde(config)
    c_a = solve_c_a(config.budget, config)
    c_0 = solve_c0(config.budget, config).c_0
    beneficial, margin, marginal = _beneficial_from(c_tilde, c_a, c_0)
    return BenefitVerdict(beneficial=beneficial, margin=margin, marginal=marginal)


@dataclass(frozen=True)
class DesignReport:
    """Solved designer problem with a canonical (minimal-spend) schedule."""

    c_tilde: float
    c_a: float
    c_0: float
    c_hat_star: float
    beneficial: bool
    marginal: bool
    canonical_prizes: PrizeSchedule
    utility_at_optimum: float
    spend: float
    per_bug_c: tuple[float, ...]
    best_bug: int


def optimize(config: GameConfig, allow_artificial: bool = True) -> DesignReport:
    """Optimal threshold min(c_tilde, c_a) and one schedule that attains it.

    The optimum is a whole set of prize vectors; the canonical representative
    is the minimal-total-spend point: everything on an artificial bug with
    q_a = 1 when that helps, otherwise everything on the most cost-effective
    organic bug, scaled to hit the target threshold exactly. With
    ``allow_artificial=False`` the threshold is capped at c_0 instead of c_a.
    """
    c_tilde = solve_c_tilde(config)
    c_a = solve_c_a(config.budget, config)
    c0b = solve_c0(config.budget, config)
    beneficial, _, marginal = _beneficial_from(c_tilde, c_a, c0b.c_0)
    cap = c_a if allow_artificial else c0b.c_0
    c_hat_star = min(c_tilde, cap)

    floor = max(config.dist.c_low, 0.0)
    if c_hat_star <= floor or config.dist.cdf(c_hat_star) <= 0.0:
        schedule = PrizeSchedule.zero(len(config.bugs))
    elif allow_artificial and beneficial:
        v_a = c_hat_star / win_prob_phi(c_hat_star, 1.0, config.n, config.dist)
        schedule = PrizeSchedule(
            v=(0.0,) * len(config.bugs),
            artificial=(ArtificialBugDesign(v_a=min(v_a, config.budget), q_a=1.0),),
        )
    else:
        bug = config.bugs[c0b.best_bug]
        unit = bug.mu * win_prob_phi(c_hat_star, bug.q, config.n, config.dist)
        v = [0.0] * len(config.bugs)
        v[c0b.best_bug] = min(c_hat_star / unit, config.budget)
        schedule = PrizeSchedule.organic_only(v)

    return DesignReport(
        c_tilde=c_tilde,
        c_a=c_a,
        c_0=c0b.c_0,
        c_hat_star=c_hat_star,
        beneficial=beneficial,
        marginal=marginal,
        canonical_prizes=schedule,
        utility_at_optimum=designer_utility(c_hat_star, config),
        spend=schedule.total_posted(),
        per_bug_c=c0b.per_bug,
        best_bug=c0b.best_bug,
    )


def collapse_artificial(prizes: PrizeSchedule, config: GameConfig) -> PrizeSchedule:
    """Merge all artificial entries into one without moving the equilibrium.

    Keeps the entry with the highest q_a and tops its prize up by the other
    entries' contributions weighted by their relative win probabilities at
    the original equilibrium; both the fixed-point condition and the expected
    artificial payout are preserved.
    """
    if not prizes.artificial:
        return prizes
    if all(a.q_a == 0.0 for a in prizes.artificial):
        return PrizeSchedule(v=prizes.v, artificial=(ArtificialBugDesign(0.0, 0.0),))
    c_star = solve_equilibrium(prizes, config).c_star
    keep = max(range(len(prizes.artificial)), key=lambda k: prizes.artificial[k].q_a)
    q_keep = prizes.artificial[keep].q_a
    phi_keep = win_prob_phi(c_star, q_keep, config.n, config.dist)
    v_new = prizes.artificial[keep].v_a
    for k, art in enumerate(prizes.artificial):
        if k == keep:
            continue
        v_new += art.v_a * win_prob_phi(c_star, art.q_a, config.n, config.dist) / phi_keep
    return PrizeSchedule(
        v=prizes.v, artificial=(ArtificialBugDesign(v_a=v_new, q_a=q_keep),)
    )


@dataclass(frozen=True)
class SolutionSet:
    """Prize vectors (v_1..v_L, v_a) inducing a target threshold at fixed q_a.

    The set is the hyperplane ``coeffs . x = target`` cut down by x >= 0 and
    sum(x) <= budget; ``coeffs`` are the per-prize-unit incentives
    mu_l Phi(target; q_l) and Phi(target; q_a).
    """

    coeffs: tuple[float, ...]
    target: float
    budget: float
    q_a: float
    feasible: bool
    vertices: tuple[tuple[float, ...], ...]

    def sample(self, points_per_edge: int = 9) -> list[tuple[float, ...]]:
        """Deterministic points of the set: vertices plus edge subdivisions."""
        if not self.feasible:
            return []
        pts = [tuple(v) for v in self.vertices]
        for i in range(len(self.vertices)):
            for j in range(i + 1, len(self.vertices)):
                a, b = self.vertices[i], self.vertices[j]
                for s in range(1, points_per_edge + 1):
                    t = s / (points_per_edge + 1)
                    pts.append(tuple((1 - t) * x + t * y for x, y in zip(a, b)))
        return pts


def solution_set(config: GameConfig, c_target: float, q_a: float) -> SolutionSet:
    """Describe every budget-feasible prize split attaining ``c_target``.

    Round-tripping any returned point through solve_equilibrium reproduces
    c_target, provided the target is an interior equilibrium level (above
    max(c_low, 0) and at most c_a). A target of 0 leaves only the origin;
    an unreachable target is flagged infeasible with no vertices.
    """
    if not 0.0 <= q_a <= 1.0:
        raise ValueError("q_a must lie in [0, 1]")
    n, dist = config.n, config.dist
    coeffs = tuple(
        [bug.mu * win_prob_phi(c_target, bug.q, n, dist) for bug in config.bugs]
        + [win_prob_phi(c_target, q_a, n, dist)]
    )
    budget = config.budget
    if c_target < 0.0:
        return SolutionSet(coeffs, c_target, budget, q_a, False, ())
    if c_target == 0.0:
        origin = (0.0,) * len(coeffs)
        return SolutionSet(coeffs, c_target, budget, q_a, True, (origin,))

    vertices: list[tuple[float, ...]] = []
    dim = len(coeffs)
    for i, a_i in enumerate(coeffs):
        # single-instrument points
        if a_i > 0.0 and c_target / a_i <= budget + 1e-12:
            point = [0.0] * dim
            point[i] = c_target / a_i
            vertices.append(tuple(point))
    for i in range(dim):
        # points where the budget constraint binds with two instruments
        for j in range(i + 1, dim):
            a_i, a_j = coeffs[i], coeffs[j]
            if a_i == a_j:
                continue
            x_i = (c_target - a_j * budget) / (a_i - a_j)
            x_j = budget - x_i
            if x_i >= -1e-12 and x_j >= -1e-12:
                point = [0.0] * dim
                point[i], point[j] = max(x_i, 0.0), max(x_j, 0.0)
                vertices.append(tuple(point))
    unique = sorted(set(vertices))
    return SolutionSet(coeffs, c_target, budget, q_a, bool(unique), tuple(unique))
