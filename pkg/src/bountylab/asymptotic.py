"""Public-program limit: participation, detection, and design as n grows.

With a strictly positive lowest cost c_low, only the cheapest searchers stay
in as the crowd grows, and the game is summarized by the expected number of
active searchers kappa = n F(c_n). In the limit:

    Psi_inf(kappa) = sum_l v_l mu_l (1 - exp(-q_l kappa)) / c_low
                     + sum_k v_a_k (1 - exp(-q_a_k kappa)) / c_low

whose positive fixed point kappa_star is the limiting participation;
detection converges to P_inf(q) = 1 - exp(-q kappa_star) and the designer's
objective to W_inf(kappa) = sum_l w_l mu_l (1 - exp(-q_l kappa)) - kappa c_low.
Everything here depends on the cost law only through c_low.

The designer-side quantities mirror the finite-n ones: kappa_tilde is the
root of Omega_inf(kappa) = sum_l w_l mu_l q_l exp(-q_l kappa) - c_low,
kappa_a caps what the budget can induce, kappa_0 what organic prizes alone
can induce, and an artificial bug helps iff kappa_tilde > kappa_0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import designer_utility, optimize, solution_set
from .game import (
    ArtificialBugDesign,
    GameConfig,
    PrizeSchedule,
    detect_prob,
    solve_equilibrium,
)
from .rootfind import bisect_decreasing

MAX_TABLE_N = 10**6
_EPS_BRACKET = 1e-12


def _require_positive_floor(config: GameConfig) -> float:
    c_low = config.dist.c_low
    if not c_low > 0.0:
        raise ValueError(
            "public-program analysis requires c_low > 0 "
            "(free participation never settles otherwise)"
        )
    return c_low


def psi_infinity(kappa: float, prizes: PrizeSchedule, config: GameConfig) -> float:
    """Limiting expected benefit of searching, per unit of the lowest cost."""
    c_low = _require_positive_floor(config)
    if len(prizes.v) != len(config.bugs):
        raise ValueError(
            f"prize list length {len(prizes.v)} != bug count {len(config.bugs)}"
        )
    total = 0.0
    for prize, bug in zip(prizes.v, config.bugs):
        total += prize * bug.mu * -math.expm1(-bug.q * kappa)
    for art in prizes.artificial:
        total += art.v_a * -math.expm1(-art.q_a * kappa)
    return total / c_low


@dataclass(frozen=True)
class PublicOutcome:
    """Limiting participation and the outcomes evaluated there."""

    kappa_star: float
    detect_inf: tuple[float, ...]  # per organic bug, 1 - exp(-q kappa_star)
    utility_inf: float
    trivial: bool  # True when no positive participation is sustainable


def solve_kappa_star(prizes: PrizeSchedule, config: GameConfig) -> PublicOutcome:
    """Largest fixed point of Psi_inf.

    Zero is always a fixed point; a positive one exists iff the slope at
    zero, (sum v mu q + sum v_a q_a) / c_low, exceeds 1. The trivial flag
    marks the no-participation case.
    """
    c_low = _require_positive_floor(config)
    slope = sum(p * b.mu * b.q for p, b in zip(prizes.v, config.bugs))
    slope += sum(a.v_a * a.q_a for a in prizes.artificial)
    slope /= c_low
    kappa = 0.0
    trivial = True
    if slope > 1.0:
        upper = prizes.total_posted() / c_low

        def gap(k: float) -> float:
            return psi_infinity(k, prizes, config) - k

        if gap(_EPS_BRACKET) > 0.0:
            kappa = bisect_decreasing(gap, _EPS_BRACKET, upper)
            trivial = False
    return PublicOutcome(
        kappa_star=kappa,
        detect_inf=tuple(detect_prob_infinity(b.q, kappa) for b in config.bugs),
        utility_inf=utility_infinity(kappa, config),
        trivial=trivial,
    )


def detect_prob_infinity(q: float, kappa: float) -> float:
    """P_inf(q) = 1 - exp(-q kappa)."""
    if kappa < 0.0:
        raise ValueError("kappa must be >= 0")
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    return -math.expm1(-q * kappa)


def utility_infinity(kappa: float, config: GameConfig) -> float:
    """W_inf(kappa): limiting designer objective at participation kappa."""
    c_low = _require_positive_floor(config)
    if kappa < 0.0:
        raise ValueError("kappa must be >= 0")
    value = sum(b.w * b.mu * -math.expm1(-b.q * kappa) for b in config.bugs)
    return value - kappa * c_low


def _weighted_q_sum(config: GameConfig) -> float:
    return sum(b.w * b.mu * b.q for b in config.bugs)


def solve_kappa_tilde(config: GameConfig) -> float:
    """Root of Omega_inf, the unconstrained optimal participation.

    Returns 0 when sum_l w_l mu_l q_l < c_low (prizes can never compensate
    the cheapest searcher; optimize_public reports the violation).
    """
    c_low = _require_positive_floor(config)
    s = _weighted_q_sum(config)
    if s < c_low:
        return 0.0
    if s == c_low:
        return 0.0

    def g(k: float) -> float:
        return sum(b.w * b.mu * b.q * math.exp(-b.q * k) for b in config.bugs) - c_low

    q_min = min(b.q for b in config.bugs if b.w * b.mu * b.q > 0.0)
    upper = math.log(s / c_low) / q_min
    return bisect_decreasing(g, 0.0, upper)


def solve_kappa_a(budget: float, config: GameConfig) -> float:
    """Largest fixed point of budget (1 - exp(-kappa)) / c_low; 0 when the
    slope budget / c_low at zero is at most 1. Non-decreasing in budget."""
    c_low = _require_positive_floor(config)
    if not budget > 0.0:
        raise ValueError("budget must be > 0")
    if budget / c_low <= 1.0:
        return 0.0

    def gap(k: float) -> float:
        return budget * -math.expm1(-k) / c_low - k

    if gap(_EPS_BRACKET) <= 0.0:
        return 0.0
    return bisect_decreasing(gap, _EPS_BRACKET, budget / c_low)


@dataclass(frozen=True)
class Kappa0Breakdown:
    kappa_0: float
    per_bug: tuple[float, ...]
    best_bug: int


def solve_kappa0(budget: float, config: GameConfig) -> Kappa0Breakdown:
    """Per-bug fixed points of budget mu_l (1 - exp(-q_l kappa)) / c_low."""
    c_low = _require_positive_floor(config)
    if not budget > 0.0:
        raise ValueError("budget must be > 0")
    values = []
    for bug in config.bugs:
        slope = budget * bug.mu * bug.q / c_low
        if slope <= 1.0:
            values.append(0.0)
            continue

        def gap(k: float, bug=bug) -> float:
            return budget * bug.mu * -math.expm1(-bug.q * k) / c_low - k

        if gap(_EPS_BRACKET) <= 0.0:
            values.append(0.0)
        else:
            values.append(bisect_decreasing(gap, _EPS_BRACKET, budget * bug.mu / c_low))
    best = max(range(len(values)), key=values.__getitem__)
    return Kappa0Breakdown(kappa_0=values[best], per_bug=tuple(values), best_bug=best)


@dataclass(frozen=True)
class PublicBenefitVerdict:
    beneficial: bool
    margin: float  # kappa_tilde - kappa_0
    marginal: bool
    kappa_tilde: float
    kappa_0: float
    per_bug: tuple[float, ...]


def _beneficial_from(kt: float, ka: float, k0: float) -> tuple[bool, float, bool]:
    # Same guard as the finite-n side: the bug pays off iff it moves the
    # constrained optimum min(kappa_tilde, kappa_a) above kappa_0. When the
    # best organic bug has mu q < 1 this is exactly kappa_tilde > kappa_0.
    margin = kt - k0
    gain = min(kt, ka) - k0
    return gain > 1e-10, margin, abs(margin) <= 1e-10


def is_beneficial_public(config: GameConfig) -> PublicBenefitVerdict:
    """Artificial bug helps in the limit iff min(kappa_tilde, kappa_a)
    strictly exceeds kappa_0(budget)."""
    kt = solve_kappa_tilde(config)
    ka = solve_kappa_a(config.budget, config)
    k0 = solve_kappa0(config.budget, config)
    beneficial, margin, marginal = _beneficial_from(kt, ka, k0.kappa_0)
    return PublicBenefitVerdict(
        beneficial=beneficial,
        margin=margin,
        marginal=marginal,
        kappa_tilde=kt,
        kappa_0=k0.kappa_0,
        per_bug=k0.per_bug,
    )


@dataclass(frozen=True)
class PublicDesignReport:
    kappa_tilde: float
    kappa_a: float
    kappa_0: float
    kappa_hat_star: float
    beneficial: bool
    marginal: bool
    prizes: PrizeSchedule
    utility_at_optimum: float
    per_bug_kappa: tuple[float, ...]
    best_bug: int
    assumption_notes: tuple[str, ...]


def optimize_public(config: GameConfig) -> PublicDesignReport:
    """Optimal limiting participation min(kappa_tilde, kappa_a) and prizes.

    Canonical prize selection mirrors the finite-n designer: all budget on a
    q_a = 1 artificial bug when beneficial, otherwise the single best organic
    bug scaled to the target. Violations of the standing assumptions
    (budget >= c_low, sum w mu q >= c_low) are reported, not clamped away.
    """
    c_low = _require_positive_floor(config)
    notes = []
    if config.budget < c_low:
        notes.append("budget below c_low: full budget cannot move the cheapest agent")
    if _weighted_q_sum(config) < c_low:
        notes.append("sum of w*mu*q below c_low: searching can never be compensated")

    kt = solve_kappa_tilde(config)
    ka = solve_kappa_a(config.budget, config)
    k0 = solve_kappa0(config.budget, config)
    beneficial, _, marginal = _beneficial_from(kt, ka, k0.kappa_0)
    k_star = min(kt, ka)

    if k_star <= 0.0:
        schedule = PrizeSchedule.zero(len(config.bugs))
    elif beneficial:
        v_a = k_star * c_low / -math.expm1(-k_star)
        schedule = PrizeSchedule(
            v=(0.0,) * len(config.bugs),
            artificial=(ArtificialBugDesign(v_a=min(v_a, config.budget), q_a=1.0),),
        )
    else:
        bug = config.bugs[k0.best_bug]
        unit = bug.mu * -math.expm1(-bug.q * k_star)
        v = [0.0] * len(config.bugs)
        v[k0.best_bug] = min(k_star * c_low / unit, config.budget)
        schedule = PrizeSchedule.organic_only(v)

    return PublicDesignReport(
        kappa_tilde=kt,
        kappa_a=ka,
        kappa_0=k0.kappa_0,
        kappa_hat_star=k_star,
        beneficial=beneficial,
        marginal=marginal,
        prizes=schedule,
        utility_at_optimum=utility_infinity(k_star, config),
        per_bug_kappa=k0.per_bug,
        best_bug=k0.best_bug,
        assumption_notes=tuple(notes),
    )


def convergence_table(
    config: GameConfig, prizes: PrizeSchedule, n_list: list[int]
) -> list[dict]:
    """Finite-n equilibria next to their limit, one row per n.

    Columns: n, c_n, n_F_c_n, kappa_star, P_n_bug_<l>, W_n, and the approach
    diagnostic abs_nF_minus_kappa = |n F(c_n) - kappa_star|.
    """
    _require_positive_floor(config)
    if any(n < 1 or n > MAX_TABLE_N for n in n_list):
        raise ValueError(f"n values must lie in [1, {MAX_TABLE_N}]")
    kappa_star = solve_kappa_star(prizes, config).kappa_star
    rows = []
    for n in n_list:
        cfg_n = config.with_n(int(n))
        outcome = solve_equilibrium(prizes, cfg_n)
        c_n = outcome.c_star
        nf = n * config.dist.cdf(c_n)
        row = {
            "n": int(n),
            "c_n": c_n,
            "n_F_c_n": nf,
            "kappa_star": kappa_star,
        }
        for l, bug in enumerate(config.bugs, start=1):
            row[f"P_n_bug_{l}"] = detect_prob(c_n, bug.q, int(n), config.dist)
        row["W_n"] = designer_utility(c_n, cfg_n)
        row["abs_nF_minus_kappa"] = abs(nf - kappa_star)
        rows.append(row)
    return rows


def hausdorff_distance(a, b) -> float:
    """Hausdorff distance between two non-empty finite point sets in R^k."""
    pa = np.atleast_2d(np.asarray(a, dtype=float))
    pb = np.atleast_2d(np.asarray(b, dtype=float))
    if pa.size == 0 or pb.size == 0:
        raise ValueError("point sets must be non-empty")
    if pa.shape[1] != pb.shape[1]:
        raise ValueError("point sets must share a dimension")
    d = np.sqrt(((pa[:, None, :] - pb[None, :, :]) ** 2).sum(axis=-1))
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _segment_point_distance(p, a, b) -> float:
    p, a, b = (np.asarray(x, dtype=float) for x in (p, a, b))
    ab = b - a
    denom = float(ab @ ab)
    t = 0.0 if denom == 0.0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + t * ab)))


def _segment_hausdorff(seg1, seg2) -> float:
    # The distance-to-a-convex-set function is convex, so the sup over a
    # segment sits at an endpoint; four point-to-segment distances suffice.
    a1, b1 = seg1
    a2, b2 = seg2
    return max(
        _segment_point_distance(a1, a2, b2),
        _segment_point_distance(b1, a2, b2),
        _segment_point_distance(a2, a1, b1),
        _segment_point_distance(b2, a1, b1),
    )


def _line_segment_in_simplex(a1: float, a2: float, rhs: float, budget: float):
    """Endpoints of {a1 v + a2 v_a = rhs, v >= 0, v_a >= 0, v + v_a <= budget},
    parameterized by v; None when the set is empty."""
    if a2 <= 0.0 or rhs <= 0.0:
        return None
    # v_a(v) = (rhs - a1 v) / a2 must satisfy v_a >= 0 and v + v_a <= budget
    lo = 0.0
    hi = rhs / a1 if a1 > 0.0 else math.inf
    # budget cut: v (1 - a1/a2) <= budget - rhs/a2
    slope = 1.0 - a1 / a2
    bound = budget - rhs / a2
    if slope > 0.0:
        hi = min(hi, bound / slope)
    elif slope < 0.0:
        lo = max(lo, bound / slope)
    elif bound < 0.0:
        return None
    if hi < lo - 1e-15 or not math.isfinite(hi):
        return None
    hi = max(hi, lo)

    def point(v: float):
        return (v, (rhs - a1 * v) / a2)

    return point(lo), point(hi)


@dataclass(frozen=True)
class SetDistanceResult:
    distance: float
    error_bound: float  # 0 for the exact L = 1 segment computation
    exact: bool
    feasible: bool
    n: int
    q_a: float


def solution_set_distance(
    config: GameConfig, n: int, q_a: float, sample_step: float = 0.01
) -> SetDistanceResult:
    """Hausdorff distance between the finite-n and limiting optimal prize
    sets, sliced at a fixed artificial complexity q_a.

    The finite-n slice is the budget-feasible part of the hyperplane whose
    coefficients are mu_l Phi(c*; q_l) and Phi(c*; q_a) at the optimal
    finite-n threshold; the limit slice uses mu_l (1-exp(-q_l k))/c_low and
    (1-exp(-q_a k))/c_low at the optimal limiting participation. For a single
    organic bug both slices are segments and the distance is exact; otherwise
    both sets are sampled with step ``sample_step`` and the result carries
    the a-priori bound sample_step * sqrt(dimension).
    """
    c_low = _require_positive_floor(config)
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 < q_a <= 1.0:
        raise ValueError("q_a must lie in (0, 1] for a meaningful slice")

    cfg_n = config.with_n(int(n))
    report_n = optimize(cfg_n)
    c_star = report_n.c_hat_star
    finite_set = solution_set(cfg_n, c_star, q_a)

    pub = optimize_public(config)
    k_star = pub.kappa_hat_star
    coeffs_inf = tuple(
        [b.mu * -math.expm1(-b.q * k_star) / c_low for b in config.bugs]
        + [-math.expm1(-q_a * k_star) / c_low]
    )

    L = len(config.bugs)
    if L == 1:
        seg_n = _line_segment_in_simplex(
            finite_set.coeffs[0], finite_set.coeffs[1], c_star, config.budget
        )
        seg_inf = _line_segment_in_simplex(
            coeffs_inf[0], coeffs_inf[1], k_star * c_low, config.budget
        )
        if seg_n is None or seg_inf is None:
            return SetDistanceResult(math.nan, math.nan, True, False, n, q_a)
        return SetDistanceResult(
            _segment_hausdorff(seg_n, seg_inf), 0.0, True, True, n, q_a
        )

    pts_n = _sample_hyperplane_simplex(
        finite_set.coeffs, c_star, config.budget, sample_step
    )
    pts_inf = _sample_hyperplane_simplex(
        coeffs_inf, k_star * c_low, config.budget, sample_step
    )
    if len(pts_n) == 0 or len(pts_inf) == 0:
        return SetDistanceResult(math.nan, math.nan, False, False, n, q_a)
    dist = hausdorff_distance(pts_n, pts_inf)
    return SetDistanceResult(
        dist, sample_step * math.sqrt(len(coeffs_inf)), False, True, n, q_a
    )


def _sample_hyperplane_simplex(coeffs, rhs: float, budget: float, step: float):
    """Grid points of {a . x = rhs, x >= 0, sum x <= budget}, solving the
    last coordinate from the first ones."""
    a = np.asarray(coeffs, dtype=float)
    if a[-1] <= 0.0 or rhs < 0.0:
        return np.empty((0, len(a)))
    head = a[:-1]
    axes = [np.arange(0.0, budget + step, step) for _ in head]
    grids = np.meshgrid(*axes, indexing="ij")
    flat = np.stack([g.ravel() for g in grids], axis=1)
    last = (rhs - flat @ head) / a[-1]
    keep = (last >= -1e-12) & (flat.sum(axis=1) + last <= budget + 1e-9)
    pts = np.concatenate([flat[keep], last[keep, None]], axis=1)
    return pts
