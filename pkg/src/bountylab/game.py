"""Second-stage crowdsearch game: win probabilities and the equilibrium threshold.

Agents privately draw a search cost from a common distribution and search
iff the cost is at most a threshold. With rivals at threshold ``c_hat``:

* ``detect_prob``       P(c_hat; q) = 1 - (1 - q F(c_hat))**n, the chance a
                        bug of find-probability q is found by someone;
* ``win_prob_phi``      Phi(c_hat; q) = P / (n F(c_hat)), the chance a given
                        searching agent wins that bug's prize (conditional on
                        the bug existing), with Phi -> q as F -> 0;
* ``expected_benefit_psi``  a searcher's total expected prize money, the sum
                        of v * mu * Phi over organic bugs plus v_a * Phi over
                        artificial ones.

The symmetric equilibrium threshold is the fixed point of Psi, pinned at an
endpoint when Psi never crosses the identity (solve_equilibrium).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from math import comb

from .costs import CostDistribution
from .rootfind import bisect_decreasing

# Below this participation level Phi switches to its analytic limit q,
# avoiding the 0/0 in P / (n F).
_F_FLOOR = 1e-14

# Largest n for which the combinatorial oracle is allowed to run.
ORACLE_MAX_N = 25

INTERIOR = "interior"
PINNED_LOW = "pinned_low"
PINNED_HIGH = "pinned_high"


@dataclass(frozen=True)
class OrganicBug:
    """A real vulnerability: existence probability, find probability, value."""

    mu: float
    q: float
    w: float

    def __post_init__(self) -> None:
        if not 0.0 < self.mu <= 1.0:
            raise ValueError("mu must lie in (0, 1]")
        if not 0.0 < self.q <= 1.0:
            raise ValueError("q must lie in (0, 1]")
        if not self.w >= 0.0:
            raise ValueError("w must be >= 0")


@dataclass(frozen=True)
class ArtificialBugDesign:
    """A planted bug: prize and find probability. (0, 0) encodes 'none'."""

    v_a: float
    q_a: float

    def __post_init__(self) -> None:
        if not self.v_a >= 0.0:
            raise ValueError("v_a must be >= 0")
        if not 0.0 <= self.q_a <= 1.0:
            raise ValueError("q_a must lie in [0, 1]")


@dataclass(frozen=True)
class PrizeSchedule:
    """Posted prizes: one per organic bug plus any artificial entries."""

    v: tuple[float, ...]
    artificial: tuple[ArtificialBugDesign, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "v", tuple(float(x) for x in self.v))
        object.__setattr__(self, "artificial", tuple(self.artificial))
        if any(x < 0.0 or not math.isfinite(x) for x in self.v):
            raise ValueError("organic prizes must be finite and >= 0")

    @classmethod
    def organic_only(cls, v) -> "PrizeSchedule":
        return cls(v=tuple(v), artificial=())

    @classmethod
    def zero(cls, n_bugs: int) -> "PrizeSchedule":
        return cls(v=(0.0,) * n_bugs, artificial=())

    def total_posted(self) -> float:
        return sum(self.v) + sum(a.v_a for a in self.artificial)


@dataclass(frozen=True)
class GameConfig:
    """One crowdsearch instance: agents, bugs, cost law, prize budget."""

    n: int
    bugs: tuple[OrganicBug, ...]
    dist: CostDistribution
    budget: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "bugs", tuple(self.bugs))
        if not (isinstance(self.n, int) and self.n >= 1):
            raise ValueError("n must be an integer >= 1")
        if len(self.bugs) == 0:
            raise ValueError("L >= 1 required: at least one organic bug")
        if not self.budget > 0.0:
            raise ValueError("budget must be > 0")

    def with_n(self, n: int) -> "GameConfig":
        return GameConfig(n=n, bugs=self.bugs, dist=self.dist, budget=self.budget)


@dataclass(frozen=True)
class EquilibriumOutcome:
    """Solved second stage at a prize schedule.

    ``detect_organic_unconditional`` folds in the existence probability mu;
    ``detect_organic_conditional`` does not. ``expected_payout`` equals
    n F(c_star) c_star at interior and pinned-low outcomes (at pinned-high
    outcomes the marginal searcher strictly profits and the identity becomes
    an inequality).
    """

    c_star: float
    boundary: str
    participation: float
    detect_organic_conditional: tuple[float, ...]
    detect_organic_unconditional: tuple[float, ...]
    detect_artificial: tuple[float, ...]
    expected_payout: float
    designer_utility: float


def _detect(F: float, q: float, n: int) -> float:
    x = q * F
    if x <= 0.0:
        return 0.0
    if x >= 1.0:
        return 1.0
    return -math.expm1(n * math.log1p(-x))


def _phi(F: float, q: float, n: int) -> float:
    if q <= 0.0:
        return 0.0
    if F < _F_FLOOR:
        return q
    return _detect(F, q, n) / (n * F)


def win_prob_phi(c_hat: float, q: float, n: int, dist: CostDistribution) -> float:
    """Phi(c_hat; q): a searcher's chance of winning the prize for a bug
    with find probability q, conditional on the bug existing, against n - 1
    rivals at threshold c_hat. Equals q when nobody else participates."""
    _check_q_n(q, n)
    return _phi(dist.cdf(c_hat), q, n)


def win_prob_phi_oracle(c_hat: float, q: float, n: int, dist: CostDistribution) -> float:
    """Direct enumeration oracle for Phi.

    Sums over the number k of the n - 1 rivals that participate and the
    number t of those that also find the bug; the prize then splits uniformly
    among the t + 1 finders. Kept independent of the closed form on purpose.
    """
    _check_q_n(q, n)
    if n > ORACLE_MAX_N:
        raise ValueError(f"oracle limited to n <= {ORACLE_MAX_N}")
    F = dist.cdf(c_hat)
    total = 0.0
    for k in range(n):
        weight = comb(n - 1, k) * F**k * (1.0 - F) ** (n - 1 - k)
        inner = sum(
            comb(k, t) * q**t * (1.0 - q) ** (k - t) / (t + 1) for t in range(k + 1)
        )
        total += weight * inner
    return q * total


def detect_prob(c_hat: float, q: float, n: int, dist: CostDistribution) -> float:
    """P(c_hat; q) = 1 - (1 - q F(c_hat))**n, evaluated stably."""
    _check_q_n(q, n)
    return _detect(dist.cdf(c_hat), q, n)


def _check_q_n(q: float, n: int) -> None:
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must lie in [0, 1]")
    if not (isinstance(n, int) and n >= 1):
        raise ValueError("n must be an integer >= 1")


def expected_benefit_psi(c_hat: float, prizes: PrizeSchedule, config: GameConfig) -> float:
    """Psi(c_hat): expected prize winnings of a searching agent."""
    if len(prizes.v) != len(config.bugs):
        raise ValueError(
            f"prize list length {len(prizes.v)} != bug count {len(config.bugs)}"
        )
    F = config.dist.cdf(c_hat)
    total = 0.0
    for prize, bug in zip(prizes.v, config.bugs):
        total += prize * bug.mu * _phi(F, bug.q, config.n)
    for art in prizes.artificial:
        total += art.v_a * _phi(F, art.q_a, config.n)
    return total


def solve_equilibrium(prizes: PrizeSchedule, config: GameConfig) -> EquilibriumOutcome:
    """Symmetric equilibrium threshold and the stage outcomes evaluated there.

    Psi - id is continuous and strictly decreasing wherever F > 0, so the
    three cases are: pinned at c_low when Psi(c_low) <= c_low, pinned at the
    (effective) upper endpoint when Psi there still exceeds it, and otherwise
    the unique interior fixed point found by bisection.
    """
    dist = config.dist
    lo = dist.c_low
    hi = dist.upper_bound()

    def gap(c: float) -> float:
        return expected_benefit_psi(c, prizes, config) - c

    if gap(lo) <= 0.0:
        c_star, boundary = lo, PINNED_LOW
    elif gap(hi) >= 0.0:
        c_star, boundary = hi, PINNED_HIGH
    else:
        c_star, boundary = bisect_decreasing(gap, lo, hi), INTERIOR
    return _outcome_at(c_star, boundary, prizes, config)


def _outcome_at(
    c_star: float, boundary: str, prizes: PrizeSchedule, config: GameConfig
) -> EquilibriumOutcome:
    F = config.dist.cdf(c_star)
    n = config.n
    det_cond = tuple(_detect(F, bug.q, n) for bug in config.bugs)
    det_uncond = tuple(bug.mu * d for bug, d in zip(config.bugs, det_cond))
    det_art = tuple(_detect(F, a.q_a, n) for a in prizes.artificial)
    payout = sum(p * d for p, d in zip(prizes.v, det_uncond))
    payout += sum(a.v_a * d for a, d in zip(prizes.artificial, det_art))
    value = sum(bug.w * d for bug, d in zip(config.bugs, det_uncond))
    return EquilibriumOutcome(
        c_star=c_star,
        boundary=boundary,
        participation=F,
        detect_organic_conditional=det_cond,
        detect_organic_unconditional=det_uncond,
        detect_artificial=det_art,
        expected_payout=payout,
        designer_utility=value - payout,
    )
