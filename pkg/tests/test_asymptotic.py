import math

import numpy as np
import pytest

from bountylab import (
    CostDistribution,
    GameConfig,
    OrganicBug,
    PrizeSchedule,
    convergence_table,
    detect_prob_infinity,
    hausdorff_distance,
    is_artificial_beneficial,
    is_beneficial_public,
    optimize_public,
    psi_infinity,
    solution_set_distance,
    solve_kappa_a,
    solve_kappa_star,
    solve_kappa_tilde,
    utility_infinity,
)
from conftest import random_public_game

KAPPA_TILDE = 2.0 * math.log(2.5)
# high-precision bisection values for the open-program example instance
KAPPA_A_5 = 4.9651142317442763
KAPPA_STAR_V5 = 0.9284255087576333

ALL_ON_ORGANIC = PrizeSchedule.organic_only((5.0,))


def _with_budget(config, budget):
    return GameConfig(n=config.n, bugs=config.bugs, dist=config.dist, budget=budget)


# -- limiting benefit and participation -----------------------------------------


def test_psi_infinity_values(public_example):
    assert psi_infinity(0.0, ALL_ON_ORGANIC, public_example) == 0.0
    assert psi_infinity(2.0, ALL_ON_ORGANIC, public_example) == pytest.approx(
        1.5803013970713942, abs=1e-12
    )
    # exponentials vanish: the bound is the discounted posted prize mass
    assert psi_infinity(1e6, ALL_ON_ORGANIC, public_example) == pytest.approx(2.5)


def test_psi_infinity_rejects_nonpositive_floor(private_example):
    with pytest.raises(ValueError):
        psi_infinity(1.0, PrizeSchedule.zero(1), private_example)


def test_kappa_star_trivial_cases(public_example):
    out = solve_kappa_star(PrizeSchedule.zero(1), public_example)
    assert out.kappa_star == 0.0 and out.trivial

    # slope at zero is 1 * 1/4 <= 1: concavity keeps Psi below the diagonal
    out = solve_kappa_star(PrizeSchedule.organic_only((1.0,)), public_example)
    assert out.kappa_star == 0.0 and out.trivial


def test_kappa_star_positive_fixed_point(public_example):
    out = solve_kappa_star(ALL_ON_ORGANIC, public_example)
    assert not out.trivial
    assert out.kappa_star == pytest.approx(KAPPA_STAR_V5, abs=1e-9)
    resid = psi_infinity(out.kappa_star, ALL_ON_ORGANIC, public_example) - out.kappa_star
    assert abs(resid) <= 1e-10


def test_detect_infinity_values():
    assert detect_prob_infinity(0.0, 3.0) == 0.0
    assert detect_prob_infinity(0.7, 0.0) == 0.0
    assert detect_prob_infinity(0.5, KAPPA_TILDE) == pytest.approx(0.6, abs=1e-14)


def test_utility_infinity_values(public_example):
    assert utility_infinity(0.0, public_example) == 0.0
    assert utility_infinity(KAPPA_TILDE, public_example) == pytest.approx(
        3.0 - KAPPA_TILDE, abs=1e-12
    )
    worthless = GameConfig(
        n=2,
        bugs=(OrganicBug(0.5, 0.5, 0.0),),
        dist=public_example.dist,
        budget=5.0,
    )
    assert utility_infinity(1.3, worthless) == pytest.approx(-1.3)


# -- designer-side kappas --------------------------------------------------------


def test_kappa_tilde_golden(public_example):
    assert solve_kappa_tilde(public_example) == pytest.approx(KAPPA_TILDE, abs=1e-9)


def test_kappa_tilde_boundary(public_example):
    # sum w mu q = c_low exactly
    config = GameConfig(
        n=2,
        bugs=(OrganicBug(0.5, 0.5, 4.0),),
        dist=public_example.dist,
        budget=5.0,
    )
    assert solve_kappa_tilde(config) == 0.0


def test_kappa_tilde_monotone_in_w(public_example):
    doubled = GameConfig(
        n=2,
        bugs=(OrganicBug(0.5, 0.5, 20.0),),
        dist=public_example.dist,
        budget=5.0,
    )
    assert solve_kappa_tilde(doubled) > solve_kappa_tilde(public_example) + 1e-6


def test_kappa_a_values(public_example):
    assert solve_kappa_a(0.9, public_example) == 0.0  # budget below the floor
    assert solve_kappa_a(5.0, public_example) == pytest.approx(KAPPA_A_5, abs=1e-6)
    assert solve_kappa_a(100.0, public_example) == pytest.approx(100.0, abs=1e-6)
    grid = [solve_kappa_a(b, public_example) for b in (1.5, 2.0, 5.0, 20.0)]
    assert all(b >= a for a, b in zip(grid, grid[1:]))


# -- the public optimum ------------------------------------------------------------


def test_optimize_public_example(public_example):
    report = optimize_public(public_example)
    assert report.kappa_hat_star == pytest.approx(KAPPA_TILDE, abs=1e-9)
    assert report.kappa_a == pytest.approx(KAPPA_A_5, abs=1e-6)
    assert report.kappa_hat_star == min(report.kappa_tilde, report.kappa_a)
    assert report.beneficial
    assert report.assumption_notes == ()
    out = solve_kappa_star(report.prizes, public_example)
    assert abs(out.kappa_star - report.kappa_hat_star) <= 1e-8


def test_optimize_public_budget_constrained(public_example):
    report = optimize_public(_with_budget(public_example, 1.2))
    assert report.kappa_hat_star == pytest.approx(report.kappa_a, abs=1e-12)
    assert report.kappa_a < report.kappa_tilde
    art = report.prizes.artificial[0]
    assert art.q_a == 1.0
    assert art.v_a == pytest.approx(1.2, abs=1e-9)  # full budget on the planted bug
    out = solve_kappa_star(report.prizes, public_example)
    assert abs(out.kappa_star - report.kappa_hat_star) <= 1e-8


def test_optimize_public_worthless(public_example):
    config = GameConfig(
        n=2,
        bugs=(OrganicBug(0.5, 0.5, 0.0),),
        dist=public_example.dist,
        budget=5.0,
    )
    report = optimize_public(config)
    assert report.kappa_hat_star == 0.0
    assert report.prizes.total_posted() == 0.0
    assert any("w*mu*q" in note for note in report.assumption_notes)


def test_beneficial_public_example(public_example):
    verdict = is_beneficial_public(public_example)
    assert verdict.beneficial
    assert verdict.kappa_tilde == pytest.approx(KAPPA_TILDE, abs=1e-9)
    assert verdict.kappa_0 == pytest.approx(KAPPA_STAR_V5, abs=1e-9)


def test_beneficial_public_dominant_organic():
    # mu = q = 1: the organic bug is as incentive-efficient as any artificial
    # one, so planting can never help, whatever the budget or valuation
    config = GameConfig(
        n=2,
        bugs=(OrganicBug(1.0, 1.0, 20.0),),
        dist=CostDistribution.uniform(1.0, 2.0),
        budget=1.5,
    )
    verdict = is_beneficial_public(config)
    assert not verdict.beneficial
    assert verdict.kappa_tilde > verdict.kappa_0  # the naive margin misleads here


def test_beneficial_public_switches_with_budget(public_example):
    verdicts = [
        is_beneficial_public(_with_budget(public_example, b)).beneficial
        for b in (5.0, 20.0, 100.0)
    ]
    assert verdicts[0] is True
    assert verdicts[-1] is False


# -- convergence -------------------------------------------------------------------


def test_convergence_table_example(public_example):
    rows = convergence_table(public_example, ALL_ON_ORGANIC, [2, 5, 10, 50, 200, 1000])
    c_n = [r["c_n"] for r in rows]
    assert all(b < a for a, b in zip(c_n, c_n[1:]))  # decreasing toward c_low = 1
    gaps = [r["abs_nF_minus_kappa"] for r in rows]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 0.05
    kappa = rows[-1]["kappa_star"]
    p_inf = detect_prob_infinity(0.5, kappa)
    assert abs(rows[-1]["P_n_bug_1"] - p_inf) < 0.01


def test_convergence_table_degenerate_row(public_example):
    rows = convergence_table(public_example, ALL_ON_ORGANIC, [1])
    # a single searching agent wins any found bug outright: Psi is constant
    from bountylab import solve_equilibrium

    out = solve_equilibrium(ALL_ON_ORGANIC, public_example.with_n(1))
    assert rows[0]["c_n"] == pytest.approx(out.c_star, abs=1e-12)


def test_convergence_table_rejects_huge_n(public_example):
    with pytest.raises(ValueError):
        convergence_table(public_example, ALL_ON_ORGANIC, [10**6 + 1])


def test_distribution_free_limit():
    prizes = PrizeSchedule.organic_only((5.0,))
    kappas = []
    for dist in (
        CostDistribution.uniform(1.0, 2.0),
        CostDistribution.power(1.0, 2.0, 2.0),
    ):
        config = GameConfig(
            n=2, bugs=(OrganicBug(0.5, 0.5, 10.0),), dist=dist, budget=5.0
        )
        kappas.append(solve_kappa_star(prizes, config).kappa_star)
    assert abs(kappas[0] - kappas[1]) <= 1e-10


# -- Hausdorff distance ---------------------------------------------------------------


def test_hausdorff_examples():
    assert hausdorff_distance([(0.0, 0.0)], [(0.0, 0.0)]) == 0.0
    assert hausdorff_distance([(0.0, 0.0)], [(3.0, 4.0)]) == pytest.approx(5.0)
    assert hausdorff_distance([(0.0, 0.0), (1.0, 0.0)], [(0.0, 1.0)]) == pytest.approx(
        math.sqrt(2.0)
    )


def test_hausdorff_rejects_empty():
    with pytest.raises(ValueError):
        hausdorff_distance(np.empty((0, 2)), [(0.0, 0.0)])


def test_hausdorff_metric_properties():
    rng = np.random.default_rng(41)
    for _ in range(25):
        a = rng.normal(size=(rng.integers(1, 8), 2))
        b = rng.normal(size=(rng.integers(1, 8), 2))
        c = rng.normal(size=(rng.integers(1, 8), 2))
        dab, dba = hausdorff_distance(a, b), hausdorff_distance(b, a)
        assert dab == dba
        assert dab >= 0.0
        assert hausdorff_distance(a, a) == 0.0
        assert hausdorff_distance(a, c) <= dab + hausdorff_distance(b, c) + 1e-12


# -- solution-set convergence ----------------------------------------------------------


def test_solution_set_distance_decreasing(public_example):
    for q_a in (1.0 / 3.0, 0.5, 1.0):
        distances = []
        for n in (5, 20, 100):
            result = solution_set_distance(public_example, n, q_a)
            assert result.feasible and result.exact
            distances.append(result.distance)
        assert all(b < a for a, b in zip(distances, distances[1:]))


def test_solution_set_distance_infeasible_slice(public_example):
    # tiny budget: neither the finite-n nor the limit slice meets the simplex
    result = solution_set_distance(_with_budget(public_example, 1.01), 5, 0.05)
    assert not result.feasible


def test_solution_set_distance_rejects_bad_args(public_example):
    with pytest.raises(ValueError):
        solution_set_distance(public_example, 1, 0.5)
    with pytest.raises(ValueError):
        solution_set_distance(public_example, 5, 0.0)


def test_solution_set_distance_sampled_branch():
    config = GameConfig(
        n=2,
        bugs=(OrganicBug(0.5, 0.5, 10.0), OrganicBug(0.5, 0.4, 8.0)),
        dist=CostDistribution.uniform(1.0, 2.0),
        budget=6.0,
    )
    r1 = solution_set_distance(config, 10, 1.0, sample_step=0.05)
    r2 = solution_set_distance(config, 200, 1.0, sample_step=0.05)
    assert r1.feasible and not r1.exact
    assert r1.error_bound == pytest.approx(0.05 * math.sqrt(3.0))
    assert r2.distance < r1.distance + r1.error_bound


# -- finite/asymptotic verdict agreement -----------------------------------------------


def test_public_private_verdicts_agree_for_large_n():
    # drawn over families with a positive finite density at c_low; power laws
    # with alpha near 2 can push the verdict flip beyond n = 2000 even at a
    # kappa margin of 0.1 (the equivalence is only asymptotic)
    rng = np.random.default_rng(43)
    checked = 0
    while checked < 20:
        config = random_public_game(rng, nice_floor=True)
        verdict = is_beneficial_public(config)
        if abs(verdict.margin) <= 0.05:
            continue
        public_says = verdict.beneficial
        for n in (200, 500, 2000):
            cfg_n = config.with_n(n)
            private_says = is_artificial_beneficial(cfg_n).beneficial
            assert private_says == public_says, (config, n)
        checked += 1
