"""Bounty-design laboratory for crowdsearch contests.

Computes the symmetric equilibrium of the second-stage search game, solves
the designer's prize and artificial-bug problem for invited (finite-n) and
open (large-crowd limit) programs, validates the closed forms by Monte Carlo
and enumeration oracles, and implements the commit-reveal protocol that makes
planted bugs publicly credible.
"""

from .asymptotic import (
    Kappa0Breakdown,
    PublicBenefitVerdict,
    PublicDesignReport,
    PublicOutcome,
    SetDistanceResult,
    convergence_table,
    detect_prob_infinity,
    hausdorff_distance,
    is_beneficial_public,
    optimize_public,
    psi_infinity,
    solution_set_distance,
    solve_kappa0,
    solve_kappa_a,
    solve_kappa_star,
    solve_kappa_tilde,
    utility_infinity,
)
from .costs import CostDistribution
from .credibility import (
    CommitmentRecord,
    RevealRecord,
    coin_resolve,
    commit,
    read_commitment_file,
    read_reveal_file,
    verify_coin,
    verify_reveal,
    write_commitment_file,
    write_reveal_file,
)
from .design import (
    BenefitVerdict,
    C0Breakdown,
    DesignReport,
    SolutionSet,
    collapse_artificial,
    designer_utility,
    is_artificial_beneficial,
    omega,
    optimize,
    solution_set,
    solve_c0,
    solve_c_a,
    solve_c_tilde,
)
from .game import (
    ArtificialBugDesign,
    EquilibriumOutcome,
    GameConfig,
    OrganicBug,
    PrizeSchedule,
    detect_prob,
    expected_benefit_psi,
    solve_equilibrium,
    win_prob_phi,
    win_prob_phi_oracle,
)
from .simulation import DeviationGap, SimConfig, SimReport, SimStat, check_equilibrium, simulate

__all__ = [
    "ArtificialBugDesign",
    "BenefitVerdict",
    "C0Breakdown",
    "CommitmentRecord",
    "CostDistribution",
    "DesignReport",
    "DeviationGap",
    "EquilibriumOutcome",
    "GameConfig",
    "Kappa0Breakdown",
    "OrganicBug",
    "PrizeSchedule",
    "PublicBenefitVerdict",
    "PublicDesignReport",
    "PublicOutcome",
    "RevealRecord",
    "SetDistanceResult",
    "SimConfig",
    "SimReport",
    "SimStat",
    "SolutionSet",
    "coin_resolve",
    "collapse_artificial",
    "commit",
    "convergence_table",
    "check_equilibrium",
    "designer_utility",
    "detect_prob",
    "detect_prob_infinity",
    "expected_benefit_psi",
    "hausdorff_distance",
    "is_artificial_beneficial",
    "is_beneficial_public",
    "omega",
    "optimize",
    "optimize_public",
    "psi_infinity",
    "read_commitment_file",
    "read_reveal_file",
    "simulate",
    "solution_set",
    "solution_set_distance",
    "solve_c0",
    "solve_c_a",
    "solve_c_tilde",
    "solve_equilibrium",
    "solve_kappa0",
    "solve_kappa_a",
    "solve_kappa_star",
    "solve_kappa_tilde",
    "utility_infinity",
    "verify_coin",
    "verify_reveal",
    "win_prob_phi",
    "win_prob_phi_oracle",
    "write_commitment_file",
    "write_reveal_file",
]

__version__ = "0.1.0"
