"""Command-line front end: validated JSON configs in, CSV datasets out.

Subcommands: equilibrium, design, public, simulate, figures, commit,
reveal-verify, coin. Outputs are deterministic given the config bytes (and
seed for simulation modes). Exit codes: 0 success, 1 failed protocol
verification, 2 config or argument validation failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import asymptotic, credibility, design
from .costs import CostDistribution
from .game import ArtificialBugDesign, GameConfig, OrganicBug, PrizeSchedule, solve_equilibrium
from .simulation import SimConfig, simulate

SPEC_VERSION = 1
MODES = ("equilibrium", "design", "public", "simulate", "figures", "commit", "reveal-verify", "coin")

FIGURE_DEFAULTS = {
    "which": [1, 2, 3, 4, 5],
    "w_list": [2.0, 4.0, 6.0],
    "q_a_fig1": [0.2, 0.5, 1.0],
    "q_a_fig5": [1.0 / 3.0, 0.5, 1.0],
    "grid_points": 201,
    "n_list_curves": [2, 5, 10, 50, 200, 1000],
    "n_list_distance": [5, 20, 100, 500],
}


class ConfigError(Exception):
    """Validation failure; carries the offending field path."""

    def __init__(self, path: str, message: str):
        super().__init__(f"config error at {path}: {message}")


def _fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.17g}"
    return str(x)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(x) for x in row])


def _check_keys(obj: dict, allowed: set[str], path: str) -> None:
    for key in obj:
        if key not in allowed:
            raise ConfigError(f"{path}.{key}", "unknown field")


def _get(obj: dict, key: str, path: str, kind, required: bool = True, default=None):
    if key not in obj:
        if required:
            raise ConfigError(f"{path}.{key}", "missing required field")
        return default
    value = obj[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return value
    if not isinstance(value, kind) or isinstance(value, bool) and kind is not bool:
        raise ConfigError(f"{path}.{key}", f"expected {kind.__name__}")
    return value


def _parse_dist(obj: dict, path: str) -> CostDistribution:
    _check_keys(obj, {"kind", "c_low", "c_high", "alpha", "rate"}, path)
    kind = _get(obj, "kind", path, str)
    if kind not in ("uniform", "power", "exponential"):
        raise ConfigError(f"{path}.kind", f"unknown distribution kind {kind!r}")
    if kind != "power" and "alpha" in obj:
        raise ConfigError(f"{path}.alpha", "only valid for the power family")
    if kind != "exponential" and "rate" in obj:
        raise ConfigError(f"{path}.rate", "only valid for the exponential family")
    try:
        return CostDistribution.from_json(obj)
    except (ValueError, KeyError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_game(obj: dict, path: str) -> GameConfig:
    _check_keys(obj, {"n", "budget", "dist", "bugs"}, path)
    n = _get(obj, "n", path, int)
    budget = _get(obj, "budget", path, float)
    dist = _parse_dist(_get(obj, "dist", path, dict), f"{path}.dist")
    bugs_raw = _get(obj, "bugs", path, list)
    bugs = []
    for i, bug in enumerate(bugs_raw):
        bug_path = f"{path}.bugs[{i}]"
        if not isinstance(bug, dict):
            raise ConfigError(bug_path, "expected object")
        _check_keys(bug, {"mu", "q", "w"}, bug_path)
        try:
            bugs.append(
                OrganicBug(
                    mu=_get(bug, "mu", bug_path, float),
                    q=_get(bug, "q", bug_path, float),
                    w=_get(bug, "w", bug_path, float),
                )
            )
        except ValueError as exc:
            raise ConfigError(bug_path, str(exc)) from exc
    try:
        return GameConfig(n=n, bugs=tuple(bugs), dist=dist, budget=budget)
    except ValueError as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_prizes(obj: dict, path: str, n_bugs: int) -> PrizeSchedule:
    _check_keys(obj, {"v", "artificial"}, path)
    v = _get(obj, "v", path, list)
    if len(v) != n_bugs:
        raise ConfigError(f"{path}.v", f"expected {n_bugs} entries, got {len(v)}")
    artificial = []
    for i, art in enumerate(obj.get("artificial", [])):
        art_path = f"{path}.artificial[{i}]"
        if not isinstance(art, dict):
            raise ConfigError(art_path, "expected object")
        _check_keys(art, {"v_a", "q_a"}, art_path)
        try:
            artificial.append(
                ArtificialBugDesign(
                    v_a=_get(art, "v_a", art_path, float),
                    q_a=_get(art, "q_a", art_path, float),
                )
            )
        except ValueError as exc:
            raise ConfigError(art_path, str(exc)) from exc
    try:
        return PrizeSchedule(v=tuple(float(x) for x in v), artificial=tuple(artificial))
    except (ValueError, TypeError) as exc:
        raise ConfigError(path, str(exc)) from exc


def _parse_figures(obj: dict, path: str) -> dict:
    _check_keys(obj, set(FIGURE_DEFAULTS), path)
    params = dict(FIGURE_DEFAULTS)
    for key, value in obj.items():
        params[key] = value
    for key in ("which", "n_list_curves", "n_list_distance"):
        if not isinstance(params[key], list) or not all(
            isinstance(x, int) and not isinstance(x, bool) for x in params[key]
        ):
            raise ConfigError(f"{path}.{key}", "expected a list of integers")
    if any(w not in (1, 2, 3, 4, 5) for w in params["which"]):
        raise ConfigError(f"{path}.which", "figure numbers must lie in 1..5")
    return params


class RunConfig:
    """Parsed, validated run configuration."""

    def __init__(self, raw: dict):
        allowed = {
            "spec_version",
            "mode",
            "game",
            "prizes",
            "output_dir",
            "seed",
            "trials",
            "threshold",
            "n_list",
            "figures",
        }
        if not isinstance(raw, dict):
            raise ConfigError("$", "top-level value must be an object")
        _check_keys(raw, allowed, "$")
        if _get(raw, "spec_version", "$", int) != SPEC_VERSION:
            raise ConfigError("$.spec_version", f"expected {SPEC_VERSION}")
        self.mode = _get(raw, "mode", "$", str, required=False)
        if self.mode is not None and self.mode not in MODES:
            raise ConfigError("$.mode", f"unknown mode {self.mode!r}")
        self.game = _parse_game(_get(raw, "game", "$", dict), "$.game")
        self.prizes = None
        if "prizes" in raw:
            self.prizes = _parse_prizes(
                _get(raw, "prizes", "$", dict), "$.prizes", len(self.game.bugs)
            )
        self.output_dir = _get(raw, "output_dir", "$", str, required=False)
        self.seed = _get(raw, "seed", "$", int, required=False)
        self.trials = _get(raw, "trials", "$", int, required=False)
        self.threshold = _get(raw, "threshold", "$", float, required=False)
        self.n_list = _get(raw, "n_list", "$", list, required=False)
        if self.n_list is not None and not all(
            isinstance(x, int) and not isinstance(x, bool) for x in self.n_list
        ):
            raise ConfigError("$.n_list", "expected a list of integers")
        self.figures = _parse_figures(raw.get("figures", {}), "$.figures")


def _load_config(path: str) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError("$", f"cannot read config: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"$ (line {exc.lineno})", f"invalid JSON: {exc.msg}") from exc
    return RunConfig(raw)


# -- mode implementations -----------------------------------------------------


def _run_equilibrium(cfg: RunConfig, out: Path) -> list[Path]:
    if cfg.prizes is None:
        raise ConfigError("$.prizes", "equilibrium mode requires a prize schedule")
    outcome = solve_equilibrium(cfg.prizes, cfg.game)
    header = ["c_star", "boundary", "participation", "expected_payout", "designer_utility"]
    row: list = [
        outcome.c_star,
        outcome.boundary,
        outcome.participation,
        outcome.expected_payout,
        outcome.designer_utility,
    ]
    for l, (cond, uncond) in enumerate(
        zip(outcome.detect_organic_conditional, outcome.detect_organic_unconditional), start=1
    ):
        header += [f"detect_cond_bug_{l}", f"detect_uncond_bug_{l}"]
        row += [cond, uncond]
    for k, det in enumerate(outcome.detect_artificial, start=1):
        header.append(f"detect_artificial_{k}")
        row.append(det)
    path = out / "equilibrium.csv"
    _write_csv(path, header, [row])
    return [path]


def _schedule_columns(schedule: PrizeSchedule) -> tuple[list[str], list]:
    header = [f"v_bug_{l + 1}" for l in range(len(schedule.v))]
    row: list = list(schedule.v)
    art = schedule.artificial[0] if schedule.artificial else ArtificialBugDesign(0.0, 0.0)
    header += ["v_a", "q_a"]
    row += [art.v_a, art.q_a]
    return header, row


def _run_design(cfg: RunConfig, out: Path) -> list[Path]:
    report = design.optimize(cfg.game)
    header = [
        "c_tilde",
        "c_a",
        "c_0",
        "c_hat_star",
        "beneficial",
        "marginal",
        "utility_at_optimum",
        "spend",
    ]
    row: list = [
        report.c_tilde,
        report.c_a,
        report.c_0,
        report.c_hat_star,
        report.beneficial,
        report.marginal,
        report.utility_at_optimum,
        report.spend,
    ]
    sched_header, sched_row = _schedule_columns(report.canonical_prizes)
    header += sched_header
    row += sched_row
    for l, c_l in enumerate(report.per_bug_c, start=1):
        header.append(f"c_l_bug_{l}")
        row.append(c_l)
    header.append("best_bug")
    row.append(report.best_bug + 1)
    path = out / "design_report.csv"
    _write_csv(path, header, [row])
    return [path]


def _run_public(cfg: RunConfig, out: Path) -> list[Path]:
    report = asymptotic.optimize_public(cfg.game)
    header = [
        "kappa_tilde",
        "kappa_a",
        "kappa_0",
        "kappa_hat_star",
        "beneficial",
        "marginal",
        "utility_at_optimum",
    ]
    row: list = [
        report.kappa_tilde,
        report.kappa_a,
        report.kappa_0,
        report.kappa_hat_star,
        report.beneficial,
        report.marginal,
        report.utility_at_optimum,
    ]
    sched_header, sched_row = _schedule_columns(report.prizes)
    header += sched_header
    row += sched_row
    for l, k_l in enumerate(report.per_bug_kappa, start=1):
        header.append(f"kappa_l_bug_{l}")
        row.append(k_l)
    header += ["best_bug", "assumption_notes"]
    row += [report.best_bug + 1, ";".join(report.assumption_notes)]
    paths = [out / "public_report.csv"]
    _write_csv(paths[0], header, [row])
    if cfg.prizes is not None:
        outcome = asymptotic.solve_kappa_star(cfg.prizes, cfg.game)
        header2 = ["kappa_star", "trivial", "utility_inf"]
        row2: list = [outcome.kappa_star, outcome.trivial, outcome.utility_inf]
        for l, p_inf in enumerate(outcome.detect_inf, start=1):
            header2.append(f"detect_inf_bug_{l}")
            row2.append(p_inf)
        paths.append(out / "public_outcome.csv")
        _write_csv(paths[1], header2, [row2])
    return paths


def _run_simulate(cfg: RunConfig, out: Path, seed, trials) -> list[Path]:
    if cfg.prizes is None:
        raise ConfigError("$.prizes", "simulate mode requires a prize schedule")
    seed = seed if seed is not None else cfg.seed
    trials = trials if trials is not None else cfg.trials
    if seed is None:
        raise ConfigError("$.seed", "simulate mode requires a seed")
    if trials is None:
        raise ConfigError("$.trials", "simulate mode requires a trial count")
    threshold = cfg.threshold
    if threshold is None:
        threshold = solve_equilibrium(cfg.prizes, cfg.game).c_star
    try:
        sim = SimConfig(trials=trials, seed=seed, threshold=threshold)
        report = simulate(cfg.prizes, cfg.game, sim)
    except ValueError as exc:
        raise ConfigError("$.threshold", str(exc)) from exc
    rows = [
        [s.name, s.estimate, s.std_error, s.closed_form, s.z_score] for s in report.rows()
    ]
    path = out / "sim_report.csv"
    _write_csv(path, ["statistic", "estimate", "std_error", "closed_form", "z_score"], rows)
    return [path]


def _run_figures(cfg: RunConfig, out: Path) -> list[Path]:
    params = cfg.figures
    game = cfg.game
    which = set(params["which"])
    grid_points = params["grid_points"]
    lo = max(game.dist.c_low, 0.0)
    hi = game.dist.upper_bound()
    c_grid = np.linspace(lo, hi, grid_points)
    paths: list[Path] = []

    if 1 in which:
        if len(game.bugs) != 1:
            raise ConfigError("$.game.bugs", "figure 1 needs exactly one organic bug")
        c_target = design.solve_c_tilde(game)
        rows = []
        for q_a in params["q_a_fig1"]:
            sset = design.solution_set(game, c_target, q_a)
            a_org = sset.coeffs[0]
            a_art = sset.coeffs[-1]
            if a_art <= 0.0:
                raise ConfigError("$.figures.q_a_fig1", "q_a = 0 slice is degenerate")
            v_max = c_target / a_org if a_org > 0 else 0.0
            for v in np.linspace(0.0, v_max, grid_points):
                rows.append([f"qa_{q_a:.6g}", q_a, v, (c_target - a_org * v) / a_art])
        for v in np.linspace(0.0, game.budget, grid_points):
            rows.append(["budget", "", v, game.budget - v])
        paths.append(out / "fig1_solution_sets.csv")
        _write_csv(paths[-1], ["curve", "q_a", "v", "v_a"], rows)

    if 2 in which:
        rows = []
        for w in params["w_list"]:
            bugs = tuple(OrganicBug(mu=b.mu, q=b.q, w=float(w)) for b in game.bugs)
            game_w = GameConfig(n=game.n, bugs=bugs, dist=game.dist, budget=game.budget)
            for c_hat in c_grid:
                rows.append([w, c_hat, design.designer_utility(float(c_hat), game_w)])
        paths.append(out / "fig2_utility_curves.csv")
        _write_csv(paths[-1], ["w", "c_hat", "W"], rows)
        markers = [
            ["c_0", design.solve_c0(game.budget, game).c_0],
            ["c_a", design.solve_c_a(game.budget, game)],
        ]
        paths.append(out / "fig2_markers.csv")
        _write_csv(paths[-1], ["name", "value"], markers)

    if which & {3, 4}:
        if cfg.prizes is None:
            raise ConfigError("$.prizes", "figures 3 and 4 require a prize schedule")
        n_list = cfg.n_list or params["n_list_curves"]
        curve_rows, scaled_rows = [], []
        for n in n_list:
            game_n = game.with_n(int(n))
            for c_hat in c_grid:
                w_n = design.designer_utility(float(c_hat), game_n)
                curve_rows.append([n, c_hat, w_n])
                scaled_rows.append([n, n * game.dist.cdf(float(c_hat)), w_n])
        if 3 in which:
            paths.append(out / "fig3_utility_convergence.csv")
            _write_csv(paths[-1], ["n", "c_hat", "W_n"], curve_rows)
        if 4 in which:
            paths.append(out / "fig4_utility_convergence_scaled.csv")
            _write_csv(paths[-1], ["n", "n_F_c_hat", "W_n"], scaled_rows)
        try:
            table = asymptotic.convergence_table(game, cfg.prizes, [int(n) for n in n_list])
        except ValueError as exc:
            raise ConfigError("$.game.dist.c_low", str(exc)) from exc
        header = list(table[0].keys())
        paths.append(out / "convergence_table.csv")
        _write_csv(paths[-1], header, [[r[k] for k in header] for r in table])

    if 5 in which:
        rows = []
        for q_a in params["q_a_fig5"]:
            for n in params["n_list_distance"]:
                try:
                    result = asymptotic.solution_set_distance(game, int(n), float(q_a))
                except ValueError as exc:
                    raise ConfigError("$.figures.q_a_fig5", str(exc)) from exc
                if not result.feasible:
                    raise ConfigError(
                        "$.figures.q_a_fig5",
                        f"infeasible slice at q_a={q_a}, n={n}: no budget-feasible prizes",
                    )
                rows.append([q_a, n, result.distance])
        paths.append(out / "fig5_set_distances.csv")
        _write_csv(paths[-1], ["q_a", "n", "d_hausdorff"], rows)

    return paths


# -- credibility subcommands --------------------------------------------------


def _cmd_commit(args) -> int:
    payload_path = Path(args.payload)
    try:
        payload = payload_path.read_bytes()
    except OSError as exc:
        print(f"error: cannot read payload: {exc}", file=sys.stderr)
        return 2
    if args.salt_hex is not None:
        try:
            salt = bytes.fromhex(args.salt_hex)
        except ValueError:
            print("error: --salt-hex must be valid hex", file=sys.stderr)
            return 2
    else:
        salt = os.urandom(credibility.SALT_LEN)
    try:
        record = credibility.commit(payload, salt=salt, created_at=args.timestamp)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    commitment_path = out / "commitment.txt"
    reveal_path = out / "reveal.txt"
    credibility.write_commitment_file(record, commitment_path)
    credibility.write_reveal_file(salt, args.payload, reveal_path)
    print(commitment_path)
    print(reveal_path)
    return 0


def _cmd_reveal_verify(args) -> int:
    try:
        commitment = credibility.read_commitment_file(args.commitment)
        reveal = credibility.read_reveal_file(args.reveal)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    ok = credibility.verify_reveal(commitment, reveal)
    print(f"verified: {'true' if ok else 'false'}")
    return 0 if ok else 1


def _cmd_coin(args) -> int:
    try:
        commitment = credibility.read_commitment_file(args.commitment)
        reveal = credibility.read_reveal_file(args.reveal)
        beacon = bytes.fromhex(args.beacon)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if not 0.0 <= args.mu_a <= 1.0:
        print("error: --mu-a must lie in [0, 1]", file=sys.stderr)
        return 2
    if args.claimed is not None:
        claimed = args.claimed == "true"
        ok = credibility.verify_coin(commitment, reveal, beacon, args.mu_a, claimed)
        print(f"verified: {'true' if ok else 'false'}")
        return 0 if ok else 1
    if not credibility.verify_reveal(commitment, reveal):
        print("verified: false")
        return 1
    if len(reveal.payload) != credibility.SALT_LEN:
        print("error: revealed payload is not a 32-byte coin seed", file=sys.stderr)
        return 2
    insert = credibility.coin_resolve(reveal.payload, beacon, args.mu_a)
    print(f"insert: {'true' if insert else 'false'}")
    return 0


# -- entry point ---------------------------------------------------------------


def _run_config_mode(mode: str, args) -> int:
    try:
        cfg = _load_config(args.config)
        if cfg.mode is not None and cfg.mode != mode:
            raise ConfigError("$.mode", f"config says {cfg.mode!r} but subcommand is {mode!r}")
        out = Path(args.out) if args.out else Path(cfg.output_dir or ".")
        out.mkdir(parents=True, exist_ok=True)
        if mode == "equilibrium":
            paths = _run_equilibrium(cfg, out)
        elif mode == "design":
            paths = _run_design(cfg, out)
        elif mode == "public":
            paths = _run_public(cfg, out)
        elif mode == "simulate":
            paths = _run_simulate(cfg, out, args.seed, args.trials)
        else:
            paths = _run_figures(cfg, out)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    for path in paths:
        print(path)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="bountylab",
        description="Crowdsearch bounty design: equilibria, optimal prizes, "
        "asymptotics, simulation, and the commit-reveal protocol.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for mode in ("equilibrium", "design", "public", "simulate", "figures"):
        p = sub.add_parser(mode, help=f"run {mode} mode on a JSON config")
        p.add_argument("--config", required=True, help="path to the JSON run config")
        p.add_argument("--out", default=None, help="output directory for CSV files")
        p.add_argument("--seed", type=int, default=None, help="simulation seed (u64)")
        p.add_argument("--trials", type=int, default=None, help="simulation trial count")

    p = sub.add_parser("commit", help="commit to a payload file")
    p.add_argument("--payload", required=True)
    p.add_argument("--salt-hex", default=None, help="64 hex chars; fresh entropy if omitted")
    p.add_argument("--timestamp", default=None, help="RFC-3339 timestamp to record")
    p.add_argument("--out", default=".")

    p = sub.add_parser("reveal-verify", help="check a reveal against a commitment")
    p.add_argument("--commitment", required=True)
    p.add_argument("--reveal", required=True)

    p = sub.add_parser("coin", help="resolve or verify the insertion coin")
    p.add_argument("--commitment", required=True)
    p.add_argument("--reveal", required=True)
    p.add_argument("--beacon", required=True, help="public randomness, hex")
    p.add_argument("--mu-a", type=float, required=True, dest="mu_a")
    p.add_argument("--claimed", choices=["true", "false"], default=None)

    args = parser.parse_args(argv)
    if args.command in ("equilibrium", "design", "public", "simulate", "figures"):
        return _run_config_mode(args.command, args)
    if args.command == "commit":
        return _cmd_commit(args)
    if args.command == "reveal-verify":
        return _cmd_reveal_verify(args)
    return _cmd_coin(args)


if __name__ == "__main__":
    sys.exit(main())
