"""Command-line interface: ``octoewl {simulate,verify,equilibrium,payoff}``.

Exit codes: 0 success, 1 verification failure, 2 malformed input,
3 an input violates an invariant (for example a non-unit strategy).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import checks
from .closed_form import landsburg_batch, theorem1_batch
from .errors import GameSpecError, InvalidStrategyError
from .ewl import build_instance, canonical_eta, simulate_batch
from .gamefile import game_to_dict, load_game, shipped_games
from .games import (
    Game,
    SearchConfig,
    _solve_matrix_game,
    best_response,
    classical_payoff,
    flip_mixture,
    gmix_payoff,
    maximin,
    quantum_payoff,
    verify_equilibrium,
)
from .quantum import MixedQuantumStrategy, SU2Strategy, haar_coefficients

SCHEMA_VERSION = 1

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INVARIANT = 0, 1, 2, 3


class InputError(Exception):
    """Malformed command-line input (exit 2)."""


# --- argument helpers ----------------------------------------------------------


def _resolve_game(spec: str) -> Game:
    path = Path(spec)
    if not path.exists():
        bundled = shipped_games()
        if spec in bundled:
            path = bundled[spec]
    return load_game(path)


def _parse_floats(text: str, what: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse {what} {text!r}") from exc


def _expand(tokens: Sequence[str] | None, n: int, default: str) -> list[str]:
    tokens = list(tokens or [default])
    if len(tokens) == 1:
        tokens *= n
    if len(tokens) != n:
        raise InputError(f"expected 1 or {n} per-player values, got {len(tokens)}")
    return tokens


def _pure_strategy(token: str, n: int, player: int, seed: int) -> SU2Strategy:
    key = token.strip().upper()
    if key == "N":
        return SU2Strategy.identity()
    if key == "F":
        return SU2Strategy.flip(canonical_eta(n))
    if key in ("R", "RANDOM"):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(7, player)))
        return SU2Strategy.from_coefficients(*haar_coefficients(rng))
    values = _parse_floats(token, "strategy")
    if len(values) != 4:
        raise InputError(f"strategy {token!r} must be N, F, R or four numbers a0,a1,b0,b1")
    return SU2Strategy.from_coefficients(*values)


def _mixed_strategy(token: str, n: int, player: int, seed: int) -> MixedQuantumStrategy:
    key = token.strip().lower()
    if key in ("haar", "h", "uniform"):
        return MixedQuantumStrategy.haar_uniform()
    if key.startswith("mix:"):
        (r,) = _parse_floats(key[4:], "flip probability")
        if not 0.0 <= r <= 1.0:
            raise InvalidStrategyError(f"flip probability {r} outside [0, 1]")
        return flip_mixture(r, canonical_eta(n))
    return MixedQuantumStrategy.pure(_pure_strategy(token, n, player, seed), label=token)


def _coeff_list(s: SU2Strategy) -> list[float]:
    return [float(x) for x in s.coefficients]


# --- output ------------------------------------------------------------------------


def _emit(doc: dict, fmt: str, table: str) -> None:
    if fmt == "structured":
        doc = {"schema_version": SCHEMA_VERSION, **doc}
        sys.stdout.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
    else:
        sys.stdout.write(table.rstrip("\n") + "\n")


def _fmt_vec(v) -> str:
    return "(" + ", ".join(f"{x:.6g}" for x in v) + ")"


# --- commands ----------------------------------------------------------------------


def cmd_simulate(args) -> int:
    game = _resolve_game(args.spec)
    n = game.n_players
    strategies = [
        _pure_strategy(tok, n, j, args.seed)
        for j, tok in enumerate(_expand(args.strategy, n, "N"))
    ]
    coeffs = np.array([s.coefficients for s in strategies])[None]
    closed = (theorem1_batch if n == 3 else landsburg_batch)(coeffs)[0]
    oracle = simulate_batch(build_instance(n), coeffs)[0]
    linf = float(np.abs(closed - oracle).max())
    payoffs = closed @ game.payoffs
    passed = linf <= args.tolerance
    doc = {
        "command": "simulate",
        "game": game_to_dict(game),
        "strategies": [_coeff_list(s) for s in strategies],
        "outcomes": game.labels,
        "closed_form": closed.tolist(),
        "oracle": oracle.tolist(),
        "linf": linf,
        "tolerance": args.tolerance,
        "expected_payoffs": payoffs.tolist(),
        "passed": passed,
    }
    lines = [f"game: {game.name} ({n} players)"]
    for j, s in enumerate(strategies, 1):
        lines.append(f"player {j}: (a0, a1, b0, b1) = {_fmt_vec(s.coefficients)}")
    lines.append(f"{'outcome':<8} {'closed form':>14} {'oracle':>14} {'payoffs':>8}")
    for label, p, q, row in zip(game.labels, closed, oracle, game.payoffs):
        lines.append(f"{label:<8} {p:>14.10f} {q:>14.10f}   {_fmt_vec(row)}")
    lines.append(f"L-inf distance: {linf:.3e} (tolerance {args.tolerance:g})")
    lines.append(f"expected payoffs: {_fmt_vec(payoffs)}")
    _emit(doc, args.format, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


def cmd_verify(args) -> int:
    selected = [k for k in ("theorem1", "orthogonality", "properness", "completeness", "fano", "vanishing")
                if getattr(args, k)]
    if not selected:
        selected = ["theorem1", "orthogonality", "properness", "completeness", "fano"]
    games = [_resolve_game(g) for g in args.game] if args.game else [
        load_game(p) for p in shipped_games().values()
    ]
    results = []
    for name in selected:
        if name == "theorem1":
            results.append(checks.check_theorem1(args.samples, args.seed, args.tolerance))
        elif name == "orthogonality":
            results.append(checks.check_orthogonality())
        elif name == "properness":
            results.append(checks.check_properness(games))
        elif name == "completeness":
            results.append(checks.check_completeness(games))
        elif name == "fano":
            results.append(checks.check_fano(args.samples, args.seed))
        elif name == "vanishing":
            results.append(checks.check_vanishing(args.samples, args.seed))
    passed = all(r.passed for r in results)
    doc = {"command": "verify", "passed": passed, "checks": [r.to_dict() for r in results],
           "seed": args.seed, "samples": args.samples}
    lines = []
    for r in results:
        lines.append(f"[{'PASS' if r.passed else 'FAIL'}] {r.name}")
        for key, val in r.details.items():
            if isinstance(val, dict) and "value" in val:
                rel = ">" if val["requires"] == "greater" else "<="
                lines.append(f"    {key:<40} {val['value']:.3e}  (needs {rel} {val['tolerance']:.0e})")
            else:
                lines.append(f"    {key:<40} {val}")
        for f in r.failures:
            lines.append(f"    failure: {f}")
    _emit(doc, args.format, "\n".join(lines))
    return EXIT_OK if passed else EXIT_FAIL


def _config(args) -> SearchConfig:
    return SearchConfig(samples=args.samples, seed=args.seed, workers=args.workers)


def _classical_value(game: Game, player: int) -> float:
    other = 1 - player
    table = np.empty((2, 2))
    for a in range(2):
        for b in range(2):
            bits = [0, 0]
            bits[player], bits[other] = a, b
            table[a, b] = game.payoffs[2 * bits[0] + bits[1], player]
    return _solve_matrix_game(table)[2]


def cmd_equilibrium(args) -> int:
    game = _resolve_game(args.spec)
    n = game.n_players
    if args.maximin:
        if n != 2:
            raise InputError("--maximin needs a two-player game")
        player = args.maximin_player - 1
        res = maximin(game, player)
        support = [[w, _coeff_list(s)] for w, s in res.strategy.support]
        avg = float(game.outcome_average[player])
        classical = _classical_value(game, player)
        doc = {
            "command": "equilibrium",
            "mode": "maximin",
            "game": game_to_dict(game),
            "player": player + 1,
            "guaranteed_value": res.guaranteed,
            "upper_bound": res.upper_bound,
            "outcome_average": avg,
            "classical_mixed_value": classical,
            "iterations": res.iterations,
            "strategy": support,
        }
        lines = [
            f"game: {game.name}; maximin for player {player + 1}",
            f"guaranteed value (mixed quantum): {res.guaranteed:.9g}",
            f"upper bound:                      {res.upper_bound:.9g}",
            f"average of the 4 outcomes:        {avg:.9g}",
            f"classical mixed value:            {classical:.9g}",
            f"double-oracle iterations: {res.iterations}",
            "security strategy support (weight, a0, a1, b0, b1):",
        ] + [f"  {w:.6f}  {_fmt_vec(c)}" for w, c in support]
        _emit(doc, args.format, "\n".join(lines))
        return EXIT_OK

    profile = [
        _mixed_strategy(tok, n, j, args.seed) for j, tok in enumerate(_expand(args.player, n, "haar"))
    ]
    config = _config(args)
    for _ in range(args.iterate):
        for j in range(n):
            br = best_response(game, j, profile, config)
            profile[j] = MixedQuantumStrategy.pure(br.strategy, label="br(" + ",".join(
                f"{x:.6g}" for x in br.strategy.coefficients) + ")")
    report = verify_equilibrium(game, profile, args.epsilon, config)
    players = [
        {
            "player": c.player + 1,
            "payoff": c.payoff,
            "payoff_stderr": c.payoff_stderr,
            "best_response": _coeff_list(c.best_response),
            "best_response_payoff": c.best_response_payoff,
            "gain": c.gain,
            "gain_stderr": c.gain_stderr,
            "epsilon": c.epsilon,
            "ok": c.ok,
        }
        for c in report.checks
    ]
    doc = {
        "command": "equilibrium",
        "mode": "verify",
        "game": game_to_dict(game),
        "profile": list(report.profile),
        "payoffs": report.payoffs.tolist(),
        "outcome_average": report.outcome_average.tolist(),
        "players": players,
        "confirmed": report.confirmed,
        "samples": report.samples,
        "seed": report.seed,
    }
    lines = [f"game: {game.name}; profile: {', '.join(report.profile)}",
             f"{'player':<7} {'payoff':>10} {'stderr':>9} {'gain':>11} {'epsilon':>10}  ok"]
    for c in report.checks:
        lines.append(f"{c.player + 1:<7} {c.payoff:>10.5f} {c.payoff_stderr:>9.2e} "
                     f"{c.gain:>11.3e} {c.epsilon:>10.2e}  {'yes' if c.ok else 'NO'}")
    lines.append(f"outcome averages: {_fmt_vec(report.outcome_average)}")
    lines.append(f"equilibrium {'confirmed' if report.confirmed else 'REJECTED'} "
                 f"(samples={report.samples}, seed={report.seed})")
    _emit(doc, args.format, "\n".join(lines))
    return EXIT_OK if report.confirmed else EXIT_FAIL


def cmd_payoff(args) -> int:
    game = _resolve_game(args.spec)
    n = game.n_players
    doc: dict = {"command": "payoff", "game": game_to_dict(game)}
    lines = [f"game: {game.name} ({n} players)"]
    if args.classical:
        label = args.classical.upper()
        if len(label) != n or set(label) - set("NF"):
            raise InputError(f"classical profile must be {n} letters over N/F, got {args.classical!r}")
        v = classical_payoff(game, label)
        doc["classical"] = {"profile": label, "payoffs": v.tolist()}
        lines.append(f"classical {label}: {_fmt_vec(v)}")
    if args.flip_probs:
        probs = _parse_floats(args.flip_probs, "flip probabilities")
        if len(probs) != n:
            raise InputError(f"expected {n} flip probabilities, got {len(probs)}")
        if any(not 0.0 <= r <= 1.0 for r in probs):
            raise InvalidStrategyError("flip probabilities must lie in [0, 1]")
        v = gmix_payoff(game, probs)
        doc["mixed_classical"] = {"flip_probs": probs, "payoffs": v.tolist()}
        lines.append(f"classical mixture {_fmt_vec(probs)}: {_fmt_vec(v)}")
    if args.strategy or not (args.classical or args.flip_probs):
        strategies = [_pure_strategy(t, n, j, args.seed) for j, t in enumerate(_expand(args.strategy, n, "N"))]
        v = quantum_payoff(game, strategies)
        doc["quantum"] = {"strategies": [_coeff_list(s) for s in strategies], "payoffs": v.tolist()}
        lines.append(f"quantum {[_fmt_vec(s.coefficients) for s in strategies]}: {_fmt_vec(v)}")
    doc["outcome_average"] = game.outcome_average.tolist()
    lines.append(f"outcome averages: {_fmt_vec(game.outcome_average)}")
    _emit(doc, args.format, "\n".join(lines))
    return EXIT_OK


# --- parser ------------------------------------------------------------------------


_DEFAULTS = {"seed": 0, "samples": 100_000, "tolerance": 1e-9, "format": "table", "workers": 1}


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    p.add_argument("--seed", type=int, default=s, help="random seed (default 0)")
    p.add_argument("--samples", type=int, default=s, help="Monte Carlo / sweep samples (default 100000)")
    p.add_argument("--tolerance", type=float, default=s, help="closed-form vs oracle tolerance (default 1e-9)")
    p.add_argument("--format", choices=("table", "structured"), default=s, help="output format")
    p.add_argument("--workers", type=int, default=s, help="threads for Monte Carlo chunks (default 1)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="octoewl", parents=[common],
        description="Three-player (and two-player) maximally entangled EWL quantum games.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", parents=[common], help="closed-form vs oracle distribution")
    p.add_argument("spec", help="game file, or the name of a bundled game")
    p.add_argument("-s", "--strategy", action="append",
                   help="per-player strategy: N, F, R (Haar random) or a0,a1,b0,b1; repeat per player")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    for flag, text in (
        ("theorem1", "closed forms vs state-vector oracle"),
        ("orthogonality", "outcome-basis Gram matrices and eta probes"),
        ("properness", "classical profiles reproduce the game"),
        ("completeness", "classical mixtures reproduce the mixed extension"),
        ("fano", "Fano table vs Cayley-Dickson and algebra identities"),
        ("vanishing", "unused-projection structure (not part of the default set)"),
    ):
        p.add_argument(f"--{flag}", action="store_true", help=text)
    p.add_argument("--game", action="append", help="game file(s) for properness/completeness")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("equilibrium", parents=[common], help="verify or search equilibria")
    p.add_argument("spec")
    p.add_argument("-p", "--player", action="append",
                   help="per-player strategy: haar, N, F, R, mix:<flip prob> or a0,a1,b0,b1")
    p.add_argument("--epsilon", type=float, default=None,
                   help="fixed improvement threshold (default: max(1e-6, 3 standard errors))")
    p.add_argument("--iterate", type=int, default=0,
                   help="rounds of best-response updates before verifying")
    p.add_argument("--maximin", action="store_true", help="security strategy search (two players)")
    p.add_argument("--maximin-player", type=int, default=1, choices=(1, 2))
    p.set_defaults(func=cmd_equilibrium)

    p = sub.add_parser("payoff", parents=[common], help="classical, mixed and quantum payoffs")
    p.add_argument("spec")
    p.add_argument("-s", "--strategy", action="append", help="pure quantum strategy per player")
    p.add_argument("--flip-probs", help="comma-separated flip probabilities, one per player")
    p.add_argument("--classical", help="classical profile such as NFN")
    p.set_defaults(func=cmd_payoff)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, value in _DEFAULTS.items():
        if not hasattr(args, key):
            setattr(args, key, value)
    try:
        return args.func(args)
    except (GameSpecError, InputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvalidStrategyError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
