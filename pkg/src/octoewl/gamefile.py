"""Reading and writing game specification files.

A game file is JSON keyed by outcome strings so the payoff order can never be
confused::

    {"name": "...", "description": "...", "players": 3,
     "payoffs": {"NNN": [4, 4, 4], "NNF": [2, 2, 5], ...}}
"""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .errors import GameSpecError
from .ewl import outcome_labels
from .games import Game

__all__ = ["parse_game", "load_game", "game_to_dict", "shipped_games", "shipped_game_path"]


def _no_duplicates(pairs):
    out = {}
    for key, value in pairs:
        if key in out:
            raise GameSpecError(f"duplicate key {key!r}")
        out[key] = value
    return out


def _number(x: Any, where: str) -> float:
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise GameSpecError(f"{where}: expected a number, got {x!r}")
    if not math.isfinite(x):
        raise GameSpecError(f"{where}: payoff must be finite")
    return float(x)


def parse_game(doc: Any) -> Game:
    """Build a :class:`Game` from a decoded document.

    Accepts a game document or any structured CLI output that embeds one
    under ``"game"``.
    """
    if isinstance(doc, dict) and "payoffs" not in doc and isinstance(doc.get("game"), dict):
        doc = doc["game"]
    if not isinstance(doc, dict):
        raise GameSpecError("game document must be a JSON object")
    players = doc.get("players")
    if isinstance(players, bool) or players not in (2, 3):
        raise GameSpecError(f"'players' must be 2 or 3, got {players!r}")
    table = doc.get("payoffs")
    if not isinstance(table, dict):
        raise GameSpecError("'payoffs' must be an object keyed by outcome strings")
    labels = outcome_labels(players)
    bad = [k for k in table if k not in labels]
    if bad:
        raise GameSpecError(f"unknown outcome keys {bad}; expected strings over N/F of length {players}")
    missing = [k for k in labels if k not in table]
    if missing:
        raise GameSpecError(f"missing outcomes {missing}")
    rows = []
    for label in labels:
        entry = table[label]
        if not isinstance(entry, list) or len(entry) != players:
            raise GameSpecError(f"outcome {label}: expected a list of {players} payoffs")
        rows.append([_number(x, f"outcome {label}") for x in entry])
    for key in ("name", "description"):
        if key in doc and not isinstance(doc[key], str):
            raise GameSpecError(f"'{key}' must be a string")
    return Game(players, np.array(rows), doc.get("name", ""), doc.get("description", ""))


def load_game(path: str | Path) -> Game:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise GameSpecError(f"cannot read {path}: {exc}") from exc
    try:
        doc = json.loads(text, object_pairs_hook=_no_duplicates)
    except json.JSONDecodeError as exc:
        raise GameSpecError(f"{path}: invalid JSON ({exc})") from exc
    game = parse_game(doc)
    if not game.name:
        game = Game(game.n_players, game.payoffs, Path(path).stem, game.description)
    return game


def _plain(x: float):
    return int(x) if float(x).is_integer() else float(x)


def game_to_dict(game: Game) -> dict:
    return {
        "name": game.name,
        "description": game.description,
        "players": game.n_players,
        "payoffs": {
            label: [_plain(v) for v in row] for label, row in zip(game.labels, game.payoffs)
        },
    }


def shipped_game_path(name: str) -> Path:
    return Path(str(resources.files("octoewl") / "data" / f"{name}.json"))


def shipped_games() -> dict[str, Path]:
    """Example games bundled with the package, keyed by file stem."""
    root = resources.files("octoewl") / "data"
    return {
        Path(str(p)).stem: Path(str(p))
        for p in sorted(root.iterdir(), key=lambda p: str(p))
        if str(p).endswith(".json")
    }
