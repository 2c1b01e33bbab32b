"""Octonionic payoff maps for maximally entangled EWL quantum games."""

from .algebra import Octonion, Quaternion, Subalgebra, oct_mul, quat_mul
from .closed_form import embed_player, landsburg_distribution, theorem1_distribution
from .ewl import build_instance, canonical_eta, simulate
from .gamefile import load_game
from .games import (
    Game,
    SearchConfig,
    best_response,
    maximin,
    mixed_quantum_payoff,
    quantum_payoff,
    verify_equilibrium,
)
from .quantum import MixedQuantumStrategy, SU2Strategy

__version__ = "0.1.0"

__all__ = [
    "Octonion",
    "Quaternion",
    "Subalgebra",
    "oct_mul",
    "quat_mul",
    "embed_player",
    "theorem1_distribution",
    "landsburg_distribution",
    "build_instance",
    "canonical_eta",
    "simulate",
    "load_game",
    "Game",
    "SearchConfig",
    "best_response",
    "maximin",
    "mixed_quantum_payoff",
    "quantum_payoff",
    "verify_equilibrium",
    "MixedQuantumStrategy",
    "SU2Strategy",
]
