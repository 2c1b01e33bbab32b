"""Direct state-vector simulation of the maximally entangled EWL protocol.

The referee prepares ``(|0...0> + |1...1>)/sqrt(2)``, each player applies an
SU(2) operation to their qubit, and the result is measured in the basis
obtained by applying each classical profile (N = identity, F = flip) to the
initial state. This module is the ground truth the closed forms are checked
against, so it deliberately uses nothing from them.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvalidStrategyError, NonOrthogonalInstanceError
from .quantum import SU2Strategy, measure_in_basis, su2_matrices, su2_matrix, tensor

__all__ = [
    "ORTHO_TOL",
    "EwlInstance",
    "RestrictionReport",
    "canonical_eta",
    "build_instance",
    "outcome_labels",
    "simulate",
    "simulate_batch",
    "classical_restriction_check",
    "flip_matrix",
]

ORTHO_TOL = 1e-12


def canonical_eta(n_players: int) -> complex:
    """Flip phase making the 2^n outcome states orthogonal.

    Two players need an 8th root of unity, three players a 6th root.
    """
    if n_players == 2:
        return complex(1.0, 1.0) / np.sqrt(2.0)
    if n_players == 3:
        return complex(0.5, np.sqrt(3.0) / 2.0)
    raise ValueError(f"only 2 or 3 players are supported, got {n_players}")


def outcome_labels(n_players: int) -> list[str]:
    """``['NN', 'NF', 'FN', 'FF']`` style labels in binary order (F = 1)."""
    return ["".join(p) for p in itertools.product("NF", repeat=n_players)]


def flip_matrix(eta: complex) -> np.ndarray:
    return np.array([[0.0, eta], [-np.conj(eta), 0.0]], dtype=complex)


@dataclass(frozen=True, eq=False)
class EwlInstance:
    n_players: int
    eta: complex
    initial: np.ndarray
    outcome_basis: np.ndarray  # row k is the normalized outcome state k

    @property
    def dim(self) -> int:
        return 2**self.n_players

    @property
    def gram(self) -> np.ndarray:
        return self.outcome_basis.conj() @ self.outcome_basis.T

    def orthogonality_error(self) -> float:
        return float(np.abs(self.gram - np.eye(self.dim)).max())

    @property
    def is_orthogonal(self) -> bool:
        return self.orthogonality_error() <= ORTHO_TOL


def build_instance(n_players: int, eta: complex | None = None) -> EwlInstance:
    """Initial state and outcome basis for ``n_players`` with flip phase ``eta``.

    Orthogonality is not enforced here so that non-canonical phases can be
    probed; :func:`simulate` refuses non-orthogonal instances.
    """
    if n_players not in (2, 3):
        raise ValueError(f"only 2 or 3 players are supported, got {n_players}")
    eta = canonical_eta(n_players) if eta is None else complex(eta)
    if abs(abs(eta) - 1.0) > 1e-12:
        raise ValueError(f"eta must be a unit complex number, got |eta| = {abs(eta)}")
    dim = 2**n_players
    initial = np.zeros(dim, dtype=complex)
    initial[0] = initial[-1] = 1.0 / np.sqrt(2.0)
    ops = (np.eye(2, dtype=complex), flip_matrix(eta))
    rows = []
    for bits in itertools.product((0, 1), repeat=n_players):
        v = tensor([ops[b] for b in bits]) @ initial
        rows.append(v / np.linalg.norm(v))
    basis = np.array(rows)
    initial.flags.writeable = False
    basis.flags.writeable = False
    return EwlInstance(n_players, eta, initial, basis)


def _check_orthogonal(instance: EwlInstance) -> None:
    err = instance.orthogonality_error()
    if err > ORTHO_TOL:
        raise NonOrthogonalInstanceError(
            f"outcome basis not orthogonal for eta={instance.eta} (Gram error {err:.3g})"
        )


def simulate(instance: EwlInstance, strategies: Sequence[SU2Strategy]) -> np.ndarray:
    """Outcome distribution when player j applies ``strategies[j]``."""
    _check_orthogonal(instance)
    if len(strategies) != instance.n_players:
        raise InvalidStrategyError(
            f"expected {instance.n_players} strategies, got {len(strategies)}"
        )
    psi = tensor([su2_matrix(s) for s in strategies]) @ instance.initial
    return measure_in_basis(psi, instance.outcome_basis)


def simulate_batch(instance: EwlInstance, coeffs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`simulate` over ``(m, n_players, 4)`` coefficient rows.

    Inputs are assumed unit; returns an ``(m, 2^n)`` array.
    """
    _check_orthogonal(instance)
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.ndim != 3 or coeffs.shape[1:] != (instance.n_players, 4):
        raise InvalidStrategyError(
            f"expected shape (m, {instance.n_players}, 4), got {coeffs.shape}"
        )
    mats = su2_matrices(coeffs)  # (m, n, 2, 2)
    m = coeffs.shape[0]
    # Only |0..0> and |1..1> are populated, so U|init> is a sum of two
    # product states built from the first and second columns.
    col0 = mats[:, 0, :, 0]
    col1 = mats[:, 0, :, 1]
    for j in range(1, instance.n_players):
        col0 = (col0[:, :, None] * mats[:, j, None, :, 0]).reshape(m, -1)
        col1 = (col1[:, :, None] * mats[:, j, None, :, 1]).reshape(m, -1)
    psi = (col0 + col1) / np.sqrt(2.0)
    probs = np.abs(psi @ instance.outcome_basis.conj().T) ** 2
    return probs / probs.sum(axis=1, keepdims=True)


@dataclass(frozen=True)
class RestrictionReport:
    n_players: int
    profiles: tuple[str, ...]
    deviations: tuple[float, ...]
    tolerance: float

    @property
    def max_deviation(self) -> float:
        return max(self.deviations)

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def classical_restriction_check(instance: EwlInstance, tol: float = 1e-12) -> RestrictionReport:
    """Simulate every classical profile and measure the distance to its point mass."""
    n = instance.n_players
    presets = (SU2Strategy.identity(), SU2Strategy.flip(instance.eta))
    labels = outcome_labels(n)
    devs = []
    for k, bits in enumerate(itertools.product((0, 1), repeat=n)):
        dist = simulate(instance, [presets[b] for b in bits])
        target = np.zeros(instance.dim)
        target[k] = 1.0
        devs.append(float(np.abs(dist - target).max()))
    return RestrictionReport(n, tuple(labels), tuple(devs), tol)
