"""Closed-form outcome distributions for the maximally entangled EWL game.

Three players
-------------
Each player's ``(A, B)`` strategy becomes a unit octonion in one of three
quaternionic subalgebras that share the complex line ``{1, i1}``::

    player 1:  A + B conj(eta) i4   in span{1, i1, i2, i4}
    player 2:  A + B conj(eta) i6   in span{1, i1, i5, i6}
    player 3:  A + B conj(eta) i7   in span{1, i1, i3, i7}

A two-bit subscript ``ab`` negates the real coefficient of ``A`` (bit a)
and/or its ``i1`` coefficient (bit b). Writing ``s, t, u`` for the three
players and forming left-associated products,

    X+- = ((s10 t10) u01 +- (s01 t10) u01) / 2
    Y+- = ((s01 t00) u00 +- (s10 t00) u00) / 2

each outcome probability is the sum of the squares of one coordinate of the
pair ``X+, X-`` (outcomes NNN, NNF, FFN, FFF) or ``Y+, Y-`` (the other four).
The formula is transcribed as printed and matches :mod:`octoewl.ewl` to
machine precision.

Two players
-----------
With ``eta = (1 + i)/sqrt(2)`` the product of the unit quaternions

    p = A1 + B1 conj(eta) j,     q = A2 - conj(B2) conj(eta) j

has squared coefficients ``(w^2, x^2, y^2, z^2) = (NN, FF, FN, NF)``. The
second player's embedding carries ``-conj(B)`` because the entangled state
turns the second operator into its transpose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .algebra import Octonion, oct_mul_arrays, quat_mul_arrays, Quaternion
from .errors import InvalidStrategyError
from .ewl import canonical_eta
from .quantum import UNIT_TOL, SU2Strategy

__all__ = [
    "PLAYER_BASES",
    "embed_player",
    "embed_player_arrays",
    "triple_products",
    "theorem1_distribution",
    "theorem1_batch",
    "landsburg_quaternions",
    "landsburg_distribution",
    "landsburg_batch",
    "VanishingReport",
    "vanishing_projection_report",
]

StrategyLike = Union[SU2Strategy, Sequence[float], np.ndarray]

#: Octonion slots receiving (a0, a1, twisted-B first, twisted-B second).
PLAYER_BASES: dict[int, tuple[int, int, int, int]] = {
    1: (0, 1, 2, 4),
    2: (0, 1, 5, 6),
    3: (0, 1, 3, 7),
}

# outcome index -> projection index, for the X and Y groups
_X_OUTCOMES = np.array([0, 7, 6, 1])  # NNN, FFF, FFN, NNF
_X_PROJ = np.array([0, 1, 3, 7])
_Y_OUTCOMES = np.array([3, 4, 5, 2])  # NFF, FNN, FNF, NFN
_Y_PROJ = np.array([2, 4, 5, 6])


def _as_coefficients(s: StrategyLike) -> np.ndarray:
    if isinstance(s, SU2Strategy):
        return s.coefficients
    c = np.asarray(s, dtype=float).reshape(-1)
    if c.shape != (4,):
        raise InvalidStrategyError(f"expected 4 coefficients (a0, a1, b0, b1), got {c.shape}")
    if abs(c @ c - 1.0) > UNIT_TOL:
        raise InvalidStrategyError(f"coefficients have squared norm {c @ c!r}, expected 1")
    return c


def embed_player_arrays(
    player: int, coeffs: np.ndarray, flags: tuple[int, int] = (0, 0), eta: complex | None = None
) -> np.ndarray:
    """Vectorized :func:`embed_player` over ``(..., 4)`` coefficient rows."""
    if player not in PLAYER_BASES:
        raise ValueError(f"player must be 1, 2 or 3, got {player!r}")
    eta = canonical_eta(3) if eta is None else complex(eta)
    coeffs = np.asarray(coeffs, dtype=float)
    a0, a1, b0, b1 = np.moveaxis(coeffs, -1, 0)
    out = np.zeros(coeffs.shape[:-1] + (8,))
    r, i, j, k = PLAYER_BASES[player]
    out[..., r] = -a0 if flags[0] else a0
    out[..., i] = -a1 if flags[1] else a1
    # (b0 + b1 i1) conj(eta) i_k with i1 i_k = -i_j inside the subalgebra
    out[..., j] = eta.imag * b0 - eta.real * b1
    out[..., k] = eta.real * b0 + eta.imag * b1
    return out


def embed_player(player: int, c: StrategyLike, flags: tuple[int, int] = (0, 0)) -> Octonion:
    """Unit octonion for a player's strategy with sign flags ``(a0, a1)``."""
    if tuple(flags) not in ((0, 0), (0, 1), (1, 0), (1, 1)):
        raise ValueError(f"sign flags must be a pair of bits, got {flags!r}")
    return Octonion(embed_player_arrays(player, _as_coefficients(c), tuple(flags)))


def triple_products(c1: np.ndarray, c2: np.ndarray, c3: np.ndarray) -> tuple[np.ndarray, ...]:
    """``(X+, X-, Y+, Y-)`` for stacked coefficient rows, each ``(..., 8)``."""
    s = {f: embed_player_arrays(1, c1, f) for f in ((0, 1), (1, 0))}
    t = {f: embed_player_arrays(2, c2, f) for f in ((0, 0), (1, 0))}
    u = {f: embed_player_arrays(3, c3, f) for f in ((0, 0), (0, 1))}

    def assoc(a, b, c):
        return oct_mul_arrays(oct_mul_arrays(a, b), c)

    x1 = assoc(s[1, 0], t[1, 0], u[0, 1])
    x2 = assoc(s[0, 1], t[1, 0], u[0, 1])
    y1 = assoc(s[0, 1], t[0, 0], u[0, 0])
    y2 = assoc(s[1, 0], t[0, 0], u[0, 0])
    return (x1 + x2) / 2, (x1 - x2) / 2, (y1 + y2) / 2, (y1 - y2) / 2


def theorem1_batch(coeffs: np.ndarray) -> np.ndarray:
    """Three-player distributions for ``(m, 3, 4)`` coefficient rows -> ``(m, 8)``.

    Inputs are assumed unit; no validation is done here.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    xp, xm, yp, ym = triple_products(coeffs[..., 0, :], coeffs[..., 1, :], coeffs[..., 2, :])
    probs = np.empty(coeffs.shape[:-2] + (8,))
    probs[..., _X_OUTCOMES] = xp[..., _X_PROJ] ** 2 + xm[..., _X_PROJ] ** 2
    probs[..., _Y_OUTCOMES] = yp[..., _Y_PROJ] ** 2 + ym[..., _Y_PROJ] ** 2
    return probs


def theorem1_distribution(c1: StrategyLike, c2: StrategyLike, c3: StrategyLike) -> np.ndarray:
    """Probabilities of NNN, NNF, NFN, NFF, FNN, FNF, FFN, FFF."""
    coeffs = np.stack([_as_coefficients(c) for c in (c1, c2, c3)])
    return theorem1_batch(coeffs[None])[0]


_LANDSBURG_ETA_BAR = np.conj(canonical_eta(2))
# quaternion coefficient (w, x, y, z) -> outcome index in (NN, NF, FN, FF)
_LANDSBURG_OUTCOME_OF_COEFF = np.array([0, 3, 2, 1])


def _landsburg_embed(coeffs: np.ndarray, second: bool) -> np.ndarray:
    a = coeffs[..., 0] + 1j * coeffs[..., 1]
    b = coeffs[..., 2] + 1j * coeffs[..., 3]
    if second:
        b = -np.conj(b)
    c = b * _LANDSBURG_ETA_BAR
    # a + c j = a0 + a1 i + c0 j + c1 k
    return np.stack([a.real, a.imag, c.real, c.imag], axis=-1)


def landsburg_quaternions(p: StrategyLike, q: StrategyLike) -> tuple[Quaternion, Quaternion]:
    """The two players' unit quaternions before multiplication."""
    return (
        Quaternion.from_array(_landsburg_embed(_as_coefficients(p), second=False)),
        Quaternion.from_array(_landsburg_embed(_as_coefficients(q), second=True)),
    )


def landsburg_batch(coeffs: np.ndarray) -> np.ndarray:
    """Two-player distributions for ``(m, 2, 4)`` coefficient rows -> ``(m, 4)``."""
    coeffs = np.asarray(coeffs, dtype=float)
    pq = quat_mul_arrays(
        _landsburg_embed(coeffs[..., 0, :], second=False),
        _landsburg_embed(coeffs[..., 1, :], second=True),
    )
    probs = np.empty_like(pq)
    probs[..., _LANDSBURG_OUTCOME_OF_COEFF] = pq**2
    return probs


def landsburg_distribution(p: StrategyLike, q: StrategyLike) -> np.ndarray:
    """Probabilities of NN, NF, FN, FF from the squared coefficients of ``pq``."""
    coeffs = np.stack([_as_coefficients(p), _as_coefficients(q)])
    return landsburg_batch(coeffs[None])[0]


@dataclass(frozen=True)
class VanishingReport:
    """Largest coordinates of X+- and Y+- that no outcome reads."""

    max_unused_x: float
    max_unused_y: float
    x_norm2: float  # |X+|^2 + |X-|^2
    y_norm2: float

    @property
    def max_unused(self) -> float:
        return max(self.max_unused_x, self.max_unused_y)

    def passed(self, tol: float = 1e-10) -> bool:
        return (
            self.max_unused <= tol
            and abs(self.x_norm2 - 1.0) <= tol
            and abs(self.y_norm2 - 1.0) <= tol
        )


_X_UNUSED = np.setdiff1d(np.arange(8), _X_PROJ)
_Y_UNUSED = np.setdiff1d(np.arange(8), _Y_PROJ)


def vanishing_projection_report(c1: StrategyLike, c2: StrategyLike, c3: StrategyLike) -> VanishingReport:
    xp, xm, yp, ym = triple_products(*(_as_coefficients(c) for c in (c1, c2, c3)))
    return VanishingReport(
        max_unused_x=float(np.abs(np.concatenate([xp[_X_UNUSED], xm[_X_UNUSED]])).max()),
        max_unused_y=float(np.abs(np.concatenate([yp[_Y_UNUSED], ym[_Y_UNUSED]])).max()),
        x_norm2=float(xp @ xp + xm @ xm),
        y_norm2=float(yp @ yp + ym @ ym),
    )


def sign_variants(player: int, c: StrategyLike) -> dict[tuple[int, int], Octonion]:
    """All four sign-flag variants of a player's octonion."""
    coeffs = _as_coefficients(c)
    return {
        f: Octonion(embed_player_arrays(player, coeffs, f))
        for f in itertools.product((0, 1), repeat=2)
    }
