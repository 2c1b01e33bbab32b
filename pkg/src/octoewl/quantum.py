"""SU(2) strategies, state vectors and projective measurement."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from .algebra import Quaternion
from .errors import InvalidStrategyError, MeasurementError

__all__ = [
    "UNIT_TOL",
    "SU2Strategy",
    "MixedQuantumStrategy",
    "su2_matrix",
    "su2_matrices",
    "su2_to_quaternion",
    "tensor",
    "measure_in_basis",
    "haar_sample",
    "haar_coefficients",
]

UNIT_TOL = 1e-12


@dataclass(frozen=True)
class SU2Strategy:
    """A pure quantum strategy ``[[A, B], [-conj(B), conj(A)]]``."""

    A: complex
    B: complex

    def __post_init__(self):
        object.__setattr__(self, "A", complex(self.A))
        object.__setattr__(self, "B", complex(self.B))
        norm2 = abs(self.A) ** 2 + abs(self.B) ** 2
        if not np.isfinite(norm2) or abs(norm2 - 1.0) > UNIT_TOL:
            raise InvalidStrategyError(
                f"|A|^2 + |B|^2 = {norm2!r}, expected 1 within {UNIT_TOL}"
            )

    @classmethod
    def from_coefficients(cls, a0: float, a1: float, b0: float, b1: float) -> SU2Strategy:
        return cls(complex(a0, a1), complex(b0, b1))

    @classmethod
    def from_angles(cls, theta: float, phi: float, psi: float) -> SU2Strategy:
        """``A = cos(theta/2) e^{i phi}``, ``B = sin(theta/2) e^{i psi}``."""
        a = np.cos(theta / 2) * np.exp(1j * phi)
        b = np.sin(theta / 2) * np.exp(1j * psi)
        return cls(a, b)

    @classmethod
    def identity(cls) -> SU2Strategy:
        return cls(1.0, 0.0)

    @classmethod
    def flip(cls, eta: complex) -> SU2Strategy:
        return cls(0.0, eta)

    @property
    def coefficients(self) -> np.ndarray:
        """``(a0, a1, b0, b1)``."""
        return np.array([self.A.real, self.A.imag, self.B.real, self.B.imag])


@dataclass(frozen=True)
class MixedQuantumStrategy:
    """Finite mixture of pure strategies, or the Haar-uniform distribution."""

    support: tuple[tuple[float, SU2Strategy], ...] = ()
    haar: bool = False
    label: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.haar:
            if self.support:
                raise ValueError("a Haar-uniform strategy carries no finite support")
            return
        if not self.support:
            raise ValueError("finite-support strategy needs at least one component")
        weights = np.array([w for w, _ in self.support], dtype=float)
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise ValueError("mixture weights must be finite and non-negative")
        if abs(weights.sum() - 1.0) > UNIT_TOL:
            raise ValueError(f"mixture weights sum to {weights.sum()!r}, expected 1")
        for _, s in self.support:
            if not isinstance(s, SU2Strategy):
                raise TypeError(f"support entries must be SU2Strategy, got {type(s)}")

    @classmethod
    def pure(cls, strategy: SU2Strategy, label: str | None = None) -> MixedQuantumStrategy:
        return cls(((1.0, strategy),), label=label)

    @classmethod
    def mixture(cls, components, label: str | None = None) -> MixedQuantumStrategy:
        return cls(tuple((float(w), s) for w, s in components), label=label)

    @classmethod
    def haar_uniform(cls) -> MixedQuantumStrategy:
        return cls(haar=True, label="haar")

    @property
    def weights(self) -> np.ndarray:
        return np.array([w for w, _ in self.support], dtype=float)

    @property
    def coefficient_matrix(self) -> np.ndarray:
        """Support as a ``(k, 4)`` array of ``(a0, a1, b0, b1)`` rows."""
        return np.array([s.coefficients for _, s in self.support]).reshape(-1, 4)


def su2_matrix(s: SU2Strategy) -> np.ndarray:
    return np.array([[s.A, s.B], [-np.conj(s.B), np.conj(s.A)]], dtype=complex)


def su2_matrices(coeffs: np.ndarray) -> np.ndarray:
    """Stack of SU(2) matrices from ``(..., 4)`` coefficient rows (unchecked)."""
    coeffs = np.asarray(coeffs, dtype=float)
    a = coeffs[..., 0] + 1j * coeffs[..., 1]
    b = coeffs[..., 2] + 1j * coeffs[..., 3]
    top = np.stack([a, b], axis=-1)
    bottom = np.stack([-np.conj(b), np.conj(a)], axis=-1)
    return np.stack([top, bottom], axis=-2)


def su2_to_quaternion(s: SU2Strategy) -> Quaternion:
    """``(a0, a1, b0, b1) -> a0 + a1 i + b0 j + b1 k``; a group isomorphism."""
    return Quaternion.from_array(s.coefficients)


def tensor(mats: Sequence[np.ndarray]) -> np.ndarray:
    """Kronecker product with player 1 as the most significant qubit."""
    if len(mats) not in (2, 3):
        raise ValueError(f"tensor expects 2 or 3 single-qubit matrices, got {len(mats)}")
    for m in mats:
        if np.shape(m) != (2, 2):
            raise ValueError(f"expected 2x2 matrices, got shape {np.shape(m)}")
    return reduce(np.kron, [np.asarray(m, dtype=complex) for m in mats])


def measure_in_basis(
    psi: np.ndarray, basis: Sequence[np.ndarray], orth_tol: float = 1e-10
) -> np.ndarray:
    """Outcome probabilities of ``psi`` measured against an orthogonal basis.

    Both ``psi`` and the basis vectors are treated projectively: any nonzero
    rescaling leaves the result unchanged.
    """
    psi = np.asarray(psi, dtype=complex)
    vecs = np.array([np.asarray(b, dtype=complex) for b in basis])
    if vecs.ndim != 2 or vecs.shape[1] != psi.shape[-1]:
        raise MeasurementError("basis vectors must match the state dimension")
    norms = np.linalg.norm(vecs, axis=1)
    if np.any(norms == 0):
        raise MeasurementError("basis contains a zero vector")
    vecs = vecs / norms[:, None]
    gram = vecs.conj() @ vecs.T
    off = np.abs(gram - np.diag(np.diag(gram))).max(initial=0.0)
    if off > orth_tol:
        raise MeasurementError(f"basis is not orthogonal (max off-diagonal {off:.3g})")
    weights = np.abs(vecs.conj() @ psi) ** 2
    total = weights.sum()
    if not total > 0:
        raise MeasurementError("state has zero projection onto the basis")
    probs = weights / total
    if probs.min() < -1e-15:
        raise MeasurementError("negative probability")
    probs = np.clip(probs, 0.0, None)
    return probs / probs.sum()


def haar_coefficients(rng: np.random.Generator, size: int | tuple[int, ...] = ()) -> np.ndarray:
    """Haar-distributed SU(2) elements as ``(..., 4)`` coefficient rows.

    Normalized standard normals are exactly rotation invariant on S^3.
    """
    shape = (size,) if isinstance(size, int) else tuple(size)
    v = rng.standard_normal(shape + (4,))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def haar_sample(rng: np.random.Generator) -> SU2Strategy:
    c = haar_coefficients(rng)
    return SU2Strategy.from_coefficients(*c)
