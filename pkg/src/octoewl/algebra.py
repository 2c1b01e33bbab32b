"""Quaternion and octonion arithmetic.

Octonions use the basis ``{1, i1, ..., i7}`` with the Fano-plane
multiplication rule ``i_n i_{n+1} = i_{n+3}`` (indices taken mod 7). Index 0
holds the real part. Every routine here also accepts stacked coefficient
arrays of shape ``(..., 8)`` (or ``(..., 4)`` for quaternions) through the
``*_arrays`` functions, which the simulation code relies on for speed.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "FANO_LINES",
    "Quaternion",
    "Octonion",
    "Subalgebra",
    "SUBALGEBRA_BASES",
    "oct_mul",
    "oct_mul_arrays",
    "oct_conj",
    "oct_norm",
    "oct_add",
    "oct_scale",
    "project",
    "quat_mul",
    "quat_mul_arrays",
    "embed_subalgebra",
    "cayley_dickson_mul",
    "cayley_dickson_mul_arrays",
    "basis_octonion",
]

#: Oriented lines of the Fano plane; for a line (a, b, c), i_a i_b = i_c.
FANO_LINES: tuple[tuple[int, int, int], ...] = tuple(
    (n, n % 7 + 1, (n + 2) % 7 + 1) for n in range(1, 8)
)


def _structure_constants() -> np.ndarray:
    table = np.zeros((8, 8, 8))
    for j in range(8):
        table[0, j, j] = 1.0
        table[j, 0, j] = 1.0
    for j in range(1, 8):
        table[j, j, 0] = -1.0
    for a, b, c in FANO_LINES:
        for x, y, z in ((a, b, c), (b, c, a), (c, a, b)):
            table[x, y, z] = 1.0
            table[y, x, z] = -1.0
    table.flags.writeable = False
    return table


# _MUL_TABLE[j, k] is the coefficient vector of i_j * i_k
_MUL_TABLE = _structure_constants()
_MUL_FLAT = _MUL_TABLE.reshape(64, 8)

_CONJ_SIGNS = np.array([1.0] + [-1.0] * 7)


def _frozen(values: Iterable[float], size: int) -> np.ndarray:
    arr = np.array(values, dtype=float).reshape(size)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class Quaternion:
    """Real quaternion ``w + x i + y j + z k``."""

    w: float
    x: float
    y: float
    z: float

    @classmethod
    def from_array(cls, arr) -> Quaternion:
        w, x, y, z = (float(v) for v in np.asarray(arr, dtype=float).reshape(4))
        return cls(w, x, y, z)

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def norm2(self) -> float:
        return self.w**2 + self.x**2 + self.y**2 + self.z**2

    def conj(self) -> Quaternion:
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other: Quaternion) -> Quaternion:
        return quat_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Quaternion):
            return NotImplemented
        return np.array_equal(self.to_array(), other.to_array())

    def isclose(self, other: Quaternion, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self.to_array(), other.to_array(), rtol=0, atol=atol))


class Octonion:
    """Immutable octonion with coefficients ``e[0..7]``; ``e[0]`` is real."""

    __slots__ = ("_e",)

    def __init__(self, coefficients: Iterable[float]):
        self._e = _frozen(coefficients, 8)

    @property
    def e(self) -> np.ndarray:
        return self._e

    @classmethod
    def real(cls, value: float) -> Octonion:
        return cls([value] + [0.0] * 7)

    def __getitem__(self, j: int) -> float:
        return float(self._e[j])

    def __add__(self, other: Octonion) -> Octonion:
        return oct_add(self, other)

    def __sub__(self, other: Octonion) -> Octonion:
        return Octonion(self._e - other._e)

    def __neg__(self) -> Octonion:
        return Octonion(-self._e)

    def __mul__(self, other):
        if isinstance(other, Octonion):
            return oct_mul(self, other)
        return oct_scale(self, other)

    def __rmul__(self, scalar):
        return oct_scale(self, scalar)

    def __truediv__(self, scalar: float) -> Octonion:
        return Octonion(self._e / scalar)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Octonion):
            return NotImplemented
        return np.array_equal(self._e, other._e)

    __hash__ = None  # type: ignore[assignment]

    def isclose(self, other: Octonion, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self._e, other._e, rtol=0, atol=atol))

    def __repr__(self) -> str:
        terms = []
        for j, c in enumerate(self._e):
            if c != 0.0:
                terms.append(f"{c:g}" if j == 0 else f"{c:g}*i{j}")
        return "Octonion(" + (" + ".join(terms) or "0") + ")"


def basis_octonion(j: int) -> Octonion:
    """Return ``i_j`` (``j = 0`` gives the real unit)."""
    if not 0 <= j <= 7:
        raise IndexError(f"octonion basis index must be in 0..7, got {j}")
    e = np.zeros(8)
    e[j] = 1.0
    return Octonion(e)


def oct_mul_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasting octonion product over the last axis."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    outer = a[..., :, None] * b[..., None, :]
    return outer.reshape(outer.shape[:-2] + (64,)) @ _MUL_FLAT


def oct_mul(a: Octonion, b: Octonion) -> Octonion:
    return Octonion(oct_mul_arrays(a.e, b.e))


def oct_conj(a: Octonion) -> Octonion:
    return Octonion(a.e * _CONJ_SIGNS)


def oct_norm(a: Octonion) -> float:
    return float(np.sqrt(np.dot(a.e, a.e)))


def oct_add(a: Octonion, b: Octonion) -> Octonion:
    return Octonion(a.e + b.e)


def oct_scale(a: Octonion, scalar: float) -> Octonion:
    return Octonion(a.e * float(scalar))


def project(a: Octonion, j: int) -> float:
    """Coefficient of ``i_j`` in ``a`` (the real part for ``j = 0``)."""
    if not isinstance(j, (int, np.integer)) or not 0 <= j <= 7:
        raise IndexError(f"projection index must be in 0..7, got {j!r}")
    return float(a.e[j])


def quat_mul_arrays(p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Broadcasting Hamilton product over the last axis."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    w1, x1, y1, z1 = np.moveaxis(p, -1, 0)
    w2, x2, y2, z2 = np.moveaxis(q, -1, 0)
    return np.stack(
        [
            w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
            w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
            w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
            w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
        ],
        axis=-1,
    )


def quat_mul(p: Quaternion, q: Quaternion) -> Quaternion:
    return Quaternion.from_array(quat_mul_arrays(p.to_array(), q.to_array()))


class Subalgebra(enum.Enum):
    """The three quaternionic subalgebras sharing the complex line {1, i1}."""

    H1 = "H1"
    H2 = "H2"
    H3 = "H3"


#: Octonion indices receiving the quaternion basis (1, i, j, k).
SUBALGEBRA_BASES: dict[Subalgebra, tuple[int, int, int, int]] = {
    Subalgebra.H1: (0, 1, 2, 4),
    Subalgebra.H2: (0, 1, 5, 6),
    Subalgebra.H3: (0, 1, 3, 7),
}


def embed_subalgebra(q: Quaternion, which: Subalgebra) -> Octonion:
    e = np.zeros(8)
    e[list(SUBALGEBRA_BASES[Subalgebra(which)])] = q.to_array()
    return Octonion(e)


# Cayley-Dickson doubling: an octonion is a pair (a, b) of quaternions read
# as a + b*l. The pair's coordinates (1, i, j, k, l, il, jl, kl) land on the
# Fano basis as (1, i1, i2, i4, i3, i7, i5, -i6); the exhaustive 64-pair test
# pins this correspondence.
_CD_INDEX = np.array([0, 1, 2, 4, 3, 7, 5, 6])
_CD_SIGN = np.array([1.0, 1, 1, 1, 1, 1, 1, -1])
_QCONJ = np.array([1.0, -1, -1, -1])


def _to_cd(e: np.ndarray) -> np.ndarray:
    return e[..., _CD_INDEX] * _CD_SIGN


def _from_cd(c: np.ndarray) -> np.ndarray:
    out = np.empty_like(c)
    out[..., _CD_INDEX] = c * _CD_SIGN
    return out


def cayley_dickson_mul_arrays(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Broadcasting :func:`cayley_dickson_mul` over the last axis."""
    x = _to_cd(np.asarray(a, dtype=float))
    y = _to_cd(np.asarray(b, dtype=float))
    p, q = x[..., :4], x[..., 4:]
    r, s = y[..., :4], y[..., 4:]
    first = quat_mul_arrays(p, r) - quat_mul_arrays(s * _QCONJ, q)
    second = quat_mul_arrays(s, p) + quat_mul_arrays(q, r * _QCONJ)
    return _from_cd(np.concatenate([first, second], axis=-1))


def cayley_dickson_mul(a: Octonion, b: Octonion) -> Octonion:
    """Octonion product via ``(p, q)(r, s) = (pr - s*q, sp + q r*)``.

    Independent of the Fano table; used as its cross-check.
    """
    return Octonion(cayley_dickson_mul_arrays(a.e, b.e))
