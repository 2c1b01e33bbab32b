"""Verification suites behind ``octoewl verify`` and the acceptance tests."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import closed_form as cf
from .algebra import (
    basis_octonion,
    cayley_dickson_mul_arrays,
    oct_mul,
    oct_mul_arrays,
)
from .ewl import build_instance, canonical_eta, classical_restriction_check, simulate_batch
from .games import Game, classical_profile, completeness_check, properness_check
from .quantum import haar_coefficients

__all__ = [
    "CheckResult",
    "check_fano",
    "check_theorem1",
    "check_orthogonality",
    "check_properness",
    "check_completeness",
    "check_vanishing",
]

_CONJ = np.array([1.0] + [-1.0] * 7)


@dataclass
class CheckResult:
    name: str
    passed: bool
    details: dict = field(default_factory=dict)
    failures: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "details": self.details,
                "failures": self.failures}


def _record(result: CheckResult, key: str, value: float, tol: float, *, above: bool = False) -> None:
    """Store ``value`` and fail the check unless it is <= tol (> tol if ``above``)."""
    result.details[key] = {"value": float(value), "tolerance": tol,
                           "requires": "greater" if above else "at_most"}
    ok = value > tol if above else value <= tol
    if not ok:
        result.passed = False
        op = "<=" if above else ">"
        result.failures.append(f"{key}: {value:.3e} {op} {tol:.1e}")


def check_fano(samples: int = 10_000, seed: int = 0, tol: float = 1e-10) -> CheckResult:
    """Fano table against Cayley-Dickson, plus the composition-algebra identities."""
    res = CheckResult("fano", True)
    eye = np.eye(8)
    table = oct_mul_arrays(eye[:, None, :], eye[None, :, :])
    cd = cayley_dickson_mul_arrays(eye[:, None, :], eye[None, :, :])
    agree = int(np.all(np.abs(table - cd) <= 1e-12, axis=-1).sum())
    res.details["basis_pairs_agree"] = f"{agree}/64"
    _record(res, "basis_pair_mismatch", np.abs(table - cd).max(), 1e-12)

    anti = max(
        float(np.abs(table[j, k] + table[k, j]).max())
        for j in range(1, 8) for k in range(1, 8) if j != k
    )
    _record(res, "anticommutation", anti, 1e-12)

    rng = np.random.default_rng(seed)
    a = rng.standard_normal((samples, 8))
    b = rng.standard_normal((samples, 8))
    ab = oct_mul_arrays(a, b)
    _record(res, "cayley_dickson_random", np.abs(ab - cayley_dickson_mul_arrays(a, b)).max(), 1e-12)
    na, nb = np.linalg.norm(a, axis=1), np.linalg.norm(b, axis=1)
    mult = np.abs(np.linalg.norm(ab, axis=1) - na * nb) / (1 + na * nb)
    _record(res, "norm_multiplicativity", mult.max(), tol)
    alt = oct_mul_arrays(a, oct_mul_arrays(a, b)) - oct_mul_arrays(oct_mul_arrays(a, a), b)
    _record(res, "left_alternativity", np.abs(alt).max(), tol)
    conj = ab * _CONJ - oct_mul_arrays(b * _CONJ, a * _CONJ)
    _record(res, "conjugation_antiautomorphism", np.abs(conj).max(), tol)

    i1, i2, i3, i6 = (basis_octonion(j) for j in (1, 2, 3, 6))
    left = oct_mul(oct_mul(i1, i2), i3)
    right = oct_mul(i1, oct_mul(i2, i3))
    witness = left.isclose(-i6) and right.isclose(i6)
    res.details["nonassociativity_witness"] = {"(i1 i2) i3": left.e.tolist(), "i1 (i2 i3)": right.e.tolist()}
    if not witness:
        res.passed = False
        res.failures.append("non-associativity witness (i1 i2) i3 = -i6, i1 (i2 i3) = i6 failed")
    res.details["samples"] = samples
    return res


def check_theorem1(samples: int = 10_000, seed: int = 0, tol: float = 1e-9) -> CheckResult:
    """Closed forms against the state-vector oracle (3 and 2 players)."""
    res = CheckResult("theorem1", True)
    rng = np.random.default_rng(seed)
    for n, closed in ((3, cf.theorem1_batch), (2, cf.landsburg_batch)):
        inst = build_instance(n)
        classical = np.array([
            [s.coefficients for s in classical_profile("".join(p))]
            for p in itertools.product("NF", repeat=n)
        ])
        _record(res, f"classical_profiles_{n}p", np.abs(closed(classical) - simulate_batch(inst, classical)).max(), tol)
        coeffs = haar_coefficients(rng, (samples, n))
        diff = np.abs(closed(coeffs) - simulate_batch(inst, coeffs)).max(axis=1)
        worst = int(np.argmax(diff))
        _record(res, f"haar_sweep_{n}p", diff[worst], tol)
        if diff[worst] > tol:
            res.failures.append(f"worst {n}-player case: {coeffs[worst].tolist()}")
        sums = np.abs(closed(coeffs).sum(axis=1) - 1.0).max()
        _record(res, f"sum_to_one_{n}p", sums, 1e-12)
    res.details["samples"] = samples
    res.details["seed"] = seed
    return res


def check_orthogonality() -> CheckResult:
    """Gram matrices for the canonical flip phases and the necessity probes."""
    res = CheckResult("orthogonality", True)
    for n, probe in ((3, np.exp(1j * np.pi / 4)), (2, np.exp(1j * np.pi / 3))):
        _record(res, f"gram_error_{n}p_canonical", build_instance(n).orthogonality_error(), 1e-12)
        gram = build_instance(n, probe).gram
        off = np.abs(gram - np.diag(np.diag(gram))).max()
        _record(res, f"max_offdiag_{n}p_probe", off, 1e-3, above=True)
        res.details[f"eta_{n}p"] = [canonical_eta(n).real, canonical_eta(n).imag]
        # eta = 1 is reported, not judged
        res.details[f"gram_error_{n}p_eta_one"] = build_instance(n, 1.0).orthogonality_error()
    return res


def check_properness(games: Iterable[Game], tol: float = 1e-12) -> CheckResult:
    """Classical profiles reproduce point masses and the original payoffs."""
    res = CheckResult("properness", True)
    for n in (2, 3):
        rep = classical_restriction_check(build_instance(n), tol)
        _record(res, f"oracle_restriction_{n}p", rep.max_deviation, tol)
    for game in games:
        rep = properness_check(game, tol)
        _record(res, f"{game.name}:distribution", rep.max_distribution_deviation, tol)
        _record(res, f"{game.name}:payoff", rep.max_payoff_deviation, tol)
    return res


def check_completeness(games: Iterable[Game], steps: int = 5, tol: float = 1e-10) -> CheckResult:
    """Embedded classical mixtures against the classical mixed extension."""
    res = CheckResult("completeness", True)
    for game in games:
        rep = completeness_check(game, steps, tol)
        _record(res, f"{game.name}:max_deviation", rep.max_deviation, tol)
        res.details[f"{game.name}:grid_points"] = rep.grid_points
    return res


def check_vanishing(samples: int = 1_000, seed: int = 0, tol: float = 1e-10) -> CheckResult:
    """Unused projections of X+- / Y+- and the parallelogram identities.

    The parallelogram identities hold. The unused projections do not vanish:
    the eight used coordinates carry total squared mass 1 out of 2, so the
    unused ones carry the other 1. This check reports both, and the
    ``unused_squared_mass`` entry shows where the missing mass sits.
    """
    res = CheckResult("vanishing", True)
    rng = np.random.default_rng(seed)
    coeffs = haar_coefficients(rng, (samples, 3))
    xp, xm, yp, ym = cf.triple_products(coeffs[:, 0], coeffs[:, 1], coeffs[:, 2])
    x_unused = [2, 4, 5, 6]
    y_unused = [0, 1, 3, 7]
    unused = max(np.abs(np.concatenate([xp[:, x_unused], xm[:, x_unused]], 1)).max(),
                 np.abs(np.concatenate([yp[:, y_unused], ym[:, y_unused]], 1)).max())
    _record(res, "max_unused_projection", unused, tol)
    xn = (xp**2).sum(1) + (xm**2).sum(1)
    yn = (yp**2).sum(1) + (ym**2).sum(1)
    _record(res, "parallelogram_x", np.abs(xn - 1).max(), tol)
    _record(res, "parallelogram_y", np.abs(yn - 1).max(), tol)
    mass = ((xp[:, x_unused] ** 2).sum(1) + (xm[:, x_unused] ** 2).sum(1)
            + (yp[:, y_unused] ** 2).sum(1) + (ym[:, y_unused] ** 2).sum(1))
    res.details["unused_squared_mass"] = {"min": float(mass.min()), "max": float(mass.max())}
    res.details["samples"] = samples
    return res
