"""Games, expected payoffs and equilibrium checks for quantized games.

Against fixed (possibly mixed) opponents, a player's expected payoff is a
homogeneous quadratic form ``c^T M c`` in the player's own coefficients
``c = (a0, a1, b0, b1)``: every outcome probability is a squared entry of
something linear in ``c``. Best responses therefore reduce to maximizing a
4x4 form over the unit sphere, which is how the searches below stay cheap
even when ``M`` is a Monte Carlo average over 10^5 Haar draws.

Random draws come from streams keyed by ``(seed, stream, player, chunk)``
so that results do not depend on how many worker threads run the chunks,
and so that a player's own draws never perturb the opponents'.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import linprog, minimize_scalar

from .closed_form import landsburg_batch, theorem1_batch
from .errors import InvalidStrategyError
from .ewl import canonical_eta, outcome_labels
from .quantum import MixedQuantumStrategy, SU2Strategy, haar_coefficients

__all__ = [
    "Game",
    "PayoffEstimate",
    "SearchConfig",
    "BestResponse",
    "PlayerCheck",
    "EquilibriumReport",
    "CompletenessReport",
    "ProperReport",
    "MaximinResult",
    "classical_profile",
    "outcome_distribution",
    "quantum_payoff",
    "mixed_quantum_payoff",
    "classical_payoff",
    "gmix_payoff",
    "completeness_check",
    "properness_check",
    "payoff_form",
    "best_response",
    "verify_equilibrium",
    "maximin",
]

CHUNK = 10_000
EVAL_STREAM = 0
SEARCH_STREAM = 1


@dataclass(frozen=True, eq=False)
class Game:
    """Payoff table indexed by outcome (binary order, F = 1) then player."""

    n_players: int
    payoffs: np.ndarray
    name: str = ""
    description: str = ""

    def __post_init__(self):
        if self.n_players not in (2, 3):
            raise ValueError(f"only 2 or 3 players are supported, got {self.n_players}")
        table = np.array(self.payoffs, dtype=float)
        if table.shape != (2**self.n_players, self.n_players):
            raise ValueError(
                f"payoff table must have shape {(2**self.n_players, self.n_players)}, "
                f"got {table.shape}"
            )
        if not np.all(np.isfinite(table)):
            raise ValueError("payoffs must be finite")
        table.flags.writeable = False
        object.__setattr__(self, "payoffs", table)

    @classmethod
    def from_outcomes(cls, table: dict[str, Sequence[float]], **meta) -> Game:
        n = len(next(iter(table)))
        labels = outcome_labels(n)
        if sorted(table) != sorted(labels):
            raise ValueError(f"outcome keys must be exactly {labels}, got {sorted(table)}")
        return cls(n, np.array([table[k] for k in labels], dtype=float), **meta)

    @property
    def labels(self) -> list[str]:
        return outcome_labels(self.n_players)

    def payoff_of(self, label: str) -> np.ndarray:
        return self.payoffs[self.labels.index(label)]

    @property
    def outcome_average(self) -> np.ndarray:
        return self.payoffs.mean(axis=0)

    @property
    def payoff_range(self) -> float:
        return float(self.payoffs.max() - self.payoffs.min())

    def with_affine(self, player: int, scale: float, shift: float) -> Game:
        table = self.payoffs.copy()
        table[:, player] = scale * table[:, player] + shift
        return Game(self.n_players, table, self.name, self.description)


def classical_profile(label: str) -> list[SU2Strategy]:
    """SU(2) strategies for a classical profile such as ``'NFN'``."""
    eta = canonical_eta(len(label))
    presets = {"N": SU2Strategy.identity(), "F": SU2Strategy.flip(eta)}
    try:
        return [presets[ch] for ch in label.upper()]
    except KeyError as exc:
        raise ValueError(f"classical profile must be over {{N, F}}, got {label!r}") from exc


def outcome_distribution(coeffs: np.ndarray) -> np.ndarray:
    """Closed-form distribution for ``(m, n, 4)`` coefficient rows."""
    n = np.shape(coeffs)[-2]
    if n == 3:
        return theorem1_batch(coeffs)
    if n == 2:
        return landsburg_batch(coeffs)
    raise ValueError(f"only 2 or 3 players are supported, got {n}")


def _check_arity(game: Game, k: int) -> None:
    if k != game.n_players:
        raise InvalidStrategyError(f"game has {game.n_players} players, got {k} strategies")


def quantum_payoff(game: Game, strategies: Sequence[SU2Strategy]) -> np.ndarray:
    """Expected payoff vector when every player uses a pure quantum strategy."""
    _check_arity(game, len(strategies))
    coeffs = np.array([s.coefficients for s in strategies])[None]
    return outcome_distribution(coeffs)[0] @ game.payoffs


def classical_payoff(game: Game, profile: str) -> np.ndarray:
    _check_arity(game, len(profile))
    return game.payoff_of(profile.upper()).copy()


def _product_bernoulli(flip_probs: Sequence[float]) -> np.ndarray:
    probs = np.asarray(flip_probs, dtype=float)
    if np.any(probs < 0) or np.any(probs > 1) or not np.all(np.isfinite(probs)):
        raise ValueError(f"flip probabilities must lie in [0, 1], got {list(probs)}")
    dist = np.ones(1)
    for r in probs:
        dist = np.kron(dist, [1.0 - r, r])
    return dist


def gmix_payoff(game: Game, flip_probs: Sequence[float]) -> np.ndarray:
    """Classical mixed extension: player j flips independently with ``flip_probs[j]``."""
    _check_arity(game, len(flip_probs))
    return _product_bernoulli(flip_probs) @ game.payoffs


# --- Monte Carlo / enumeration engine -------------------------------------


def _rng(seed: int, stream: int, player: int, chunk: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream, player, chunk)))


def _chunks(samples: int) -> list[tuple[int, int]]:
    return [(c, min(CHUNK, samples - c * CHUNK)) for c in range((samples + CHUNK - 1) // CHUNK)]


def _map_chunks(fn, samples: int, workers: int) -> list:
    chunks = _chunks(samples)
    if workers <= 1 or len(chunks) == 1:
        return [fn(c, m) for c, m in chunks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda cm: fn(*cm), chunks))


def _components(
    profile: Sequence[MixedQuantumStrategy],
    seed: int,
    stream: int,
    chunk: int,
    m: int,
    fixed: dict[int, np.ndarray],
) -> list[tuple[np.ndarray, np.ndarray]]:
    """Per player: (weights (k,), coeffs (k, m, 4)) for one chunk of draws."""
    comps = []
    for j, strat in enumerate(profile):
        if j in fixed:
            comps.append((np.ones(1), np.broadcast_to(fixed[j], (1, m, 4))))
        elif strat.haar:
            draws = haar_coefficients(_rng(seed, stream, j, chunk), m)
            comps.append((np.ones(1), draws[None]))
        else:
            cm = strat.coefficient_matrix
            comps.append((strat.weights, np.broadcast_to(cm[:, None, :], (len(cm), m, 4))))
    return comps


def _expected_table(comps, payoffs: np.ndarray, m: int) -> np.ndarray:
    """Per-draw expected payoffs ``(m, n)``, enumerating finite supports exactly."""
    n = len(comps)
    total = np.zeros((m, payoffs.shape[1]))
    for idx in itertools.product(*(range(len(w)) for w, _ in comps)):
        weight = np.prod([comps[j][0][i] for j, i in enumerate(idx)])
        if weight == 0.0:
            continue
        coeffs = np.stack([comps[j][1][i] for j, i in enumerate(idx)], axis=1)
        total += weight * (outcome_distribution(coeffs.reshape(m, n, 4)) @ payoffs)
    return total


def _per_draw_payoffs(
    game: Game,
    profile: Sequence[MixedQuantumStrategy],
    samples: int,
    seed: int,
    stream: int = EVAL_STREAM,
    fixed: dict[int, np.ndarray] | None = None,
    workers: int = 1,
) -> np.ndarray:
    """``(m, n)`` per-draw payoffs; ``m = 1`` when nothing needs sampling."""
    fixed = fixed or {}
    needs_mc = any(s.haar for j, s in enumerate(profile) if j not in fixed)
    if not needs_mc:
        return _expected_table(_components(profile, seed, stream, 0, 1, fixed), game.payoffs, 1)
    if samples < 1:
        raise ValueError("num_samples must be at least 1")

    def run(chunk, m):
        return _expected_table(_components(profile, seed, stream, chunk, m, fixed), game.payoffs, m)

    return np.concatenate(_map_chunks(run, samples, workers))


@dataclass(frozen=True)
class PayoffEstimate:
    mean: np.ndarray
    stderr: np.ndarray
    samples: int  # 0 when the value is exact

    @property
    def exact(self) -> bool:
        return self.samples == 0


def _summarize(values: np.ndarray) -> PayoffEstimate:
    m = values.shape[0]
    if m == 1:
        return PayoffEstimate(values[0], np.zeros(values.shape[1]), 0)
    return PayoffEstimate(values.mean(axis=0), values.std(axis=0, ddof=1) / np.sqrt(m), m)


def _validate_profile(game: Game, profile: Sequence[MixedQuantumStrategy]) -> list[MixedQuantumStrategy]:
    _check_arity(game, len(profile))
    out = []
    for s in profile:
        if isinstance(s, SU2Strategy):
            s = MixedQuantumStrategy.pure(s)
        if not isinstance(s, MixedQuantumStrategy):
            raise TypeError(f"profile entries must be MixedQuantumStrategy, got {type(s)}")
        out.append(s)
    return out


def mixed_quantum_payoff(
    game: Game,
    profile: Sequence[MixedQuantumStrategy],
    num_samples: int = 100_000,
    seed: int = 0,
    workers: int = 1,
) -> PayoffEstimate:
    """Expected payoff of a mixed quantum profile.

    Finite supports are enumerated exactly; Haar-uniform players are
    averaged over ``num_samples`` draws and the standard error reported.
    """
    profile = _validate_profile(game, profile)
    return _summarize(_per_draw_payoffs(game, profile, num_samples, seed, workers=workers))


# --- quantization checks ---------------------------------------------------


@dataclass(frozen=True)
class ProperReport:
    game: str
    max_distribution_deviation: float
    max_payoff_deviation: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.max_distribution_deviation, self.max_payoff_deviation) <= self.tolerance


def properness_check(game: Game, tol: float = 1e-12) -> ProperReport:
    """Classical profiles must reproduce the original payoff table."""
    dist_dev = pay_dev = 0.0
    for k, label in enumerate(game.labels):
        coeffs = np.array([s.coefficients for s in classical_profile(label)])[None]
        dist = outcome_distribution(coeffs)[0]
        target = np.zeros(len(dist))
        target[k] = 1.0
        dist_dev = max(dist_dev, float(np.abs(dist - target).max()))
        pay_dev = max(pay_dev, float(np.abs(dist @ game.payoffs - game.payoffs[k]).max()))
    return ProperReport(game.name, dist_dev, pay_dev, tol)


@dataclass(frozen=True)
class CompletenessReport:
    game: str
    grid_points: int
    max_deviation: float
    worst_point: tuple[float, ...]
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_deviation <= self.tolerance


def flip_mixture(r: float, eta: complex) -> MixedQuantumStrategy:
    """Mixed quantum strategy playing F with probability ``r`` and N otherwise."""
    return MixedQuantumStrategy.mixture(
        [(1.0 - r, SU2Strategy.identity()), (r, SU2Strategy.flip(eta))], label=f"mix({r:g})"
    )


def completeness_check(game: Game, steps: int = 5, tol: float = 1e-10) -> CompletenessReport:
    """Compare embedded classical mixtures with the classical mixed extension on a grid."""
    eta = canonical_eta(game.n_players)
    grid = np.linspace(0.0, 1.0, steps)
    worst, worst_point = 0.0, ()
    count = 0
    for point in itertools.product(grid, repeat=game.n_players):
        profile = [flip_mixture(r, eta) for r in point]
        quantum = mixed_quantum_payoff(game, profile).mean
        dev = float(np.abs(quantum - gmix_payoff(game, point)).max())
        count += 1
        if dev >= worst:
            worst, worst_point = dev, tuple(float(r) for r in point)
    return CompletenessReport(game.name, count, worst, worst_point, tol)


# --- best responses ----------------------------------------------------------


def _form_probes() -> np.ndarray:
    eye = np.eye(4)
    probes = [eye[a] for a in range(4)]
    probes += [(eye[a] + eye[b]) / np.sqrt(2.0) for a, b in itertools.combinations(range(4), 2)]
    return np.array(probes)


_PROBES = _form_probes()


def payoff_form(
    game: Game,
    player: int,
    profile: Sequence[MixedQuantumStrategy],
    num_samples: int = 100_000,
    seed: int = 0,
    stream: int = SEARCH_STREAM,
    payoff_of: int | None = None,
    workers: int = 1,
) -> np.ndarray:
    """Symmetric ``M`` with ``payoff_of``'s payoff equal to ``c^T M c``.

    ``c`` is ``player``'s coefficient vector; the other players follow
    ``profile`` (``player``'s own entry is ignored). ``payoff_of`` defaults
    to ``player``.
    """
    profile = _validate_profile(game, profile)
    payoff_of = player if payoff_of is None else payoff_of
    vals = np.array(
        [
            _per_draw_payoffs(game, profile, num_samples, seed, stream, {player: probe}, workers)[
                :, payoff_of
            ].mean()
            for probe in _PROBES
        ]
    )
    form = np.diag(vals[:4])
    for (a, b), v in zip(itertools.combinations(range(4), 2), vals[4:]):
        form[a, b] = form[b, a] = v - 0.5 * (vals[a] + vals[b])
    return form


def _coeffs_from_angles(theta, phi, psi) -> np.ndarray:
    ct, st = np.cos(theta / 2), np.sin(theta / 2)
    return np.stack([ct * np.cos(phi), ct * np.sin(phi), st * np.cos(psi), st * np.sin(psi)], axis=-1)


def _quad(form: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    return np.einsum("...i,ij,...j->...", coeffs, form, coeffs)


@dataclass(frozen=True)
class SearchConfig:
    """Knobs for best-response search and Monte Carlo evaluation."""

    samples: int = 100_000
    seed: int = 0
    grid: tuple[int, int, int] = (5, 8, 8)
    refine_starts: int = 4
    tol: float = 1e-6
    max_sweeps: int = 50
    workers: int = 1
    min_epsilon: float = 1e-6


def maximize_form(form: np.ndarray, config: SearchConfig = SearchConfig()) -> tuple[np.ndarray, float]:
    """Multi-start angle grid plus coordinate descent for ``max c^T M c`` on S^3."""
    nt, nphi, npsi = config.grid
    thetas = np.linspace(0.0, np.pi, nt)
    phis = np.linspace(0.0, 2 * np.pi, nphi, endpoint=False)
    psis = np.linspace(0.0, 2 * np.pi, npsi, endpoint=False)
    starts = np.array(list(itertools.product(thetas, phis, psis)))
    values = _quad(form, _coeffs_from_angles(*starts.T))
    order = np.argsort(-values, kind="stable")[: config.refine_starts]
    bounds = [(0.0, np.pi), (0.0, 2 * np.pi), (0.0, 2 * np.pi)]

    best_angles, best_val = starts[order[0]], float(values[order[0]])
    for idx in order:
        angles = starts[idx].copy()
        current = float(values[idx])
        for _ in range(config.max_sweeps):
            before = current
            for k in range(3):
                def neg(x, k=k):
                    trial = angles.copy()
                    trial[k] = x
                    return -float(_quad(form, _coeffs_from_angles(*trial)))

                res = minimize_scalar(neg, bounds=bounds[k], method="bounded",
                                      options={"xatol": 1e-10})
                if -res.fun > current:
                    angles[k], current = res.x, -res.fun
            if current - before <= config.tol * 1e-3:
                break
        if current > best_val:
            best_angles, best_val = angles, current
    return _coeffs_from_angles(*best_angles), best_val


@dataclass(frozen=True)
class BestResponse:
    strategy: SU2Strategy
    search_value: float  # value of the form being searched (search stream)
    form_max: float  # largest eigenvalue of that form, for reference


def best_response(
    game: Game,
    player: int,
    profile: Sequence[MixedQuantumStrategy],
    config: SearchConfig = SearchConfig(),
) -> BestResponse:
    """Best pure quantum strategy for ``player`` against the rest of ``profile``."""
    profile = _validate_profile(game, profile)
    if not 0 <= player < game.n_players:
        raise ValueError(f"player index {player} out of range")
    form = payoff_form(game, player, profile, config.samples, config.seed, SEARCH_STREAM,
                       workers=config.workers)
    coeffs, value = maximize_form(form, config)
    coeffs = coeffs / np.linalg.norm(coeffs)
    return BestResponse(
        SU2Strategy.from_coefficients(*coeffs), value, float(np.linalg.eigvalsh(form)[-1])
    )


@dataclass(frozen=True)
class PlayerCheck:
    player: int
    payoff: float
    payoff_stderr: float
    best_response: SU2Strategy
    best_response_payoff: float
    gain: float
    gain_stderr: float
    epsilon: float

    @property
    def ok(self) -> bool:
        return self.gain <= self.epsilon


@dataclass(frozen=True)
class EquilibriumReport:
    profile: tuple[str, ...]
    payoffs: np.ndarray
    payoff_stderr: np.ndarray
    checks: tuple[PlayerCheck, ...]
    outcome_average: np.ndarray
    samples: int
    seed: int
    metadata: dict = field(default_factory=dict)

    @property
    def gains(self) -> np.ndarray:
        return np.array([c.gain for c in self.checks])

    @property
    def confirmed(self) -> bool:
        return all(c.ok for c in self.checks)


def _describe(s: MixedQuantumStrategy) -> str:
    if s.label:
        return s.label
    if s.haar:
        return "haar"
    return "mixture[" + ", ".join(
        f"{w:g}*({c.A.real:.6g},{c.A.imag:.6g},{c.B.real:.6g},{c.B.imag:.6g})" for w, c in s.support
    ) + "]"


def verify_equilibrium(
    game: Game,
    profile: Sequence[MixedQuantumStrategy],
    epsilon: float | None = None,
    config: SearchConfig = SearchConfig(),
) -> EquilibriumReport:
    """Check that no player gains more than ``epsilon`` by deviating.

    The deviation is found on one random stream and scored on another, so
    the reported gain is not inflated by fitting the search to noise. When
    ``epsilon`` is None each player gets ``max(config.min_epsilon, 3 * se)``
    with ``se`` the standard error of their paired gain estimate.
    """
    profile = _validate_profile(game, profile)
    current = _per_draw_payoffs(game, profile, config.samples, config.seed, workers=config.workers)
    summary = _summarize(current)
    checks = []
    for j in range(game.n_players):
        br = best_response(game, j, profile, config)
        deviated = _per_draw_payoffs(
            game, profile, config.samples, config.seed, fixed={j: br.strategy.coefficients},
            workers=config.workers,
        )
        diff = deviated[:, j] - current[:, j] if len(deviated) == len(current) else None
        if diff is None:
            # one side is exact, the other sampled
            diff = np.broadcast_arrays(deviated[:, j], current[:, j])
            diff = diff[0] - diff[1]
        gain = float(diff.mean())
        gain_se = float(diff.std(ddof=1) / np.sqrt(len(diff))) if len(diff) > 1 else 0.0
        eps = max(config.min_epsilon, 3.0 * gain_se) if epsilon is None else float(epsilon)
        checks.append(
            PlayerCheck(
                player=j,
                payoff=float(summary.mean[j]),
                payoff_stderr=float(summary.stderr[j]),
                best_response=br.strategy,
                best_response_payoff=float(deviated[:, j].mean()),
                gain=gain,
                gain_stderr=gain_se,
                epsilon=eps,
            )
        )
    return EquilibriumReport(
        profile=tuple(_describe(s) for s in profile),
        payoffs=summary.mean,
        payoff_stderr=summary.stderr,
        checks=tuple(checks),
        outcome_average=game.outcome_average,
        samples=summary.samples,
        seed=config.seed,
        metadata={"grid": list(config.grid), "tol": config.tol},
    )


# --- maximin for two-player games --------------------------------------------


@dataclass(frozen=True)
class MaximinResult:
    player: int
    strategy: MixedQuantumStrategy
    guaranteed: float  # exact worst case of ``strategy`` over all opponent replies
    upper_bound: float  # best reply value against the opponent's restricted mixture
    iterations: int

    @property
    def gap(self) -> float:
        return self.upper_bound - self.guaranteed


def _solve_matrix_game(table: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Row player's maximin mixture, column player's minimax mixture, value."""
    rows, cols = table.shape
    # variables: x (rows), v; maximize v subject to x^T A[:, t] >= v for all t
    c = np.zeros(rows + 1)
    c[-1] = -1.0
    a_ub = np.hstack([-table.T, np.ones((cols, 1))])
    res = linprog(
        c,
        A_ub=a_ub,
        b_ub=np.zeros(cols),
        A_eq=np.hstack([np.ones((1, rows)), np.zeros((1, 1))]),
        b_eq=[1.0],
        bounds=[(0, None)] * rows + [(None, None)],
        method="highs",
    )
    if not res.success:
        raise RuntimeError(f"linear program failed: {res.message}")
    x = np.clip(res.x[:rows], 0.0, None)
    y = np.clip(-np.asarray(res.ineqlin.marginals), 0.0, None)
    return x / x.sum(), y / y.sum(), float(res.x[-1])


def maximin(
    game: Game,
    player: int = 0,
    tol: float = 1e-9,
    max_iter: int = 100,
) -> MaximinResult:
    """Security strategy of a two-player mixed quantum game (double oracle).

    Restricted matrix games over growing pure-strategy sets are solved by
    linear programming; each round adds both players' exact best replies,
    found as extreme eigenvectors of the payoff form. ``guaranteed`` is the
    exact worst-case payoff of the returned mixture.
    """
    if game.n_players != 2:
        raise ValueError("maximin search is implemented for two-player games")
    other = 1 - player
    eta = canonical_eta(2)
    own = [SU2Strategy.identity().coefficients, SU2Strategy.flip(eta).coefficients]
    opp = [c.copy() for c in own]

    def value(c_own, c_opp):
        coeffs = np.empty((1, 2, 4))
        coeffs[0, player], coeffs[0, other] = c_own, c_opp
        return float(outcome_distribution(coeffs)[0] @ game.payoffs[:, player])

    table = np.array([[value(a, b) for b in opp] for a in own])
    best_low, best_mix, upper = -np.inf, None, np.inf
    for it in range(1, max_iter + 1):
        x, y, _ = _solve_matrix_game(table)
        mine = MixedQuantumStrategy.mixture(
            [(w, SU2Strategy.from_coefficients(*(c / np.linalg.norm(c)))) for w, c in zip(x, own) if w > 0]
        )
        theirs = MixedQuantumStrategy.mixture(
            [(w, SU2Strategy.from_coefficients(*(c / np.linalg.norm(c)))) for w, c in zip(y, opp) if w > 0]
        )
        prof = [None, None]
        prof[player] = mine
        prof[other] = theirs
        # opponent's worst reply to our mixture; our best reply to theirs
        reply_form = payoff_form(game, other, prof, payoff_of=player)
        evals, evecs = np.linalg.eigh(reply_form)
        low, reply = float(evals[0]), evecs[:, 0]
        own_form = payoff_form(game, player, prof)
        evals2, evecs2 = np.linalg.eigh(own_form)
        high, improve = float(evals2[-1]), evecs2[:, -1]
        if low > best_low:
            best_low, best_mix = low, mine
        upper = min(upper, high)
        if upper - best_low <= tol:
            break
        own.append(improve)
        opp.append(reply)
        table = np.vstack([table, [value(improve, b) for b in opp[:-1]]])
        table = np.hstack([table, [[value(a, reply)] for a in own]])
    return MaximinResult(player, best_mix, best_low, upper, it)
