"""Population search over codon space: moth-flame and whale optimization.

Agents carry a continuous position vector in [0, 255]^d (the search dynamics
operate on it) and an integer genotype derived by rounding and clamping.
Fitness is the problem error of the mapped phenotype; invalid phenotypes get
a worst-fitness sentinel and do not consume the evaluation budget.  A run
ends when the budget of valid fitness evaluations is spent or the best error
reaches the target.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from . import opcodes as oc
from .errors import ConfigError, DerivationLoopError
from .mapping import CompiledGrammar, compile_grammar

ENGINE_GMFO = "gmfo"
ENGINE_GWO = "gwo"
ENGINES = (ENGINE_GMFO, ENGINE_GWO)

CODON_MAX = 255.0
WORST_FITNESS = math.inf


@dataclass
class EngineConfig:
    engine: str
    n_agents: int = 30
    dim: int = 100
    max_fes: int = 30000
    target_error: float = 0.0
    spiral_b: float = 1.0
    skip_unit_rules: bool = False
    invalid_streak_limit: int = 5

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}; choose from {ENGINES}")
        if self.n_agents < 2:
            raise ConfigError("n_agents must be >= 2")
        if self.dim < 1:
            raise ConfigError("dim must be >= 1")
        if self.max_fes < self.n_agents:
            raise ConfigError("max_fes must be >= n_agents")
        if self.invalid_streak_limit < 1:
            raise ConfigError("invalid_streak_limit must be >= 1")

    @property
    def horizon(self) -> float:
        """Nominal iteration count used by the engine schedules."""
        return self.max_fes / self.n_agents


@dataclass
class BestRecord:
    fitness: float = WORST_FITNESS
    genotype: np.ndarray | None = None
    position: np.ndarray | None = None
    text: str | None = None


@dataclass
class EngineState:
    positions: np.ndarray
    genotypes: np.ndarray
    fitness: np.ndarray
    invalid_streak: np.ndarray
    best: BestRecord = field(default_factory=BestRecord)
    fe_count: int = 0
    iteration: int = 0
    flames: np.ndarray | None = None
    flame_fitness: np.ndarray | None = None
    schedule: dict = field(default_factory=dict)


@dataclass(frozen=True)
class RunRecord:
    seed: int | None
    engine: str
    problem: str
    best_error: float
    success: bool
    fes_used: int
    best_program: str
    wall_ms: float


def positions_to_genotypes(positions: np.ndarray) -> np.ndarray:
    """Round half away from zero and clamp into the codon domain."""
    return np.clip(np.floor(positions + 0.5), 0.0, CODON_MAX).astype(np.int32)


def initialize_state(config: EngineConfig, rng) -> EngineState:
    u = rng.random((config.n_agents, config.dim))
    positions = np.floor(CODON_MAX * u + 0.5)
    return EngineState(
        positions=positions,
        genotypes=positions_to_genotypes(positions),
        fitness=np.full(config.n_agents, WORST_FITNESS),
        invalid_streak=np.zeros(config.n_agents, dtype=np.int32),
    )


def evaluate_population(state, config, problem, deriver, compiled, memo) -> None:
    """Map and score every agent, stopping early on budget or target.

    Invalid phenotypes receive the worst-fitness sentinel and do not advance
    ``fe_count``; the best record only ever improves.
    """
    term_strings = compiled.term_strings
    for i in range(config.n_agents):
        if state.fe_count >= config.max_fes or state.best.fitness <= config.target_error:
            break
        status, terms, _, _, _ = deriver.derive(state.genotypes[i])
        if status != oc.DERIVE_VALID:
            if status == oc.DERIVE_RUNAWAY:
                raise DerivationLoopError("grammar has a free-expansion cycle")
            state.fitness[i] = WORST_FITNESS
            state.invalid_streak[i] += 1
            continue
        state.invalid_streak[i] = 0
        key = terms.tobytes()
        error = memo.get(key)
        if error is None:
            text = " ".join(term_strings[t] for t in terms)
            error = problem.error_text(text)
            memo[key] = error
        state.fe_count += 1
        state.fitness[i] = error
        if error < state.best.fitness:
            state.best.fitness = error
            state.best.genotype = state.genotypes[i].copy()
            state.best.position = state.positions[i].copy()
            state.best.text = " ".join(term_strings[t] for t in terms)


def flame_count(n_agents: int, iteration: int, horizon: float) -> int:
    """Flame number schedule: N at the start, 1 at the horizon."""
    i = min(iteration, horizon)
    return max(1, min(n_agents, round(n_agents - i * (n_agents - 1) / horizon)))


def mfo_convergence(iteration: int, horizon: float) -> float:
    """Spiral-range parameter, decreasing linearly from -1 to -2."""
    return -1.0 - min(iteration, horizon) / horizon


def woa_coefficient(iteration: int, horizon: float) -> float:
    """Encircling coefficient a, decreasing linearly from 2 to 0."""
    return 2.0 * (1.0 - min(iteration, horizon) / horizon)


def spiral_offset(distance, b: float, t):
    """Logarithmic spiral displacement: distance * e^(b t) * cos(2 pi t)."""
    return distance * np.exp(b * t) * np.cos(2.0 * np.pi * t)


def encircle(reference, coeff_a, coeff_c, position):
    """Shrinking-encirclement update: ref - A * |C * ref - position|."""
    return reference - coeff_a * np.abs(coeff_c * reference - position)


def _clamp_and_rederive(state):
    np.clip(state.positions, 0.0, CODON_MAX, out=state.positions)
    state.genotypes = positions_to_genotypes(state.positions)


def mfo_step(state: EngineState, config: EngineConfig, rng) -> None:
    """Move every moth along a spiral toward its flame.

    Flames are the best positions among the current moths and the previous
    flames (stable sort, ties keep lower index); moth i pairs with flame i
    while i is below the shrinking flame count, otherwise with the last one.
    """
    n, d = state.positions.shape
    if state.flames is None:
        order = np.argsort(state.fitness, kind="stable")
        state.flames = state.positions[order].copy()
        state.flame_fitness = state.fitness[order].copy()
    else:
        pool = np.vstack((state.positions, state.flames))
        pool_fit = np.concatenate((state.fitness, state.flame_fitness))
        order = np.argsort(pool_fit, kind="stable")[:n]
        state.flames = pool[order].copy()
        state.flame_fitness = pool_fit[order].copy()

    n_flames = flame_count(n, state.iteration, config.horizon)
    r = mfo_convergence(state.iteration, config.horizon)
    b = config.spiral_b
    for i in range(n):
        flame = state.flames[min(i, n_flames - 1)]
        t = (r - 1.0) * rng.random(d) + 1.0
        state.positions[i] = flame + spiral_offset(np.abs(flame - state.positions[i]), b, t)
    _clamp_and_rederive(state)
    state.iteration += 1
    state.schedule = {"r": r, "flame_count": n_flames}


def woa_step(state: EngineState, config: EngineConfig, rng) -> None:
    """Whale update: encircle the leader, search around a random agent, or spiral.

    Per agent, p < 0.5 selects encirclement (around the best-so-far leader
    when |A| < 1, around a random agent otherwise); p >= 0.5 takes the
    logarithmic spiral toward the leader with l uniform on [-1, 1].
    Positions update in place, so later agents see earlier moves.
    """
    n, d = state.positions.shape
    a = woa_coefficient(state.iteration, config.horizon)
    b = config.spiral_b
    if state.best.position is not None:
        leader = state.best.position
    else:
        leader = state.positions[int(np.argmin(state.fitness))].copy()
    for i in range(n):
        r1 = rng.random()
        r2 = rng.random()
        coeff_a = 2.0 * a * r1 - a
        coeff_c = 2.0 * r2
        p = rng.random()
        l = rng.uniform(-1.0, 1.0)
        if p < 0.5:
            if abs(coeff_a) < 1.0:
                reference = leader
            else:
                reference = state.positions[int(rng.integers(n))].copy()
            state.positions[i] = encircle(reference, coeff_a, coeff_c, state.positions[i])
        else:
            distance = np.abs(leader - state.positions[i])
            state.positions[i] = leader + spiral_offset(distance, b, l)
    _clamp_and_rederive(state)
    state.iteration += 1
    state.schedule = {"a": a}


def _rerandomize_stale(state: EngineState, config: EngineConfig, rng) -> None:
    """Re-draw agents that mapped invalid for too many consecutive sweeps."""
    for i in range(config.n_agents):
        if state.invalid_streak[i] >= config.invalid_streak_limit:
            u = rng.random(config.dim)
            state.positions[i] = np.floor(CODON_MAX * u + 0.5)
            state.genotypes[i] = positions_to_genotypes(state.positions[i])
            state.invalid_streak[i] = 0


def run(
    config: EngineConfig,
    problem,
    grammar,
    wrap_limit: int,
    seed: int | None = None,
    rng=None,
    on_iteration=None,
) -> RunRecord:
    """One full search run; deterministic given the RNG stream."""
    if rng is None:
        rng = np.random.default_rng(seed)
    compiled = grammar if isinstance(grammar, CompiledGrammar) else compile_grammar(grammar)
    deriver = kernels.Deriver(compiled, wrap_limit, config.skip_unit_rules)
    step = mfo_step if config.engine == ENGINE_GMFO else woa_step

    # safety net for populations that stay invalid forever (for example a
    # grammar that cannot terminate within the wrap budget): without valid
    # evaluations the FE budget never advances, so cap iterations generously
    iteration_cap = math.ceil(10.0 * config.horizon) + 100

    start = time.perf_counter()
    state = initialize_state(config, rng)
    memo: dict[bytes, float] = {}
    while True:
        evaluate_population(state, config, problem, deriver, compiled, memo)
        if on_iteration is not None:
            on_iteration(state.iteration, state.fe_count, state.best.fitness)
        if state.best.fitness <= config.target_error or state.fe_count >= config.max_fes:
            break
        if state.iteration >= iteration_cap:
            break
        step(state, config, rng)
        _rerandomize_stale(state, config, rng)
    wall_ms = (time.perf_counter() - start) * 1000.0

    return RunRecord(
        seed=seed,
        engine=config.engine,
        problem=problem.name,
        best_error=state.best.fitness,
        success=state.best.fitness <= config.target_error,
        fes_used=state.fe_count,
        best_program=state.best.text or "",
        wall_ms=wall_ms,
    )
