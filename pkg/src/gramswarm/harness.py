"""Multi-run experiments: orchestration, statistics, and persistence.

Runs are seeded ``base_seed .. base_seed + runs - 1`` and are independent;
they execute in parallel processes (ordering of results is by seed, never by
completion time).  Statistics use the sample (n-1) standard deviation.
"""

from __future__ import annotations

import csv
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path

import numpy as np

from .engines import ENGINES, EngineConfig, RunRecord, run
from .errors import ConfigError, EmptyRecords
from .problems import PROBLEM_NAMES, build_problem, load_problem_grammar

DEFAULT_RUNS = 30


@dataclass
class ExperimentConfig:
    engine: str
    problem: str
    runs: int = DEFAULT_RUNS
    seed: int = 0
    n_agents: int = 30
    dim: int = 100
    max_fes: int = 30000
    target_error: float | None = None  # None: problem default
    wraps: int | None = None           # None: problem default
    grammar_path: str | None = None
    trail_path: str | None = None
    shared_cases: bool = False
    skip_unit_rules: bool = False
    workers: int | None = None         # None: one per core
    convergence_dir: str | None = None

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ConfigError(f"unknown engine {self.engine!r}; choose from {ENGINES}")
        if self.problem not in PROBLEM_NAMES:
            raise ConfigError(f"unknown problem {self.problem!r}; choose from {PROBLEM_NAMES}")
        if self.runs < 1:
            raise ConfigError("runs must be >= 1")


@dataclass(frozen=True)
class ExperimentStats:
    runs: int
    mean_error: float
    std_error: float
    success_count: int
    success_rate: float
    mean_fes: float
    std_fes: float

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ExperimentStats":
        names = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in names})


def success_rate(records) -> float:
    """Share of runs that reached the target, as a percentage."""
    records = list(records)
    if not records:
        raise EmptyRecords("no run records")
    return 100.0 * sum(1 for r in records if r.success) / len(records)


def format_success(count: int, runs: int) -> str:
    """Render like the result tables: ``9(30.00%)``."""
    return f"{count}({100.0 * count / runs:.2f}%)"


def _sample_std(values) -> float:
    if len(values) < 2:
        return 0.0
    return float(np.std(values, ddof=1))


def compute_stats(records) -> ExperimentStats:
    records = list(records)
    if not records:
        raise EmptyRecords("no run records")
    errors = [r.best_error for r in records]
    fes = [r.fes_used for r in records]
    successes = sum(1 for r in records if r.success)
    return ExperimentStats(
        runs=len(records),
        mean_error=float(np.mean(errors)),
        std_error=_sample_std(errors),
        success_count=successes,
        success_rate=100.0 * successes / len(records),
        mean_fes=float(np.mean(fes)),
        std_fes=_sample_std(fes),
    )


def _run_single(payload) -> RunRecord:
    cfg_dict, seed = payload
    cfg = ExperimentConfig(**cfg_dict)
    rng = np.random.default_rng(seed)
    trail_text = None
    if cfg.trail_path is not None:
        trail_text = Path(cfg.trail_path).read_text(encoding="utf-8")
    problem = build_problem(
        cfg.problem, rng=rng, shared_cases=cfg.shared_cases, trail_text=trail_text
    )
    grammar = load_problem_grammar(cfg.problem, path=cfg.grammar_path)
    engine_config = EngineConfig(
        engine=cfg.engine,
        n_agents=cfg.n_agents,
        dim=cfg.dim,
        max_fes=cfg.max_fes,
        target_error=cfg.target_error if cfg.target_error is not None else problem.target_error,
        skip_unit_rules=cfg.skip_unit_rules,
    )
    wraps = cfg.wraps if cfg.wraps is not None else problem.default_wraps

    trace_rows: list[tuple[int, int, float]] = []
    on_iteration = None
    if cfg.convergence_dir is not None:
        on_iteration = lambda it, fe, best: trace_rows.append((it, fe, best))

    record = run(engine_config, problem, grammar, wraps, seed=seed, rng=rng,
                 on_iteration=on_iteration)

    if cfg.convergence_dir is not None:
        out = Path(cfg.convergence_dir)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / f"convergence_{seed}.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["iteration", "fe_count", "best_error"])
            writer.writerows(trace_rows)
    return record


def run_experiment(config: ExperimentConfig):
    """Execute ``config.runs`` independent runs; returns (records, stats)."""
    seeds = [config.seed + k for k in range(config.runs)]
    payloads = [(asdict(config), s) for s in seeds]
    workers = config.workers if config.workers is not None else (os.cpu_count() or 1)
    workers = max(1, min(workers, config.runs))
    if workers == 1:
        records = [_run_single(p) for p in payloads]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_run_single, payloads))
    return records, compute_stats(records)


CSV_COLUMNS = ["seed", "engine", "problem", "best_error", "success", "fes_used",
               "wall_ms", "best_program"]


def export(records, stats: ExperimentStats, out_dir, formats=("csv", "json")) -> list[Path]:
    """Write runs.csv, stats.json and per-run best-program files.

    Output content is deterministic for identical records except the wall_ms
    column, which carries measured timings.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    if "csv" in formats:
        path = out / "runs.csv"
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(CSV_COLUMNS)
            for r in records:
                writer.writerow([r.seed, r.engine, r.problem, repr(r.best_error),
                                 r.success, r.fes_used, f"{r.wall_ms:.1f}",
                                 r.best_program])
        written.append(path)
    if "json" in formats:
        path = out / "stats.json"
        payload = dict(stats.to_dict())
        payload["_std_convention"] = "sample (ddof=1)"
        with open(path, "w") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
        written.append(path)
    programs_dir = out / "programs"
    programs_dir.mkdir(exist_ok=True)
    for r in records:
        path = programs_dir / f"seed_{r.seed}.txt"
        path.write_text(r.best_program + "\n", encoding="utf-8")
        written.append(path)
    return written


_CONFIG_KEYS = {
    "engine": str,
    "problem": str,
    "runs": int,
    "N": int,
    "d": int,
    "max_fes": int,
    "target_error": float,
    "wraps": int,
    "seed": int,
    "grammar_path": str,
    "trail_path": str,
    "shared_cases": bool,
}

_KEY_TO_FIELD = {"N": "n_agents", "d": "dim"}


def load_config(path) -> ExperimentConfig:
    """Parse a plain ``key=value`` config file into an ExperimentConfig."""
    values: dict = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        caster = _CONFIG_KEYS[key]
        if caster is bool:
            if value.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ConfigError(f"{path}:{lineno}: bad boolean {value!r}")
            parsed = value.lower() in ("true", "1", "yes")
        else:
            try:
                parsed = caster(value)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: {exc}") from None
        values[_KEY_TO_FIELD.get(key, key)] = parsed
    if "engine" not in values or "problem" not in values:
        raise ConfigError(f"{path}: config must set engine and problem")
    return ExperimentConfig(**values)
