"""Command-line interface: run experiments, map genotypes, evaluate programs."""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import kernels
from .errors import GramswarmError
from .grammar import parse_bnf
from .harness import (
    ExperimentConfig,
    export,
    format_success,
    load_config,
    run_experiment,
)
from .mapping import format_trace, map_with_trace
from .problems import PROBLEM_NAMES, build_problem

DEFAULT_OUT_ENV = "GRAMSWARM_OUT"


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gramswarm",
        description="Grammar-based program synthesis with swarm search engines",
    )
    parser.add_argument("--version", action="version", version="%(prog)s 0.1.0")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a multi-seed experiment")
    p_run.add_argument("--config", help="key=value config file (flags override)")
    p_run.add_argument("--engine", choices=["gmfo", "gwo"])
    p_run.add_argument("--problem", choices=list(PROBLEM_NAMES))
    p_run.add_argument("--runs", type=int)
    p_run.add_argument("--seed", type=int)
    p_run.add_argument("--agents", type=int, help="population size (default 30)")
    p_run.add_argument("--dim", type=int, help="genotype length (default 100)")
    p_run.add_argument("--max-fes", type=int, help="evaluation budget (default 30000)")
    p_run.add_argument("--target", type=float, help="target error (default per problem)")
    p_run.add_argument("--wraps", type=int, help="wrap limit (default per problem)")
    p_run.add_argument("--grammar", help="override grammar file")
    p_run.add_argument("--trail", help="override ant trail file")
    p_run.add_argument("--shared-cases", action="store_true",
                       help="pin the shared regression case set across runs")
    p_run.add_argument("--skip-unit-rules", action="store_true",
                       help="do not consume codons on single-production rules")
    p_run.add_argument("--workers", type=int, help="parallel processes (default: cores)")
    p_run.add_argument("--convergence", action="store_true",
                       help="write per-run convergence CSVs")
    p_run.add_argument("--out", help="output directory "
                       f"(default ${DEFAULT_OUT_ENV} or ./results)")
    p_run.set_defaults(func=cmd_run)

    p_map = sub.add_parser("map", help="map a codon vector through a grammar")
    p_map.add_argument("--grammar", required=True, help="BNF grammar file")
    p_map.add_argument("--codons", required=True, help="comma-separated codons")
    p_map.add_argument("--wraps", type=int, default=0)
    p_map.add_argument("--skip-unit-rules", action="store_true")
    p_map.add_argument("--trace", action="store_true", help="print the expansion trace")
    p_map.set_defaults(func=cmd_map)

    p_eval = sub.add_parser("eval", help="evaluate a program text on a problem")
    p_eval.add_argument("--problem", required=True, choices=list(PROBLEM_NAMES))
    p_eval.add_argument("--program-file", required=True)
    p_eval.add_argument("--trail", help="override ant trail file")
    p_eval.set_defaults(func=cmd_eval)

    p_bench = sub.add_parser("backend", help="print the active kernel backend")
    p_bench.set_defaults(func=lambda args: print(kernels.backend_name()) or 0)
    return parser


def cmd_run(args) -> int:
    if args.config:
        config = load_config(args.config)
    else:
        if not args.engine or not args.problem:
            print("error: --engine and --problem are required (or use --config)",
                  file=sys.stderr)
            return 2
        config = ExperimentConfig(engine=args.engine, problem=args.problem)
    overrides = {}
    if args.engine is not None:
        overrides["engine"] = args.engine
    if args.problem is not None:
        overrides["problem"] = args.problem
    if args.runs is not None:
        overrides["runs"] = args.runs
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.agents is not None:
        overrides["n_agents"] = args.agents
    if args.dim is not None:
        overrides["dim"] = args.dim
    if args.max_fes is not None:
        overrides["max_fes"] = args.max_fes
    if args.target is not None:
        overrides["target_error"] = args.target
    if args.wraps is not None:
        overrides["wraps"] = args.wraps
    if args.grammar is not None:
        overrides["grammar_path"] = args.grammar
    if args.trail is not None:
        overrides["trail_path"] = args.trail
    if args.shared_cases:
        overrides["shared_cases"] = True
    if args.skip_unit_rules:
        overrides["skip_unit_rules"] = True
    if args.workers is not None:
        overrides["workers"] = args.workers

    out_dir = Path(args.out or os.environ.get(DEFAULT_OUT_ENV) or "results")
    if args.convergence:
        overrides["convergence_dir"] = str(out_dir / "convergence")
    config = replace(config, **overrides)

    records, stats = run_experiment(config)
    for r in records:
        print(f"seed={r.seed} best_error={r.best_error:g} success={r.success} "
              f"fes={r.fes_used} program={r.best_program}")
    print(f"{config.engine} {config.problem}: "
          f"error {stats.mean_error:.4f} ({stats.std_error:.4f}) | "
          f"success {format_success(stats.success_count, stats.runs)} | "
          f"fes {stats.mean_fes:.1f} ({stats.std_fes:.4f})")
    written = export(records, stats, out_dir)
    print(f"wrote {len(written)} files under {out_dir}")
    return 0


def cmd_map(args) -> int:
    grammar = parse_bnf(Path(args.grammar).read_text(encoding="utf-8"))
    try:
        codons = [int(tok) for tok in args.codons.split(",") if tok.strip() != ""]
    except ValueError:
        print(f"error: bad codon list {args.codons!r}", file=sys.stderr)
        return 2
    phenotype, trace = map_with_trace(
        grammar, codons, args.wraps, skip_unit_rules=args.skip_unit_rules
    )
    if args.trace:
        print(format_trace(trace))
    print(phenotype.text if phenotype.valid else "INVALID")
    return 0


def cmd_eval(args) -> int:
    trail_text = Path(args.trail).read_text(encoding="utf-8") if args.trail else None
    problem = build_problem(args.problem, rng=np.random.default_rng(0),
                            shared_cases=True, trail_text=trail_text)
    text = Path(args.program_file).read_text(encoding="utf-8")
    error = problem.evaluate_text(text)
    print(f"{error:g}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (GramswarmError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
