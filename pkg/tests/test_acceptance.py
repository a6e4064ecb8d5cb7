"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the report lines.
"""

import csv
import itertools
import math

import numpy as np
from mapping_oracle import oracle_map

from gramswarm import map_genotype
from gramswarm.engines import EngineConfig, run
from gramswarm.fixtures import evolved_program_text
from gramswarm.harness import ExperimentConfig, export, run_experiment
from gramswarm.problems import (
    AntWorld,
    RegressionProblem,
    build_problem,
    load_problem_grammar,
    parse_ant_program,
    run_ant,
    truth_table,
)


def _report(number, ok, detail):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number}: {status} - {detail}")
    assert ok, detail


def test_criterion_1_ant_oracle():
    """Reference ant programs eat exactly 89/89 and 88/89 within 600 steps."""
    world = AntWorld.canonical()
    eaten_full = run_ant(parse_ant_program(evolved_program_text("gmfo_ant")), world)
    steps_full = world.steps_used
    world = AntWorld.canonical()
    eaten_near = run_ant(parse_ant_program(evolved_program_text("gwo_ant")), world)
    ok = eaten_full == 89 and steps_full <= 600 and eaten_near == 88
    _report(1, ok, f"ant programs ate {eaten_full}/89 (in {steps_full} steps) and {eaten_near}/89")


def test_criterion_2_regression_oracle():
    """Both reference regression programs reach < 1e-12 summed error."""
    worst = 0.0
    rng = np.random.default_rng(20240809)
    case_sets = [RegressionProblem.shared()] + [RegressionProblem.sample(rng) for _ in range(5)]
    for problem in case_sets:
        for name in ("gmfo_regression", "gwo_regression"):
            worst = max(worst, problem.evaluate_text(evolved_program_text(name)))
    _report(2, worst < 1e-12, f"max summed abs error over case sets = {worst:.3e}")


def test_criterion_3_mux_relation():
    """The two reference mux programs differ in exactly 1 of 8 rows."""
    table_a = truth_table(evolved_program_text("gmfo_mux3"))
    table_b = truth_table(evolved_program_text("gwo_mux3"))
    distance = int(np.count_nonzero(table_a != table_b))
    _report(3, distance == 1, f"truth-table Hamming distance = {distance}")


def test_criterion_4_mapper_oracle_equivalence(expr_grammar):
    """Mapper agrees with the brute-force oracle on all 4681 genotypes."""
    mismatches = 0
    checked = 0
    for length in range(5):
        for codons in itertools.product(range(8), repeat=length):
            checked += 1
            expected = oracle_map(expr_grammar, codons, 2)
            phenotype = map_genotype(expr_grammar, list(codons), 2)
            actual = (phenotype.valid, phenotype.text, phenotype.codons_used,
                      phenotype.wraps_used)
            if actual != expected:
                mismatches += 1
    ok = mismatches == 0 and checked == 4681
    _report(4, ok, f"{checked} genotypes checked, {mismatches} mismatches")


def test_criterion_5_desk_scale_stochastic_reproduction():
    """10 regression runs per engine: >= 1 success each, mean error in [0, 25]."""
    grammar = load_problem_grammar("regression")
    summary = []
    ok = True
    for engine in ("gmfo", "gwo"):
        errors = []
        successes = 0
        for seed in range(10):
            rng = np.random.default_rng(seed)
            problem = build_problem("regression", rng=rng)
            config = EngineConfig(engine=engine, target_error=0.01)
            record = run(config, problem, grammar, wrap_limit=2, seed=seed, rng=rng)
            assert record.fes_used <= 30000
            errors.append(record.best_error)
            successes += record.success
        mean_error = float(np.mean(errors))
        ok = ok and successes >= 1 and 0.0 <= mean_error <= 25.0
        summary.append(f"{engine}: {successes}/10 successes, mean {mean_error:.2f}")
    _report(5, ok, "; ".join(summary))


def test_criterion_6_invariant_suite(tmp_path):
    """FE ceiling, codon bounds, monotone best, invalid accounting, determinism."""
    problems = {}
    grammar_cache = {}
    violations = []
    rng = np.random.default_rng(606)
    n_runs = 0
    for seed in range(100):
        name = ("mux3", "regression", "ant")[seed % 3]
        grammar = grammar_cache.setdefault(name, load_problem_grammar(name))
        run_rng = np.random.default_rng(seed)
        problem = build_problem(name, rng=run_rng, shared_cases=(name == "regression"))
        engine = "gmfo" if seed % 2 == 0 else "gwo"
        config = EngineConfig(engine=engine, n_agents=5, dim=20,
                              max_fes=int(rng.integers(10, 80)))
        best_trace = []
        record = run(config, problem, grammar, wrap_limit=problem.default_wraps,
                     seed=seed, rng=run_rng,
                     on_iteration=lambda it, fe, best: best_trace.append((fe, best)))
        n_runs += 1
        if record.fes_used > config.max_fes:
            violations.append(f"seed {seed}: fe ceiling broken")
        finite = [b for _, b in best_trace if not math.isinf(b)]
        if any(x < y for x, y in zip(finite, finite[1:])):
            violations.append(f"seed {seed}: best error increased")
        if any(fe > config.max_fes for fe, _ in best_trace):
            violations.append(f"seed {seed}: fe counter exceeded budget mid-run")

    # invalid evaluations never advance fe_count: a grammar that cannot
    # terminate within the wrap budget yields zero FEs
    from gramswarm import parse_bnf

    hungry = parse_bnf("<a> := <a> <a>")
    config = EngineConfig(engine="gmfo", n_agents=5, dim=10, max_fes=50,
                          target_error=-1.0)

    class _NeverCalled:
        name = "stub"

        def error_text(self, text):
            raise AssertionError("invalid phenotypes must not be evaluated")

    record = run(config, _NeverCalled(), hungry, wrap_limit=0, seed=1)
    if record.fes_used != 0:
        violations.append("invalid phenotypes advanced fe_count")

    # seed determinism: byte-identical exports (timing column excluded)
    cfg = ExperimentConfig(engine="gwo", problem="mux3", runs=2, seed=42,
                           n_agents=5, dim=15, max_fes=75, workers=1)
    outs = []
    for sub in ("a", "b"):
        records, stats = run_experiment(cfg)
        out = tmp_path / sub
        export(records, stats, out)
        outs.append(out)
    if (outs[0] / "stats.json").read_bytes() != (outs[1] / "stats.json").read_bytes():
        violations.append("stats.json not byte-identical across reruns")
    for prog in sorted((outs[0] / "programs").iterdir()):
        if prog.read_bytes() != (outs[1] / "programs" / prog.name).read_bytes():
            violations.append(f"program export {prog.name} differs across reruns")

    def csv_rows_sans_wall(path):
        with open(path) as fh:
            rows = list(csv.reader(fh))
        idx = rows[0].index("wall_ms")
        return [[c for i, c in enumerate(r) if i != idx] for r in rows]

    if csv_rows_sans_wall(outs[0] / "runs.csv") != csv_rows_sans_wall(outs[1] / "runs.csv"):
        violations.append("runs.csv (excluding wall_ms) differs across reruns")

    ok = not violations
    detail = f"{n_runs} property runs clean" if ok else "; ".join(violations[:4])
    _report(6, ok, detail)


def test_criterion_7_statistics():
    """success_rate(9 of 30) = 30.00% and success_rate(0 of 30) = 0.00%, exact."""
    from gramswarm.engines import RunRecord
    from gramswarm.harness import format_success, success_rate

    def records(successes, total):
        return [RunRecord(seed=i, engine="gmfo", problem="mux3", best_error=0.0,
                          success=i < successes, fes_used=1, best_program="x",
                          wall_ms=0.0) for i in range(total)]

    rate_9 = success_rate(records(9, 30))
    rate_0 = success_rate(records(0, 30))
    ok = (rate_9 == 30.00 and rate_0 == 0.00
          and format_success(9, 30) == "9(30.00%)"
          and format_success(0, 30) == "0(0.00%)")
    _report(7, ok, f"success_rate -> {rate_9:.2f}% and {rate_0:.2f}%; "
                   f"formatted {format_success(9, 30)}, {format_success(0, 30)}")
