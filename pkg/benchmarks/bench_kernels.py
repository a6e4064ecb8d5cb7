#!/usr/bin/env python3
"""Benchmark the compiled kernel backend against the pure-Python fallback.

Times the four hot kernels on representative workloads plus one end-to-end
search run per backend.  Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from gramswarm import _kernels_py, parse_bnf
from gramswarm.fixtures import evolved_program_text, fixture_text
from gramswarm.mapping import compile_grammar, random_genotype
from gramswarm.problems.ant import compile_ant_program, parse_ant_program, parse_trail
from gramswarm.problems.mux import compile_bool_expression, mux_inputs
from gramswarm.problems.regression import compile_expression

try:
    from gramswarm import _kernels_c
except ImportError:
    _kernels_c = None


def timeit(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_derive(impl):
    grammar = compile_grammar(parse_bnf(fixture_text("regression.bnf")))
    rng = np.random.default_rng(0)
    genotypes = [random_genotype(100, rng) for _ in range(2000)]
    deriver = impl.Deriver(grammar, 2)

    def work():
        for g in genotypes:
            deriver.derive(g)

    return work


def bench_ant(impl):
    grid = parse_trail(fixture_text("santafe_trail.txt"))
    ops, args = compile_ant_program(parse_ant_program(evolved_program_text("gmfo_ant")))

    def work():
        for _ in range(500):
            impl.run_ant(ops, args, grid.copy(), 0, 0, 1, 600, 89)

    return work


def bench_expr(impl):
    prog = compile_expression(evolved_program_text("gmfo_regression"))
    xs = np.random.default_rng(1).uniform(-1, 1, 100)

    def work():
        for _ in range(3000):
            impl.eval_postfix(prog, xs)

    return work


def bench_bool(impl):
    prog = compile_bool_expression(evolved_program_text("gmfo_mux3"))
    rows = mux_inputs()

    def work():
        for _ in range(10000):
            impl.eval_bool_postfix(prog, rows)

    return work


def bench_end_to_end(backend_env):
    import os
    import subprocess
    import sys

    code = (
        "import time, numpy as np;"
        "from gramswarm.engines import EngineConfig, run;"
        "from gramswarm.problems import build_problem, load_problem_grammar;"
        "import gramswarm.kernels as k;"
        "rng = np.random.default_rng(0);"
        "p = build_problem('regression', rng=rng);"
        "g = load_problem_grammar('regression');"
        "t0 = time.perf_counter();"
        "run(EngineConfig(engine='gmfo', target_error=0.01), p, g, 2, seed=0, rng=rng);"
        "print(f'{k.backend_name()} {time.perf_counter()-t0:.3f}')"
    )
    env = dict(os.environ)
    env["GRAMSWARM_PURE"] = backend_env
    out = subprocess.run([sys.executable, "-c", code], capture_output=True,
                         text=True, env=env)
    return out.stdout.strip()


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    backends = [("python", _kernels_py)]
    if _kernels_c is not None:
        backends.append(("compiled", _kernels_c))
    else:
        print("compiled backend not available; showing fallback only")

    benches = [
        ("derive (2000 genotypes, d=100, wraps=2)", bench_derive),
        ("ant simulation (500 runs x 600 steps)", bench_ant),
        ("expression eval (3000 x 100 cases)", bench_expr),
        ("boolean eval (10000 x 8 rows)", bench_bool),
    ]
    print(f"{'kernel':45s} " + " ".join(f"{name:>10s}" for name, _ in backends) +
          f" {'speedup':>9s}")
    for label, make in benches:
        times = [timeit(make(impl), args.repeat) for _, impl in backends]
        cells = " ".join(f"{t * 1000:9.1f}ms" for t in times)
        speedup = f"{times[0] / times[-1]:8.1f}x" if len(times) > 1 else "      n/a"
        print(f"{label:45s} {cells} {speedup}")

    print("\nend-to-end search run (gmfo, regression, 30000 FEs):")
    for env_value in ("1", "0"):
        print(" ", bench_end_to_end(env_value))


if __name__ == "__main__":
    main()
