"""Benchmark problems: ant trail, quartic regression, 3-input multiplexer.

Each problem exposes the same oracle surface: ``evaluate_text`` (raising on
syntax errors), ``error_text`` (total, worst score on syntax errors), plus
``target_error`` and ``default_wraps`` defaults.
"""

from __future__ import annotations

import numpy as np

from ..errors import ConfigError
from ..fixtures import fixture_text
from ..grammar import Grammar, parse_bnf
from .ant import AntProblem, AntWorld, ant_error, parse_ant_program, run_ant
from .mux import MuxProblem, mux_error, truth_table
from .regression import RegressionProblem, eval_expression, regression_error

PROBLEM_NAMES = ("ant", "regression", "mux3")


def build_problem(
    name: str,
    *,
    rng=None,
    shared_cases: bool = False,
    trail_text: str | None = None,
):
    """Construct a problem instance.

    Regression draws its fitness cases from ``rng`` unless ``shared_cases``
    pins the shared case set.  The ant trail can be overridden with
    ``trail_text``.
    """
    if name == "ant":
        return AntProblem(trail_text=trail_text)
    if name == "regression":
        if shared_cases:
            return RegressionProblem.shared()
        if rng is None:
            rng = np.random.default_rng()
        return RegressionProblem.sample(rng)
    if name == "mux3":
        return MuxProblem()
    raise ConfigError(f"unknown problem {name!r}; choose from {PROBLEM_NAMES}")


def load_problem_grammar(name: str, path: str | None = None) -> Grammar:
    """The problem's grammar, from its packaged fixture or an override file."""
    if path is not None:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_bnf(fh.read())
    fixture = {
        "ant": "ant.bnf",
        "regression": "regression.bnf",
        "mux3": "mux3.bnf",
    }.get(name)
    if fixture is None:
        raise ConfigError(f"unknown problem {name!r}; choose from {PROBLEM_NAMES}")
    return parse_bnf(fixture_text(fixture))


__all__ = [
    "AntProblem",
    "AntWorld",
    "MuxProblem",
    "PROBLEM_NAMES",
    "RegressionProblem",
    "ant_error",
    "build_problem",
    "eval_expression",
    "load_problem_grammar",
    "mux_error",
    "parse_ant_program",
    "regression_error",
    "run_ant",
    "truth_table",
]
