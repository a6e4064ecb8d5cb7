"""Quartic symbolic regression: evaluate prefix expressions against x+x^2+x^3+x^4.

Expressions use prefix function syntax over ``plus``, ``minus``, ``times``,
``pdivide`` and the variable ``x``; ``pdivide(a, b)`` is protected division,
returning 1 when the denominator is (near) zero so every expression is total.
Fitness is the sum of absolute errors over the problem's fitness cases.
"""

from __future__ import annotations

import re

import numpy as np

from .. import kernels
from .. import opcodes as oc
from ..errors import ExprSyntaxError

N_CASES = 100
CASE_RANGE = (-1.0, 1.0)

# pinned case set used when runs must share fitness cases (--shared-cases)
SHARED_CASE_SEED = 987654321

_FN_OPS = {
    "plus": oc.EXPR_ADD,
    "minus": oc.EXPR_SUB,
    "times": oc.EXPR_MUL,
    "pdivide": oc.EXPR_PDIV,
}

_TOKEN_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*|[(),]|\S")


def target_function(x):
    """The regression target f(x) = x + x^2 + x^3 + x^4."""
    x = np.asarray(x, dtype=np.float64)
    return x + x**2 + x**3 + x**4


def tokenize_expression(text: str) -> list[str]:
    tokens = _TOKEN_RE.findall(text)
    for tok in tokens:
        if tok not in _FN_OPS and tok not in ("x", "(", ")", ","):
            if not tok.isidentifier():
                raise ExprSyntaxError(f"bad character {tok!r} in expression")
    return tokens


def compile_expression(source) -> np.ndarray:
    """Compile prefix text or tokens to a postfix opcode array."""
    tokens = tokenize_expression(source) if isinstance(source, str) else list(source)
    out: list[int] = []
    pos = 0

    def expect(tok):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            found = tokens[pos] if pos < len(tokens) else "<end>"
            raise ExprSyntaxError(f"expected {tok!r}, found {found!r}")
        pos += 1

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            raise ExprSyntaxError("unexpected end of expression")
        tok = tokens[pos]
        pos += 1
        if tok == "x":
            out.append(oc.EXPR_PUSH_X)
            return
        op = _FN_OPS.get(tok)
        if op is None:
            raise ExprSyntaxError(f"unexpected token {tok!r}")
        expect("(")
        expr()
        expect(",")
        expr()
        expect(")")
        out.append(op)

    expr()
    if pos != len(tokens):
        raise ExprSyntaxError(f"trailing tokens starting at {tokens[pos]!r}")
    return np.asarray(out, dtype=np.int32)


def eval_expression(text: str, x: float) -> float:
    """Evaluate a prefix expression at a single point."""
    prog = compile_expression(text)
    return float(kernels.eval_postfix(prog, np.asarray([x], dtype=np.float64))[0])


class RegressionProblem:
    """Fitness cases plus the summed-absolute-error oracle."""

    name = "regression"
    target_error = 0.01
    default_wraps = 2
    grammar_fixture = "regression.bnf"
    worst_error = float("inf")

    def __init__(self, xs):
        xs = np.asarray(xs, dtype=np.float64)
        if xs.ndim != 1 or xs.size == 0:
            raise ValueError("fitness cases must be a non-empty 1-d array")
        if np.abs(xs).max() > 1.0:
            raise ValueError("fitness cases must lie in [-1, 1]")
        self.xs = xs
        self.ys = target_function(xs)

    @classmethod
    def sample(cls, rng, n_cases: int = N_CASES) -> "RegressionProblem":
        lo, hi = CASE_RANGE
        return cls(rng.uniform(lo, hi, n_cases))

    @classmethod
    def shared(cls, n_cases: int = N_CASES, seed: int = SHARED_CASE_SEED) -> "RegressionProblem":
        return cls.sample(np.random.default_rng(seed), n_cases)

    def evaluate_text(self, text: str) -> float:
        """Summed absolute error; raises ExprSyntaxError on bad syntax."""
        prog = compile_expression(text)
        outs = kernels.eval_postfix(prog, self.xs)
        err = float(np.abs(outs - self.ys).sum())
        return err if np.isfinite(err) else self.worst_error

    def error_text(self, text: str) -> float:
        try:
            return self.evaluate_text(text)
        except ExprSyntaxError:
            return self.worst_error


def regression_error(text: str, problem: RegressionProblem) -> float:
    return problem.error_text(text)
