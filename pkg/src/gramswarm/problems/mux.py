"""3-input multiplexer: boolean prefix expressions scored over 8 truth-table rows.

Adopted convention: x1 is the address line, x2 carries data-0 and x3 carries
data-1, so the target is ``(not x1 and x2) or (x1 and x3)``.  Error is the
number of rows where an expression disagrees with the target.
"""

from __future__ import annotations

import numpy as np

from .. import kernels
from .. import opcodes as oc
from ..errors import ExprSyntaxError
from .regression import _TOKEN_RE

N_ROWS = 8

_BOOL_FN = {
    "and": oc.BOOL_AND,
    "or": oc.BOOL_OR,
    "nand": oc.BOOL_NAND,
    "nor": oc.BOOL_NOR,
}
_VARS = {"x1": oc.BOOL_PUSH_X1, "x2": oc.BOOL_PUSH_X2, "x3": oc.BOOL_PUSH_X3}


def mux_inputs() -> np.ndarray:
    """All 8 assignments of (x1, x2, x3), x1 as the most significant bit."""
    rows = [((i >> 2) & 1, (i >> 1) & 1, i & 1) for i in range(N_ROWS)]
    return np.asarray(rows, dtype=np.uint8)


def mux_targets(inputs: np.ndarray | None = None) -> np.ndarray:
    inputs = mux_inputs() if inputs is None else inputs
    x1, x2, x3 = inputs[:, 0], inputs[:, 1], inputs[:, 2]
    return (((1 - x1) & x2) | (x1 & x3)).astype(np.uint8)


def tokenize_bool_expression(text: str) -> list[str]:
    tokens = _TOKEN_RE.findall(text)
    for tok in tokens:
        if tok not in _BOOL_FN and tok != "not" and tok not in _VARS and tok not in ("(", ")", ","):
            raise ExprSyntaxError(f"bad token {tok!r} in boolean expression")
    return tokens


def compile_bool_expression(source) -> np.ndarray:
    """Compile prefix boolean text or tokens to a postfix opcode array."""
    tokens = tokenize_bool_expression(source) if isinstance(source, str) else list(source)
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
        if tok in _VARS:
            out.append(_VARS[tok])
            return
        if tok == "not":
            expect("(")
            expr()
            expect(")")
            out.append(oc.BOOL_NOT)
            return
        op = _BOOL_FN.get(tok)
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


def truth_table(text: str) -> np.ndarray:
    """The expression's output on all 8 input rows."""
    prog = compile_bool_expression(text)
    return kernels.eval_bool_postfix(prog, mux_inputs())


class MuxProblem:
    """Disagreement count against the adopted multiplexer target."""

    name = "mux3"
    target_error = 0.0
    default_wraps = 1
    grammar_fixture = "mux3.bnf"
    worst_error = float(N_ROWS)

    def __init__(self):
        self.inputs = mux_inputs()
        self.targets = mux_targets(self.inputs)

    def evaluate_text(self, text: str) -> float:
        prog = compile_bool_expression(text)
        outs = kernels.eval_bool_postfix(prog, self.inputs)
        return float(np.count_nonzero(outs != self.targets))

    def error_text(self, text: str) -> float:
        try:
            return self.evaluate_text(text)
        except ExprSyntaxError:
            return self.worst_error


def mux_error(text: str, problem: MuxProblem | None = None) -> int:
    problem = problem or MuxProblem()
    return int(problem.error_text(text))
