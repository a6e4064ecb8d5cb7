"""Pure-Python kernel backend.

Drop-in fallback for the compiled extension ``gramswarm._kernels_c``; both
expose the same four entry points with identical numerical behaviour.  The
compiled backend is preferred at import time (see :mod:`gramswarm.kernels`);
this one keeps the package fully functional without a C toolchain.
"""

from __future__ import annotations

import numpy as np

from . import opcodes as oc

BACKEND_NAME = "python"


class Deriver:
    """Leftmost genotype-to-phenotype derivation over compiled grammar tables.

    One instance per (grammar, wrap limit, consumption mode); ``derive`` may
    be called repeatedly with genotypes of any length.
    """

    def __init__(self, tables, wrap_limit: int, skip_unit_rules: bool = False):
        if wrap_limit < 0:
            raise ValueError("wrap_limit must be >= 0")
        self._num_prods = tables.py_num_prods
        self._prod_start = tables.py_prod_start
        self._prod_rev = tables.py_prod_rev
        self._start_code = -(tables.start_id + 1)
        self._wrap_limit = wrap_limit
        self._skip_unit = skip_unit_rules

    def derive(self, codons):
        """Run the MOD-rule derivation.

        Returns ``(status, terminal_ids, choices, codons_used, wraps_used)``
        where the id arrays are ``None`` unless status is DERIVE_VALID.
        """
        if isinstance(codons, np.ndarray):
            codons = codons.tolist()
        d = len(codons)
        wrap_limit = self._wrap_limit
        skip_unit = self._skip_unit
        num_prods = self._num_prods
        prod_start = self._prod_start
        prod_rev = self._prod_rev

        budget = d * (wrap_limit + 1) + 1
        max_expansions = budget if not skip_unit else 64 + 8 * budget

        stack = [self._start_code]
        terms: list[int] = []
        choices: list[int] = []
        cursor = 0
        wraps = 0
        used = 0
        expansions = 0
        while stack:
            code = stack.pop()
            if code >= 0:
                terms.append(code)
                continue
            nt = -code - 1
            expansions += 1
            if expansions > max_expansions:
                return (oc.DERIVE_RUNAWAY, None, None, used, wraps)
            k = num_prods[nt]
            if skip_unit and k == 1:
                choice = 0
            else:
                if cursor >= d:
                    if d == 0 or wraps >= wrap_limit:
                        return (oc.DERIVE_INVALID, None, None, used, wraps)
                    wraps += 1
                    cursor = 0
                choice = codons[cursor] % k
                cursor += 1
                used += 1
            choices.append(choice)
            stack.extend(prod_rev[prod_start[nt] + choice])
        return (
            oc.DERIVE_VALID,
            np.asarray(terms, dtype=np.int32),
            np.asarray(choices, dtype=np.int32),
            used,
            wraps,
        )


def run_ant(ops, args, grid, row, col, heading, step_budget, total_food):
    """Execute ant bytecode on ``grid`` (mutated in place).

    The program restarts from the top whenever it runs off the end and stops
    when the step budget is exhausted or all food is eaten.  Returns
    ``(eaten, steps_used, row, col, heading)``.
    """
    ops = ops.tolist() if isinstance(ops, np.ndarray) else list(ops)
    args = args.tolist() if isinstance(args, np.ndarray) else list(args)
    n = len(ops)
    height, width = grid.shape
    cells = grid.ravel().tolist()
    eaten = 0
    steps = 0
    if n == 0:
        return (0, 0, row, col, heading)
    # headings: 0=N 1=E 2=S 3=W
    dr = (-1, 0, 1, 0)
    dc = (0, 1, 0, -1)
    pc = 0
    dispatches = 0
    max_dispatches = (step_budget + 2) * (n + 2)
    while steps < step_budget and eaten < total_food:
        if pc >= n:
            pc = 0
        op = ops[pc]
        if op == oc.ANT_IF_FOOD:
            fr = (row + dr[heading]) % height
            fc = (col + dc[heading]) % width
            pc = pc + 1 if cells[fr * width + fc] else args[pc]
        elif op == oc.ANT_JUMP:
            pc = args[pc]
        elif op == oc.ANT_MOVE:
            row = (row + dr[heading]) % height
            col = (col + dc[heading]) % width
            idx = row * width + col
            if cells[idx]:
                cells[idx] = 0
                eaten += 1
            steps += 1
            pc += 1
        elif op == oc.ANT_LEFT:
            heading = (heading + 3) % 4
            steps += 1
            pc += 1
        elif op == oc.ANT_RIGHT:
            heading = (heading + 1) % 4
            steps += 1
            pc += 1
        else:
            raise ValueError(f"bad ant opcode {op}")
        dispatches += 1
        if dispatches > max_dispatches:
            break
    grid[:] = np.asarray(cells, dtype=grid.dtype).reshape(height, width)
    return (eaten, steps, row, col, heading)


def eval_postfix(prog, xs):
    """Evaluate an arithmetic postfix program over every x in ``xs``."""
    xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    prog = prog.tolist() if isinstance(prog, np.ndarray) else list(prog)
    stack: list[np.ndarray] = []
    for op in prog:
        if op == oc.EXPR_PUSH_X:
            stack.append(xs)
            continue
        if len(stack) < 2:
            raise ValueError("malformed postfix program")
        b = stack.pop()
        a = stack.pop()
        if op == oc.EXPR_ADD:
            stack.append(a + b)
        elif op == oc.EXPR_SUB:
            stack.append(a - b)
        elif op == oc.EXPR_MUL:
            stack.append(a * b)
        elif op == oc.EXPR_PDIV:
            ok = np.abs(b) > oc.PDIV_EPS
            safe = np.where(ok, b, 1.0)
            stack.append(np.where(ok, a / safe, oc.PDIV_FALLBACK))
        else:
            raise ValueError(f"bad expression opcode {op}")
    if len(stack) != 1:
        raise ValueError("malformed postfix program")
    return np.array(stack[0], dtype=np.float64, copy=True)


def eval_bool_postfix(prog, inputs):
    """Evaluate a boolean postfix program on each row of ``inputs`` (n, 3)."""
    inputs = np.asarray(inputs, dtype=np.uint8)
    prog = prog.tolist() if isinstance(prog, np.ndarray) else list(prog)
    n_rows = inputs.shape[0]
    out = np.zeros(n_rows, dtype=np.uint8)
    for r in range(n_rows):
        x1, x2, x3 = (int(v) for v in inputs[r])
        stack: list[int] = []
        for op in prog:
            if op == oc.BOOL_PUSH_X1:
                stack.append(x1)
            elif op == oc.BOOL_PUSH_X2:
                stack.append(x2)
            elif op == oc.BOOL_PUSH_X3:
                stack.append(x3)
            elif op == oc.BOOL_NOT:
                if not stack:
                    raise ValueError("malformed postfix program")
                stack.append(1 - stack.pop())
            else:
                if len(stack) < 2:
                    raise ValueError("malformed postfix program")
                b = stack.pop()
                a = stack.pop()
                if op == oc.BOOL_AND:
                    stack.append(a & b)
                elif op == oc.BOOL_OR:
                    stack.append(a | b)
                elif op == oc.BOOL_NAND:
                    stack.append(1 - (a & b))
                elif op == oc.BOOL_NOR:
                    stack.append(1 - (a | b))
                else:
                    raise ValueError(f"bad boolean opcode {op}")
        if len(stack) != 1:
            raise ValueError("malformed postfix program")
        out[r] = stack[0]
    return out
