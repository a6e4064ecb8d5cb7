# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend.

Mirrors gramswarm._kernels_py exactly: same entry points, same numerical
behaviour, same opcode encodings (kept in sync with gramswarm.opcodes by the
parity tests).
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "compiled"

# opcode mirrors (see gramswarm/opcodes.py)
cdef enum:
    DERIVE_VALID = 0
    DERIVE_INVALID = 1
    DERIVE_RUNAWAY = 2
    ANT_MOVE = 0
    ANT_LEFT = 1
    ANT_RIGHT = 2
    ANT_IF_FOOD = 3
    ANT_JUMP = 4
    EXPR_PUSH_X = 0
    EXPR_ADD = 1
    EXPR_SUB = 2
    EXPR_MUL = 3
    EXPR_PDIV = 4
    BOOL_PUSH_X1 = 0
    BOOL_PUSH_X2 = 1
    BOOL_PUSH_X3 = 2
    BOOL_AND = 3
    BOOL_OR = 4
    BOOL_NAND = 5
    BOOL_NOR = 6
    BOOL_NOT = 7

cdef double PDIV_EPS = 1e-12
cdef double PDIV_FALLBACK = 1.0


cdef class Deriver:
    """Leftmost MOD-rule derivation over flattened grammar tables."""

    cdef cnp.int32_t[::1] num_prods
    cdef cnp.int32_t[::1] prod_start
    cdef cnp.int32_t[::1] sym_start
    cdef cnp.int32_t[::1] sym_len
    cdef cnp.int32_t[::1] syms
    cdef int start_code
    cdef int wrap_limit
    cdef bint skip_unit
    cdef int max_prod_len
    cdef cnp.int32_t[::1] stack
    cdef cnp.int32_t[::1] terms
    cdef cnp.int32_t[::1] choices
    cdef int cap

    def __init__(self, tables, int wrap_limit, bint skip_unit_rules=False):
        if wrap_limit < 0:
            raise ValueError("wrap_limit must be >= 0")
        self.num_prods = np.ascontiguousarray(tables.nt_num_prods, dtype=np.int32)
        self.prod_start = np.ascontiguousarray(tables.nt_prod_start, dtype=np.int32)
        self.sym_start = np.ascontiguousarray(tables.prod_sym_start, dtype=np.int32)
        self.sym_len = np.ascontiguousarray(tables.prod_sym_len, dtype=np.int32)
        self.syms = np.ascontiguousarray(tables.syms, dtype=np.int32)
        self.start_code = -(tables.start_id + 1)
        self.wrap_limit = wrap_limit
        self.skip_unit = skip_unit_rules
        self.max_prod_len = max(1, tables.max_prod_len)
        self.cap = 0

    cdef void _ensure_capacity(self, int d):
        cdef long budget = <long> d * (self.wrap_limit + 1) + 1
        cdef long max_exp = budget if not self.skip_unit else 64 + 8 * budget
        cdef long need = (max_exp + 1) * self.max_prod_len + 4
        if need > self.cap:
            self.stack = np.empty(need, dtype=np.int32)
            self.terms = np.empty(need, dtype=np.int32)
            self.choices = np.empty(max_exp + 4, dtype=np.int32)
            self.cap = <int> need

    def derive(self, codons):
        cdef cnp.int32_t[::1] cods = np.ascontiguousarray(codons, dtype=np.int32)
        cdef int d = cods.shape[0]
        self._ensure_capacity(d)

        cdef long budget = <long> d * (self.wrap_limit + 1) + 1
        cdef long max_exp = budget if not self.skip_unit else 64 + 8 * budget

        cdef cnp.int32_t[::1] stack = self.stack
        cdef cnp.int32_t[::1] terms = self.terms
        cdef cnp.int32_t[::1] choices = self.choices

        cdef int sp = 0, n_terms = 0, n_choices = 0
        cdef int cursor = 0, wraps = 0, used = 0
        cdef long expansions = 0
        cdef int code, nt, k, choice, p, s0, slen, j

        stack[sp] = self.start_code
        sp += 1
        while sp > 0:
            sp -= 1
            code = stack[sp]
            if code >= 0:
                terms[n_terms] = code
                n_terms += 1
                continue
            nt = -code - 1
            expansions += 1
            if expansions > max_exp:
                return (DERIVE_RUNAWAY, None, None, used, wraps)
            k = self.num_prods[nt]
            if self.skip_unit and k == 1:
                choice = 0
            else:
                if cursor >= d:
                    if d == 0 or wraps >= self.wrap_limit:
                        return (DERIVE_INVALID, None, None, used, wraps)
                    wraps += 1
                    cursor = 0
                choice = cods[cursor] % k
                cursor += 1
                used += 1
            choices[n_choices] = choice
            n_choices += 1
            p = self.prod_start[nt] + choice
            s0 = self.sym_start[p]
            slen = self.sym_len[p]
            for j in range(slen - 1, -1, -1):
                stack[sp] = self.syms[s0 + j]
                sp += 1
        return (
            DERIVE_VALID,
            np.asarray(terms[:n_terms]).copy(),
            np.asarray(choices[:n_choices]).copy(),
            used,
            wraps,
        )


def run_ant(ops, args, grid, int row, int col, int heading, int step_budget,
            int total_food):
    """Execute ant bytecode on ``grid`` (mutated in place)."""
    cdef cnp.int32_t[::1] ops_v = np.ascontiguousarray(ops, dtype=np.int32)
    cdef cnp.int32_t[::1] args_v = np.ascontiguousarray(args, dtype=np.int32)
    cdef cnp.uint8_t[:, ::1] cells = grid
    cdef int n = ops_v.shape[0]
    cdef int height = cells.shape[0]
    cdef int width = cells.shape[1]
    cdef int eaten = 0, steps = 0, pc = 0
    cdef long dispatches = 0
    cdef long max_dispatches = (<long> step_budget + 2) * (n + 2)
    cdef int op, fr, fc
    cdef int * dr = [-1, 0, 1, 0]
    cdef int * dc = [0, 1, 0, -1]
    if n == 0:
        return (0, 0, row, col, heading)
    while steps < step_budget and eaten < total_food:
        if pc >= n:
            pc = 0
        op = ops_v[pc]
        if op == ANT_IF_FOOD:
            fr = (row + dr[heading]) % height
            if fr < 0:
                fr += height
            fc = (col + dc[heading]) % width
            if fc < 0:
                fc += width
            pc = pc + 1 if cells[fr, fc] else args_v[pc]
        elif op == ANT_JUMP:
            pc = args_v[pc]
        elif op == ANT_MOVE:
            row = (row + dr[heading]) % height
            if row < 0:
                row += height
            col = (col + dc[heading]) % width
            if col < 0:
                col += width
            if cells[row, col]:
                cells[row, col] = 0
                eaten += 1
            steps += 1
            pc += 1
        elif op == ANT_LEFT:
            heading = (heading + 3) % 4
            steps += 1
            pc += 1
        elif op == ANT_RIGHT:
            heading = (heading + 1) % 4
            steps += 1
            pc += 1
        else:
            raise ValueError(f"bad ant opcode {op}")
        dispatches += 1
        if dispatches > max_dispatches:
            break
    return (eaten, steps, row, col, heading)


def eval_postfix(prog, xs):
    """Evaluate an arithmetic postfix program over every x in ``xs``."""
    xs_arr = np.atleast_1d(np.asarray(xs, dtype=np.float64))
    cdef cnp.float64_t[::1] xv = np.ascontiguousarray(xs_arr)
    cdef cnp.int32_t[::1] pv = np.ascontiguousarray(prog, dtype=np.int32)
    cdef int n_ops = pv.shape[0]
    cdef int n_x = xv.shape[0]
    out_arr = np.empty(n_x, dtype=np.float64)
    cdef cnp.float64_t[::1] out = out_arr
    stack_arr = np.empty(n_ops + 1, dtype=np.float64)
    cdef cnp.float64_t[::1] stack = stack_arr
    cdef int i, j, sp, op
    cdef double a, b, x
    for i in range(n_x):
        x = xv[i]
        sp = 0
        for j in range(n_ops):
            op = pv[j]
            if op == EXPR_PUSH_X:
                stack[sp] = x
                sp += 1
                continue
            if sp < 2:
                raise ValueError("malformed postfix program")
            b = stack[sp - 1]
            a = stack[sp - 2]
            sp -= 1
            if op == EXPR_ADD:
                stack[sp - 1] = a + b
            elif op == EXPR_SUB:
                stack[sp - 1] = a - b
            elif op == EXPR_MUL:
                stack[sp - 1] = a * b
            elif op == EXPR_PDIV:
                stack[sp - 1] = a / b if (b > PDIV_EPS or b < -PDIV_EPS) else PDIV_FALLBACK
            else:
                raise ValueError(f"bad expression opcode {op}")
        if sp != 1:
            raise ValueError("malformed postfix program")
        out[i] = stack[0]
    return out_arr


def eval_bool_postfix(prog, inputs):
    """Evaluate a boolean postfix program on each row of ``inputs`` (n, 3)."""
    in_arr = np.ascontiguousarray(inputs, dtype=np.uint8)
    cdef cnp.uint8_t[:, ::1] rows = in_arr
    cdef cnp.int32_t[::1] pv = np.ascontiguousarray(prog, dtype=np.int32)
    cdef int n_ops = pv.shape[0]
    cdef int n_rows = rows.shape[0]
    out_arr = np.zeros(n_rows, dtype=np.uint8)
    cdef cnp.uint8_t[::1] out = out_arr
    stack_arr = np.empty(n_ops + 1, dtype=np.uint8)
    cdef cnp.uint8_t[::1] stack = stack_arr
    cdef int r, j, sp, op
    cdef cnp.uint8_t a, b
    for r in range(n_rows):
        sp = 0
        for j in range(n_ops):
            op = pv[j]
            if op == BOOL_PUSH_X1:
                stack[sp] = rows[r, 0]
                sp += 1
            elif op == BOOL_PUSH_X2:
                stack[sp] = rows[r, 1]
                sp += 1
            elif op == BOOL_PUSH_X3:
                stack[sp] = rows[r, 2]
                sp += 1
            elif op == BOOL_NOT:
                if sp < 1:
                    raise ValueError("malformed postfix program")
                stack[sp - 1] = 1 - stack[sp - 1]
            else:
                if sp < 2:
                    raise ValueError("malformed postfix program")
                b = stack[sp - 1]
                a = stack[sp - 2]
                sp -= 1
                if op == BOOL_AND:
                    stack[sp - 1] = a & b
                elif op == BOOL_OR:
                    stack[sp - 1] = a | b
                elif op == BOOL_NAND:
                    stack[sp - 1] = 1 - (a & b)
                elif op == BOOL_NOR:
                    stack[sp - 1] = 1 - (a | b)
                else:
                    raise ValueError(f"bad boolean opcode {op}")
        if sp != 1:
            raise ValueError("malformed postfix program")
        out[r] = stack[0]
    return out_arr
