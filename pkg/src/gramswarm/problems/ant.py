"""Ant trail navigation: mini-language, simulator, and fitness oracle.

Programs are sequences over four statements: ``move();``, ``left();``,
``right();`` and ``if(foodahead()) <code> else <code> end;``.  The ant lives
on a toroidal grid, starts in the top-left corner facing east, and executes
its program in a loop (restarting from the top when it finishes) until the
step budget runs out or every food cell has been eaten.  Moves and turns
cost one time step each; the food-ahead test is free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from .. import opcodes as oc
from ..errors import AntSyntaxError
from ..fixtures import fixture_text

GRID_SIZE = 32
STEP_BUDGET = 600
NORTH, EAST, SOUTH, WEST = 0, 1, 2, 3

TOK_IF = "if(foodahead())"
TOK_ELSE = "else"
TOK_END = "end;"
TOK_MOVE = "move();"
TOK_LEFT = "left();"
TOK_RIGHT = "right();"

TRAIL_FIXTURE = "santafe_trail.txt"


@dataclass(frozen=True)
class Move:
    pass


@dataclass(frozen=True)
class Left:
    pass


@dataclass(frozen=True)
class Right:
    pass


@dataclass(frozen=True)
class IfFoodAhead:
    then_branch: tuple
    else_branch: tuple


MOVE = Move()
LEFT = Left()
RIGHT = Right()

AntProgram = tuple

_ACTIONS = {TOK_MOVE: MOVE, TOK_LEFT: LEFT, TOK_RIGHT: RIGHT}


def parse_ant_program(source) -> AntProgram:
    """Parse program text (or a token sequence) into a statement tuple."""
    tokens = source.split() if isinstance(source, str) else list(source)
    pos = 0

    def parse_block() -> tuple:
        nonlocal pos
        stmts = []
        while pos < len(tokens) and tokens[pos] not in (TOK_ELSE, TOK_END):
            stmts.append(parse_line())
        if not stmts:
            raise AntSyntaxError("empty statement block")
        return tuple(stmts)

    def parse_line():
        nonlocal pos
        tok = tokens[pos]
        if tok == TOK_IF:
            pos += 1
            then_branch = parse_block()
            expect(TOK_ELSE)
            else_branch = parse_block()
            expect(TOK_END)
            return IfFoodAhead(then_branch, else_branch)
        action = _ACTIONS.get(tok)
        if action is None:
            raise AntSyntaxError(f"unknown token {tok!r}")
        pos += 1
        return action

    def expect(tok):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            found = tokens[pos] if pos < len(tokens) else "<end>"
            raise AntSyntaxError(f"expected {tok!r}, found {found!r}")
        pos += 1

    program = parse_block()
    if pos != len(tokens):
        raise AntSyntaxError(f"unbalanced {tokens[pos]!r} at top level")
    return program


def compile_ant_program(program: AntProgram):
    """Flatten a statement tuple into (ops, args) bytecode arrays."""
    ops: list[int] = []
    args: list[int] = []

    def emit(op, arg=0) -> int:
        ops.append(op)
        args.append(arg)
        return len(ops) - 1

    def emit_block(stmts):
        for stmt in stmts:
            if isinstance(stmt, IfFoodAhead):
                jump_false = emit(oc.ANT_IF_FOOD)
                emit_block(stmt.then_branch)
                jump_end = emit(oc.ANT_JUMP)
                args[jump_false] = len(ops)
                emit_block(stmt.else_branch)
                args[jump_end] = len(ops)
            elif isinstance(stmt, Move):
                emit(oc.ANT_MOVE)
            elif isinstance(stmt, Left):
                emit(oc.ANT_LEFT)
            elif isinstance(stmt, Right):
                emit(oc.ANT_RIGHT)
            else:
                raise TypeError(f"not an ant statement: {stmt!r}")

    emit_block(program)
    return np.asarray(ops, dtype=np.int32), np.asarray(args, dtype=np.int32)


def parse_trail(text: str) -> np.ndarray:
    """Parse a trail map: GRID_SIZE lines of '.' (empty) and '#' (food)."""
    lines = [ln for ln in (raw.rstrip("\n") for raw in text.splitlines()) if ln.strip()]
    if len(lines) != GRID_SIZE:
        raise ValueError(f"trail must have {GRID_SIZE} rows, found {len(lines)}")
    grid = np.zeros((GRID_SIZE, GRID_SIZE), dtype=np.uint8)
    for r, line in enumerate(lines):
        if len(line) != GRID_SIZE:
            raise ValueError(f"trail row {r} has {len(line)} columns, expected {GRID_SIZE}")
        for c, ch in enumerate(line):
            if ch == "#":
                grid[r, c] = 1
            elif ch != ".":
                raise ValueError(f"bad trail character {ch!r} at row {r}, column {c}")
    return grid


@dataclass
class AntWorld:
    """Per-evaluation scratch state: food grid plus the ant's pose and counters."""

    grid: np.ndarray
    total_food: int
    row: int = 0
    col: int = 0
    heading: int = EAST
    eaten: int = 0
    steps_used: int = 0
    step_budget: int = STEP_BUDGET

    @classmethod
    def from_grid(cls, grid: np.ndarray, step_budget: int = STEP_BUDGET) -> "AntWorld":
        grid = np.array(grid, dtype=np.uint8, copy=True)
        return cls(grid=grid, total_food=int(grid.sum()), step_budget=step_budget)

    @classmethod
    def canonical(cls, step_budget: int = STEP_BUDGET) -> "AntWorld":
        return cls.from_grid(_canonical_grid(), step_budget=step_budget)


_CANONICAL_GRID: np.ndarray | None = None


def _canonical_grid() -> np.ndarray:
    global _CANONICAL_GRID
    if _CANONICAL_GRID is None:
        _CANONICAL_GRID = parse_trail(fixture_text(TRAIL_FIXTURE))
    return _CANONICAL_GRID


def run_ant(program: AntProgram, world: AntWorld) -> int:
    """Execute ``program`` on a freshly reset world; returns food eaten."""
    ops, args = compile_ant_program(program)
    eaten, steps, row, col, heading = kernels.run_ant(
        ops, args, world.grid, world.row, world.col, world.heading,
        world.step_budget, world.total_food,
    )
    world.eaten += eaten
    world.steps_used += steps
    world.row, world.col, world.heading = row, col, heading
    return world.eaten


class AntProblem:
    """Fitness oracle: error = food remaining after a budgeted run."""

    name = "ant"
    target_error = 0.0
    default_wraps = 3
    grammar_fixture = "ant.bnf"

    def __init__(self, trail_text: str | None = None, step_budget: int = STEP_BUDGET):
        self._grid = parse_trail(trail_text) if trail_text is not None else _canonical_grid()
        self.total_food = int(self._grid.sum())
        self.step_budget = step_budget

    @property
    def worst_error(self) -> float:
        return float(self.total_food)

    def fresh_world(self) -> AntWorld:
        return AntWorld.from_grid(self._grid, step_budget=self.step_budget)

    def evaluate_text(self, text: str) -> float:
        """Error for a program text; raises AntSyntaxError on bad syntax."""
        program = parse_ant_program(text)
        world = self.fresh_world()
        eaten = run_ant(program, world)
        return float(self.total_food - eaten)

    def error_text(self, text: str) -> float:
        """Total version of :meth:`evaluate_text`: syntax errors score worst."""
        try:
            return self.evaluate_text(text)
        except AntSyntaxError:
            return self.worst_error


def ant_error(program) -> int:
    """Food left uneaten by ``program`` (text or statement tuple) on the canonical trail."""
    if isinstance(program, str):
        program = parse_ant_program(program)
    world = AntWorld.canonical()
    eaten = run_ant(program, world)
    return world.total_food - eaten
