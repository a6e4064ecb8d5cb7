import numpy as np
import pytest

from gramswarm.errors import AntSyntaxError
from gramswarm.fixtures import evolved_program_text
from gramswarm.problems import AntProblem, AntWorld, ant_error, parse_ant_program, run_ant
from gramswarm.problems.ant import (
    EAST,
    IfFoodAhead,
    LEFT,
    MOVE,
    RIGHT,
    compile_ant_program,
    parse_trail,
)


def test_parse_single_move():
    assert parse_ant_program("move();") == (MOVE,)


def test_parse_conditional():
    program = parse_ant_program("if(foodahead()) move(); else left(); end;")
    assert program == (IfFoodAhead((MOVE,), (LEFT,)),)


def test_parse_gwo_program_structure():
    program = parse_ant_program(evolved_program_text("gwo_ant"))
    assert program == (
        IfFoodAhead((LEFT,), (RIGHT,)),
        RIGHT,
        IfFoodAhead((MOVE,), (LEFT,)),
        MOVE,
        LEFT,
    )


def test_parse_gmfo_program_is_wellformed():
    program = parse_ant_program(evolved_program_text("gmfo_ant"))
    assert len(program) == 5  # top level: if, move, left, if, right
    assert isinstance(program[0], IfFoodAhead)


@pytest.mark.parametrize(
    "text",
    [
        "if(foodahead()) move(); end;",
        "if(foodahead()) move(); else left();",
        "move(); end;",
        "else",
        "jump();",
        "if(foodahead()) else move(); end;",
    ],
)
def test_parse_errors(text):
    with pytest.raises(AntSyntaxError):
        parse_ant_program(text)


def test_trail_fixture_has_89_food():
    world = AntWorld.canonical()
    assert world.total_food == 89
    assert world.grid.shape == (32, 32)
    assert (world.row, world.col, world.heading) == (0, 0, EAST)


def test_trail_parser_rejects_bad_maps():
    with pytest.raises(ValueError):
        parse_trail("...\n...")
    with pytest.raises(ValueError):
        parse_trail("\n".join("x" * 32 for _ in range(32)))


def test_spin_in_place_eats_nothing():
    world = AntWorld.canonical()
    eaten = run_ant((LEFT,), world)
    assert eaten == 0
    assert world.steps_used == 600


def test_step_accounting():
    world = AntWorld.canonical()
    run_ant((MOVE, LEFT, RIGHT), world)
    assert world.steps_used == 600  # program loops until the budget


def test_conditionals_cost_no_steps():
    # one conditional wrapping a single move: still 600 moves happen
    world = AntWorld.canonical()
    program = parse_ant_program("if(foodahead()) move(); else move(); end;")
    run_ant(program, world)
    assert world.steps_used == 600


def test_gmfo_program_eats_all_89():
    world = AntWorld.canonical()
    program = parse_ant_program(evolved_program_text("gmfo_ant"))
    eaten = run_ant(program, world)
    assert eaten == 89
    assert world.steps_used <= 600


def test_gwo_program_eats_88():
    world = AntWorld.canonical()
    program = parse_ant_program(evolved_program_text("gwo_ant"))
    eaten = run_ant(program, world)
    assert eaten == 88


def test_ant_error_values():
    assert ant_error(evolved_program_text("gmfo_ant")) == 0
    assert ant_error(evolved_program_text("gwo_ant")) == 1
    assert ant_error("left();") == 89


def test_toroidal_wrapping():
    # moving north from row 0 lands on row 31
    grid = np.zeros((32, 32), np.uint8)
    grid[31, 0] = 1
    world = AntWorld.from_grid(grid)
    eaten = run_ant(parse_ant_program("left(); move();"), world)
    assert eaten == 1


def test_problem_error_text():
    problem = AntProblem()
    assert problem.error_text(evolved_program_text("gmfo_ant")) == 0.0
    assert problem.error_text("garbage tokens") == 89.0
    with pytest.raises(AntSyntaxError):
        problem.evaluate_text("garbage tokens")


def test_error_bounds_on_random_programs(ant_grammar):
    from gramswarm import map_genotype, random_genotype

    problem = AntProblem()
    rng = np.random.default_rng(31)
    seen = 0
    while seen < 30:
        phenotype = map_genotype(ant_grammar, random_genotype(60, rng), 3)
        if not phenotype.valid:
            continue
        seen += 1
        error = problem.error_text(phenotype.text)
        assert 0.0 <= error <= 89.0


def test_compile_if_bytecode_shape():
    program = parse_ant_program("if(foodahead()) move(); else left(); end;")
    ops, args = compile_ant_program(program)
    assert ops.tolist() == [3, 0, 4, 1]  # IF, MOVE, JMP, LEFT
    assert args[0] == 3 and args[2] == 4
