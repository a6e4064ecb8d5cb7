import pytest

from gramswarm import parse_bnf
from gramswarm.fixtures import fixture_text

EXPR_GRAMMAR_TEXT = """\
1. <expr> := (<expr><op><expr>) (0) | <var> (1)
2. <op> :=  + (0) | - (1) | * (2) | / (3)
3. <var> := x1 (0) | x2 (1)
"""


@pytest.fixture(scope="session")
def expr_grammar():
    return parse_bnf(EXPR_GRAMMAR_TEXT)


@pytest.fixture(scope="session")
def ant_grammar():
    return parse_bnf(fixture_text("ant.bnf"))


@pytest.fixture(scope="session")
def regression_grammar():
    return parse_bnf(fixture_text("regression.bnf"))


@pytest.fixture(scope="session")
def mux_grammar():
    return parse_bnf(fixture_text("mux3.bnf"))
