import numpy as np
import pytest

from gramswarm.errors import ExprSyntaxError
from gramswarm.fixtures import evolved_program_text
from gramswarm.problems import RegressionProblem, eval_expression, regression_error
from gramswarm.problems.regression import compile_expression, target_function, tokenize_expression


def test_eval_identity():
    assert eval_expression("x", 0.5) == 0.5


def test_protected_division_at_zero():
    assert eval_expression("pdivide(x,x)", 0.0) == 1.0
    assert eval_expression("pdivide(x,x)", 0.3) == pytest.approx(1.0)


def test_eval_arithmetic():
    assert eval_expression("plus(x,times(x,x))", 2.0) == 6.0
    assert eval_expression("minus(x,x)", 0.7) == 0.0


def test_tokenizer_accepts_both_spacings():
    dense = tokenize_expression("plus(times(x,x),x)")
    spaced = tokenize_expression("plus ( times ( x , x ) , x )")
    assert dense == spaced


def test_tokenizer_rejects_junk():
    with pytest.raises(ExprSyntaxError):
        tokenize_expression("plus(x,x) + 1")


@pytest.mark.parametrize("text", ["", "plus(x)", "plus(x,x", "plus(x,x))", "x x", "log(x,x)"])
def test_compile_errors(text):
    with pytest.raises(ExprSyntaxError):
        compile_expression(text)


def test_gmfo_program_is_algebraically_exact():
    # the reference program simplifies to x + x^2 + x^3 + x^4 exactly
    text = evolved_program_text("gmfo_regression")
    rng = np.random.default_rng(12)
    xs = rng.uniform(-1, 1, 1000)
    for x in xs:
        expected = x + x**2 + x**3 + x**4
        assert abs(eval_expression(text, float(x)) - expected) < 1e-12


def test_reference_programs_reach_near_zero_error():
    problem = RegressionProblem.shared()
    for name in ("gmfo_regression", "gwo_regression"):
        error = problem.evaluate_text(evolved_program_text(name))
        assert error < 1e-12


def test_identity_error_matches_independent_summation():
    problem = RegressionProblem.shared()
    # independent oracle: direct numpy summation of |x - f(x)|
    expected = float(np.abs(problem.xs - target_function(problem.xs)).sum())
    assert regression_error("x", problem) == pytest.approx(expected, rel=0, abs=1e-12)


def test_case_generation_contract():
    rng = np.random.default_rng(5)
    problem = RegressionProblem.sample(rng)
    assert problem.xs.shape == (100,)
    assert np.abs(problem.xs).max() <= 1.0
    assert np.array_equal(problem.ys, target_function(problem.xs))


def test_shared_cases_are_stable():
    a = RegressionProblem.shared()
    b = RegressionProblem.shared()
    assert np.array_equal(a.xs, b.xs)


def test_error_text_total_on_syntax_error():
    problem = RegressionProblem.shared()
    assert problem.error_text("plus(x") == problem.worst_error
    with pytest.raises(ExprSyntaxError):
        problem.evaluate_text("plus(x")


def test_error_nonnegative_on_random_phenotypes(regression_grammar):
    from gramswarm import map_genotype, random_genotype

    problem = RegressionProblem.shared()
    rng = np.random.default_rng(77)
    seen = 0
    while seen < 30:
        phenotype = map_genotype(regression_grammar, random_genotype(50, rng), 2)
        if not phenotype.valid:
            continue
        seen += 1
        assert problem.error_text(phenotype.text) >= 0.0


def test_rejects_out_of_range_cases():
    with pytest.raises(ValueError):
        RegressionProblem([0.0, 2.0])
