import csv

import pytest

from gramswarm.cli import main
from gramswarm.fixtures import fixture_text


@pytest.fixture()
def expr_bnf(tmp_path):
    path = tmp_path / "expr.bnf"
    path.write_text(fixture_text("expr.bnf"))
    return str(path)


@pytest.fixture()
def program_file(tmp_path):
    def write(name):
        path = tmp_path / f"{name}.txt"
        path.write_text(fixture_text(f"evolved_programs/{name}.txt"))
        return str(path)
    return write


def test_map_expr_example(expr_bnf, capsys):
    assert main(["map", "--grammar", expr_bnf, "--codons", "0,1,0,2,1,1",
                 "--wraps", "2"]) == 0
    assert capsys.readouterr().out.strip() == "( x1 * x2 )"


def test_map_two_codons(expr_bnf, capsys):
    assert main(["map", "--grammar", expr_bnf, "--codons", "1,0", "--wraps", "2"]) == 0
    assert capsys.readouterr().out.strip() == "x1"


def test_map_invalid(expr_bnf, capsys):
    assert main(["map", "--grammar", expr_bnf, "--codons", "0,0", "--wraps", "0"]) == 0
    assert capsys.readouterr().out.strip() == "INVALID"


def test_map_trace(expr_bnf, capsys):
    assert main(["map", "--grammar", expr_bnf, "--codons", "1,0", "--wraps", "0",
                 "--trace"]) == 0
    out = capsys.readouterr().out
    assert "step, nonterminal, codon, k, index" in out
    assert out.strip().endswith("x1")


def test_map_bad_grammar_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.bnf"
    bad.write_text("<s> := a | | b")
    assert main(["map", "--grammar", str(bad), "--codons", "1"]) == 2
    assert "error:" in capsys.readouterr().err


def test_map_bad_codons_exit_2(expr_bnf, capsys):
    assert main(["map", "--grammar", expr_bnf, "--codons", "1,zap"]) == 2


def test_eval_ant_reference_programs(program_file, capsys):
    assert main(["eval", "--problem", "ant", "--program-file", program_file("gmfo_ant")]) == 0
    assert capsys.readouterr().out.strip() == "0"
    assert main(["eval", "--problem", "ant", "--program-file", program_file("gwo_ant")]) == 0
    assert capsys.readouterr().out.strip() == "1"


def test_eval_regression_reference_program(program_file, capsys):
    assert main(["eval", "--problem", "regression",
                 "--program-file", program_file("gmfo_regression")]) == 0
    assert float(capsys.readouterr().out.strip()) < 1e-12


def test_eval_syntax_error_exits_2(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("if(foodahead()) move();")
    assert main(["eval", "--problem", "ant", "--program-file", str(bad)]) == 2
    assert "error:" in capsys.readouterr().err


def test_run_single_seed(tmp_path, capsys):
    out = tmp_path / "results"
    assert main(["run", "--engine", "gmfo", "--problem", "mux3", "--runs", "1",
                 "--seed", "7", "--agents", "5", "--dim", "15", "--max-fes", "75",
                 "--workers", "1", "--out", str(out)]) == 0
    text = capsys.readouterr().out
    assert "seed=7" in text
    assert "gmfo mux3:" in text
    with open(out / "runs.csv") as fh:
        rows = list(csv.reader(fh))
    assert len(rows) == 2


def test_run_unknown_engine_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["run", "--engine", "gbfo", "--problem", "mux3"])
    assert exc.value.code == 2


def test_run_with_config_file(tmp_path, capsys):
    cfg = tmp_path / "exp.cfg"
    cfg.write_text("engine=gwo\nproblem=mux3\nruns=1\nN=5\nd=15\nmax_fes=75\nseed=3\n")
    out = tmp_path / "results"
    assert main(["run", "--config", str(cfg), "--workers", "1", "--out", str(out)]) == 0
    assert "gwo mux3:" in capsys.readouterr().out


def test_run_defaults_match_benchmark_settings():
    from gramswarm.harness import ExperimentConfig
    from gramswarm.problems import build_problem

    config = ExperimentConfig(engine="gmfo", problem="ant")
    assert (config.n_agents, config.dim, config.max_fes, config.runs) == (30, 100, 30000, 30)
    # per-problem termination defaults: targets 0 / 0.01 / 0, wraps 3 / 2 / 1
    expected = {"ant": (0.0, 3), "regression": (0.01, 2), "mux3": (0.0, 1)}
    for name, (target, wraps) in expected.items():
        problem = build_problem(name, shared_cases=True)
        assert (problem.target_error, problem.default_wraps) == (target, wraps)


def test_backend_subcommand(capsys):
    assert main(["backend"]) == 0
    assert capsys.readouterr().out.strip() in ("python", "compiled")


def test_run_uses_env_output_dir(tmp_path, capsys, monkeypatch):
    out = tmp_path / "from_env"
    monkeypatch.setenv("GRAMSWARM_OUT", str(out))
    assert main(["run", "--engine", "gwo", "--problem", "mux3", "--runs", "1",
                 "--seed", "1", "--agents", "5", "--dim", "15", "--max-fes", "50",
                 "--workers", "1"]) == 0
    assert (out / "runs.csv").exists()


def test_run_with_trail_and_grammar_overrides(tmp_path, capsys):
    trail = tmp_path / "trail.txt"
    trail.write_text(fixture_text("santafe_trail.txt"))
    grammar = tmp_path / "ant.bnf"
    grammar.write_text(fixture_text("ant.bnf"))
    out = tmp_path / "results"
    assert main(["run", "--engine", "gmfo", "--problem", "ant", "--runs", "1",
                 "--seed", "2", "--agents", "5", "--dim", "20", "--max-fes", "50",
                 "--workers", "1", "--trail", str(trail), "--grammar", str(grammar),
                 "--out", str(out)]) == 0
    assert "gmfo ant:" in capsys.readouterr().out


def test_eval_with_trail_override(tmp_path, program_file, capsys):
    trail = tmp_path / "trail.txt"
    trail.write_text(fixture_text("santafe_trail.txt"))
    assert main(["eval", "--problem", "ant", "--trail", str(trail),
                 "--program-file", program_file("gwo_ant")]) == 0
    assert capsys.readouterr().out.strip() == "1"
