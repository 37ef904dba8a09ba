import os

import pytest

from src.reports import verify_digest
from workbench import EXIT_DIVERGES, EXIT_OK, EXIT_USAGE, run

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
CORPUS = os.path.join(ROOT, "corpus")
CONFIG = os.path.join(ROOT, "config.yaml")


def corpus(name):
    return os.path.join(CORPUS, name)


def invoke(*argv):
    return run(list(argv) + ["--config", CONFIG, "--silent", "--log-level", "ERROR"])


def test_unknown_command():
    code, text = run(["frobnicate"])
    assert code == EXIT_USAGE
    assert text == ""


def test_check_prop42_passes():
    code, text = invoke("check", "prop42", "--trials", "30", "--seed", "7",
                        "--ring", "z2", "--n", "1", "--m", "2")
    assert code == EXIT_OK
    assert "verdict: PASS" in text
    assert "params.n: 1" in text
    assert verify_digest(text)


def test_reports_are_byte_identical_across_runs():
    argv = ("check", "jacobi-mod2", "--trials", "15", "--seed", "3")
    assert invoke(*argv) == invoke(*argv)


def test_assoc_divergence_is_reported(tmp_path):
    config = tmp_path / "config.yaml"
    config.write_text("max_grading: 1\n")
    code, text = run(["check", "assoc", "--family", "general", "--ring", "z",
                      "--trials", "100", "--seed", "1", "--config", str(config),
                      "--silent", "--log-level", "ERROR"])
    assert code == EXIT_DIVERGES
    assert "verdict: DIVERGES-FROM-PAPER" in text
    assert "minimized.diff:" in text


def test_eval_lift():
    code, text = invoke("eval", corpus("single_mark.txt"), "--op", "lift")
    assert code == EXIT_OK
    assert "result: gen(a, deg=3, copies=1, marks=[" in text
    assert "g=2" in text


def test_eval_product_of_two_files():
    code, text = invoke("eval", corpus("single_mark.txt"), corpus("two_copies.txt"),
                        "--op", "product")
    assert code == EXIT_OK
    assert "terms: 1" in text


def test_eval_binary_op_needs_two_files():
    code, _ = invoke("eval", corpus("single_mark.txt"), "--op", "bracket")
    assert code == EXIT_USAGE


def test_unreadable_file():
    code, _ = invoke("eval", corpus("does_not_exist.txt"), "--op", "lift")
    assert code == EXIT_USAGE


def test_syntax_error_is_a_usage_error(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("gen(a, deg=2, copies=1, marks=[{g=0;(0,p)}])")
    code, _ = invoke("eval", str(bad), "--op", "proj")
    assert code == EXIT_USAGE


def test_export_dot():
    code, text = invoke("export-dot", corpus("two_copies.txt"))
    assert code == EXIT_OK
    assert text.startswith("digraph garland {")
    assert text.count("->") == 2


def test_export_dot_output_file(tmp_path):
    target = tmp_path / "out" / "shape.dot"
    code, text = invoke("export-dot", corpus("chain.txt"), "--output", str(target))
    assert code == EXIT_OK
    assert target.read_text() == text


def test_signs_search_untested():
    code, text = invoke("signs", "search", "--degree", "1", "--trials", "0", "--seed", "1")
    assert code == EXIT_OK
    assert "status: untested" in text
    assert "survivors: 65536" in text


def test_signs_search_rejects_degree_three():
    code, _ = invoke("signs", "search", "--degree", "3", "--trials", "1")
    assert code == EXIT_USAGE


def test_preset_and_explicit_flags():
    _, text = invoke("check", "comm", "--trials", "2", "--seed", "0",
                     "--preset", "chas-sullivan")
    assert "params.n: 1" in text
    _, text = invoke("check", "comm", "--trials", "2", "--seed", "0",
                     "--preset", "chas-sullivan", "--n", "3")
    assert "params.n: 3" in text


def test_seed_from_environment(monkeypatch):
    monkeypatch.setenv("GARLAND_SEED", "42")
    _, text = invoke("check", "comm", "--trials", "2")
    assert "seed: 42" in text
    _, text = invoke("check", "comm", "--trials", "2", "--seed", "5")
    assert "seed: 5" in text


def test_boundary_flag_and_open_expectation():
    code, text = invoke("check", "bv-probe", "--trials", "5", "--seed", "2", "--boundary")
    assert code == EXIT_OK
    assert "params.boundary: true" in text
    assert "expectation: open" in text


@pytest.mark.parametrize("argv", [["check"], ["bv"], ["signs"], ["eval", "x.txt"],
                                  ["check", "prop42", "--ring", "q"]])
def test_usage_errors(argv):
    code, _ = run(argv)
    assert code == EXIT_USAGE


def test_selftest():
    code, text = invoke("selftest", "--seed", "4")
    assert code == EXIT_OK
    assert "verdict: PASS" in text
    assert "bv.antisymmetry: 16/16 without relations" in text


def result_line(text):
    return next(line for line in text.splitlines() if line.startswith("result: "))[8:]


def test_lift_then_proj_across_files(tmp_path):
    _, text = invoke("eval", corpus("graded_two.txt"), "--op", "lift", "--ring", "z")
    assert result_line(text) != "0"
    lifted = tmp_path / "lifted.txt"
    lifted.write_text(result_line(text))
    code, text = invoke("eval", str(lifted), "--op", "proj", "--boundary", "--ring", "z")
    assert code == EXIT_OK
    assert result_line(text) == "0"


def test_explicit_zero_degree_is_not_replaced():
    code, _ = invoke("signs", "search", "--degree", "0", "--trials", "0")
    assert code == EXIT_USAGE


def test_no_boundary_overrides_config(tmp_path):
    config = tmp_path / "config.yaml"
    config.write_text("p_is_boundary: true\n")
    code, text = run(["check", "comm", "--trials", "2", "--seed", "0", "--config", str(config),
                      "--silent", "--no-boundary"])
    assert code in (EXIT_OK, EXIT_DIVERGES)
    assert "params.boundary: false" in text
    _, text = run(["check", "comm", "--trials", "2", "--seed", "0", "--config", str(config),
                   "--silent"])
    assert "params.boundary: true" in text


def test_m_component_brackets_are_flagged(tmp_path):
    config = tmp_path / "config.yaml"
    config.write_text("max_copies: 0\n")
    code, text = run(["check", "prop42", "--trials", "5", "--seed", "0", "--config", str(config),
                      "--silent"])
    assert code == EXIT_DIVERGES
    assert "m_component_brackets: 5" in text
    assert "note: brackets with an M-component factor were evaluated as 0" in text
