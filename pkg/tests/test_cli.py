import json
import shutil
import subprocess
import sys

import pytest
from click.testing import CliRunner

from involute.cli import EXIT_BUDGET, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK, main, render
from involute.corpus import corpus_dir
from involute.counting import AnalysisReport

from conftest import CORPUS, CORPUS_NAMES, WAVE, corpus_run


def invoke(*args):
    return CliRunner().invoke(main, list(args))


def path(name):
    return str(CORPUS[name].path)


def test_analyze_maxwell():
    result = invoke("analyze", path("maxwell"))
    assert result.exit_code == EXIT_OK
    lines = dict(line.split(None, 1) for line in result.output.splitlines() if line.startswith(("beta", "alpha ")))
    assert lines["beta"].strip() == "0 0 1 3"
    assert "degrees of freedom  2" in result.output
    assert "16 + 12 r + 2 r^2" in result.output


def test_analyze_detuned_fierz_pauli():
    result = invoke("analyze", path("fp_detuned"))
    assert result.exit_code == EXIT_OK
    assert "degrees of freedom  10" in result.output
    assert "compatible          yes" in result.output
    assert "none (beta^(n-1) = 0)" in result.output


def test_proca_trace_has_two_projections():
    result = invoke("analyze", path("proca"), "--trace")
    assert result.exit_code == EXIT_OK
    assert result.output.count("  project ") == 2
    assert "dim 56->55" in result.output and "dim 55->51" in result.output


def test_json_round_trip():
    result = invoke("analyze", path("2form_stueckelberg"), "--json", "--trace", "--oracle-orders", "1")
    assert result.exit_code == EXIT_OK
    report = AnalysisReport.from_json(result.output)
    assert report.to_json() == result.output.rstrip("\n")
    data = json.loads(result.output)
    assert data["H_bar"] == ["20", "17", "3", "0"] and data["dof"] == "3"
    assert data["oracle"]["agrees"] and data["trace"]["s"] == data["s"] == CORPUS["2form_stueckelberg"].expected["s"]


def test_render_lists_every_table_row():
    text = render(corpus_run("gr_normal").report)
    for label in ("beta", "alpha", "H(r)", "H_bar(r)", "alpha_bar", "degrees of freedom"):
        assert label in text
    assert "alpha_bar" not in render(corpus_run("wave").report)


def test_unreadable_file_exits_2(tmp_path):
    result = invoke("analyze", str(tmp_path / "missing.pde"))
    assert result.exit_code == EXIT_INPUT
    assert "cannot read" in result.output


def test_parse_error_exits_2_with_location(tmp_path):
    bad = tmp_path / "bad.pde"
    bad.write_text(CORPUS["wave"].text().replace("= 0;", "= 1;", 1))
    result = invoke("analyze", str(bad))
    assert result.exit_code == EXIT_INPUT
    assert "bad.pde:" in result.output and "right-hand side must be 0" in result.output


def test_budget_exits_3():
    result = invoke("analyze", path("fp_massive"), "--max-steps", "3")
    assert result.exit_code == EXIT_BUDGET
    assert "within budget" in result.output


def test_incompatible_system_still_exits_0(tmp_path):
    free = tmp_path / "free.pde"
    free.write_text("system free { coordinates x y z t; fields u, v; eq: d(t,t)u - d(x,x)u = 0; }")
    result = invoke("analyze", str(free))
    assert result.exit_code == EXIT_OK
    assert "compatible          NO" in result.output


def test_param_override_and_recheck():
    normal = invoke("analyze", path("proca"), "--recheck-param")
    assert normal.exit_code == EXIT_OK and "parameter-special   no" in normal.output
    massless = invoke("analyze", path("proca"), "--param", "m=0", "--recheck-param")
    assert massless.exit_code == EXIT_OK
    assert "parameter-special   YES" in massless.output
    assert "projections s       0" in massless.output


@pytest.mark.parametrize("arg", ["m", "m=x", "=3", "m=1/0"])
def test_bad_param_is_a_usage_error(arg):
    assert invoke("analyze", path("proca"), "--param", arg).exit_code == EXIT_INPUT


def test_unknown_param_exits_2():
    result = invoke("analyze", path("wave"), "--param", "k=1")
    assert result.exit_code == EXIT_INPUT and "undeclared parameter" in result.output


def test_corpus_list():
    result = invoke("corpus", "list")
    assert result.exit_code == EXIT_OK
    assert result.output.split() == CORPUS_NAMES
    assert len(CORPUS_NAMES) == 14


def test_corpus_run_passes():
    result = invoke("corpus", "run")
    assert result.exit_code == EXIT_OK
    assert result.output.strip().endswith("14/14 pass")


def test_corpus_mismatch_exits_1_with_field_diff(tmp_path):
    for name in ("wave", "maxwell"):
        shutil.copy(CORPUS[name].path, tmp_path)
    maxwell = tmp_path / "maxwell.pde"
    maxwell.write_text(maxwell.read_text().replace("#@ dof = 2", "#@ dof = 3"))
    result = invoke("corpus", "run", "--dir", str(tmp_path))
    assert result.exit_code == EXIT_MISMATCH
    assert "maxwell: FAIL" in result.output and "dof: expected 3, got 2" in result.output
    assert "wave: pass" in result.output and "1/2 pass" in result.output


def test_corrupted_corpus_file_exits_2(tmp_path):
    shutil.copy(CORPUS["wave"].path, tmp_path)
    (tmp_path / "broken.pde").write_text("system broken { coordinates x; fields u; eq: d(x)u = ")
    result = invoke("corpus", "run", "--dir", str(tmp_path))
    assert result.exit_code == EXIT_INPUT
    assert "broken: ERROR" in result.output


def test_corpus_budget_exits_3():
    result = invoke("corpus", "run", "--max-steps", "2")
    assert result.exit_code == EXIT_BUDGET


def test_installed_entry_point(tmp_path):
    wave = tmp_path / "wave.pde"
    wave.write_text(WAVE)
    done = subprocess.run(
        [sys.executable, "-m", "involute.cli", "analyze", str(wave), "--json"], capture_output=True, text=True
    )
    assert done.returncode == EXIT_OK
    data = json.loads(done.stdout)
    assert (data["Z0"], data["Z1"]) == ("0", "6")


def test_corpus_ships_with_package():
    assert sorted(p.stem for p in corpus_dir().glob("*.pde")) == CORPUS_NAMES
