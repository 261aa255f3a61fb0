import csv

import pytest
from click.testing import CliRunner

from fluxlim.cli import cli

BASE = """\
cost:
  c: 1.0
potential: "quadratic:1"
grid:
  x_min: -4.0
  x_max: 4.0
  n_cells: 80
initial: "gaussian(0.5,0.8)"
run:
  t_end: 0.1
"""


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, tmp_path, command, text, *extra):
    path = tmp_path / "experiment.yaml"
    path.write_text(text)
    args = ["--output-dir", str(tmp_path / "out"), *extra, command, str(path)]
    return runner.invoke(cli, args, obj={})


def test_solve(runner, tmp_path):
    result = invoke(runner, tmp_path, "solve", BASE + "checks:\n  - conservation\n  - lyapunov\n")
    assert result.exit_code == 0, result.output
    assert "Final L1 distance to Gibbs" in result.output
    assert "Pass=2" in result.output
    assert (tmp_path / "out" / "report.json").exists()
    assert (tmp_path / "out" / "snapshot_0.1.csv").exists()


def test_solve_rejects_jko_config(runner, tmp_path):
    text = BASE + "integrator: jko\njko:\n  h: 0.02\n  n_steps: 2\n  quantiles: 40\n"
    result = invoke(runner, tmp_path, "solve", text)
    assert result.exit_code == 1
    assert "fluxlim jko" in result.output


def test_config_errors_exit_one(runner, tmp_path):
    result = invoke(runner, tmp_path, "solve", BASE + "  cfl_number: 0.3\n")
    assert result.exit_code == 1
    assert "unknown key 'run.cfl_number'" in result.output
    assert "line 11" in result.output


def test_failed_check_exits_two(runner, tmp_path):
    text = BASE + "checks:\n  - name: stationary\n    params: {field: initial}\n"
    result = invoke(runner, tmp_path, "verify", text)
    assert result.exit_code == 2
    assert "Fail=1" in result.output


def test_hypothesis_not_met_is_strict_only(runner, tmp_path):
    text = BASE + "checks:\n  - propagation\n"
    relaxed = invoke(runner, tmp_path, "verify", text)
    assert relaxed.exit_code == 0, relaxed.output
    assert "HypothesisNotMet=1" in relaxed.output
    strict = invoke(runner, tmp_path, "verify", text, "--strict-hypotheses")
    assert strict.exit_code == 3


def test_verify_needs_checks(runner, tmp_path):
    result = invoke(runner, tmp_path, "verify", BASE)
    assert result.exit_code == 1
    assert "nothing to verify" in result.output


def test_verify_prints_lq_refinement(runner, tmp_path):
    text = BASE + "checks:\n  - name: lq_identity\n    params: {resolutions: [200, 400]}\n"
    result = invoke(runner, tmp_path, "verify", text)
    assert result.exit_code in (0, 2), result.output
    assert "lq_identity: n=[200, 400]" in result.output


def test_jko_command(runner, tmp_path):
    text = BASE + "integrator: jko\njko:\n  h: 0.02\n  n_steps: 3\n  quantiles: 60\nchecks:\n  - lyapunov\n"
    result = invoke(runner, tmp_path, "jko", text)
    assert result.exit_code == 0, result.output
    assert "L1 distance to matched fv run" in result.output


def test_newton_failure_exits_four(runner, tmp_path):
    text = BASE + ("integrator: jko\njko:\n  h: 0.02\n  n_steps: 3\n  quantiles: 60\n"
                   "  newton_tol: 1.0e-14\n  max_newton_iters: 1\n")
    result = invoke(runner, tmp_path, "jko", text)
    assert result.exit_code == 4
    assert "Newton failure at step 1" in result.output


def test_sweep(runner, tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(BASE + "checks:\n  - conservation\n")
    result = runner.invoke(cli, ["--output-dir", str(tmp_path / "sweep"), "sweep", str(path),
                                 "--param", "cost.c=1,10", "--param", "run.flux_mode=separate,combined"],
                           obj={})
    assert result.exit_code == 0, result.output
    assert "point_003" in result.output
    with open(tmp_path / "sweep" / "sweep_summary.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == 4
    assert {row["verdict"] for row in rows} == {"Pass"}


def test_sweep_rejects_bad_axis(runner, tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(BASE)
    result = runner.invoke(cli, ["sweep", str(path), "--param", "grid.cells=10,20"], obj={})
    assert result.exit_code == 1
    assert "unknown key" in result.output
