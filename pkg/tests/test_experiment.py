import json

import numpy as np
import pytest

from fluxlim.core.config import load_config
from fluxlim.core.errors import ConfigError
from fluxlim.core.interfaces import Verdict
from fluxlim.experiment import Experiment, build_initial, parse_initial_spec
from fluxlim.geometry import Grid1D, mass
from fluxlim.potential import ZeroPotential
from fluxlim.reporting import write_density_csv
from fluxlim.scheduler import SweepRunner, expand_sweep

SMALL = """\
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
  snapshots: [0.05]
checks:
  - conservation
  - lyapunov
workers: 2
"""


def write_config(tmp_path, text=SMALL, name="experiment.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return path


@pytest.mark.parametrize("spec, kind, args", [
    ("gaussian(0,1)", "gaussian", [0.0, 1.0]),
    ("indicator(-1, 1)", "indicator", [-1.0, 1.0]),
    ("gibbs", "gibbs", []),
    ("uniform(0.5)", "uniform", [0.5]),
    ("csv:data/u0.csv", "csv", ["data/u0.csv"]),
])
def test_parse_initial_spec(spec, kind, args):
    assert parse_initial_spec(spec) == (kind, args)


@pytest.mark.parametrize("spec", ["gaussian(0,-1)", "indicator(1,0)", "triangle(0,1)", "uniform(0)", "csv:"])
def test_parse_initial_spec_rejects(spec):
    with pytest.raises(ValueError):
        parse_initial_spec(spec)


def test_build_initial(tmp_path):
    grid = Grid1D(-2.0, 2.0, 40)
    for spec in ("gaussian(0,0.5)", "indicator(-1,1)", "gibbs"):
        assert mass(build_initial(spec, grid, ZeroPotential())) == pytest.approx(1.0)
    shifted = build_initial("uniform(0.5)", grid, ZeroPotential(), offset=0.25)
    assert shifted.values.min() == pytest.approx(0.75)

    u = build_initial("gaussian(0.3,0.4)", grid, ZeroPotential())
    write_density_csv(u, tmp_path / "u0.csv")
    loaded = build_initial("csv:u0.csv", grid, ZeroPotential(), base_dir=tmp_path)
    assert loaded.values.tolist() == u.values.tolist()


def test_experiment_run_writes_outputs(tmp_path):
    config = load_config(write_config(tmp_path))
    result = Experiment(config, tmp_path / "out").run()
    assert [r.check_name for r in result.reports] == ["conservation", "lyapunov"]
    assert all(r.verdict == Verdict.PASS for r in result.reports)
    assert result.summary["t_final"] == 0.1
    assert result.summary["l1_to_gibbs"] > 0
    for name in ("meta.json", "steps.csv", "report.json", "report.csv", "gibbs.csv",
                 "snapshot_0.csv", "snapshot_0.05.csv", "snapshot_0.1.csv", "plot_snapshots.py"):
        assert (tmp_path / "out" / name).exists(), name
    report = json.loads((tmp_path / "out" / "report.json").read_text())
    assert report["metadata"]["config"]["potential"] == "quadratic:1"


def test_experiment_outputs_are_reproducible(tmp_path):
    config = load_config(write_config(tmp_path))
    Experiment(config, tmp_path / "a").run()
    Experiment(config, tmp_path / "b").run()
    for name in ("report.json", "meta.json", "snapshot_0.1.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_jko_experiment(tmp_path):
    text = SMALL.replace("run:\n  t_end: 0.1\n  snapshots: [0.05]\n",
                         "integrator: jko\njko:\n  h: 0.02\n  n_steps: 3\n  quantiles: 60\n")
    config = load_config(write_config(tmp_path, text))
    experiment = Experiment(config, tmp_path / "jko")
    assert experiment.run_config.t_end == pytest.approx(0.06)
    result = experiment.run()
    assert result.trajectory.integrator == "jko"
    assert len(result.summary["newton_iterations"]) == 3
    assert result.summary["l1_to_fv"] >= 0


def test_checks_only(tmp_path):
    config = load_config(write_config(tmp_path, SMALL.replace("  - lyapunov\n", "  - constant_state\n")))
    result = Experiment(config, tmp_path / "verify").run_checks_only()
    assert [r.check_name for r in result.reports] == ["conservation", "constant_state"]
    assert (tmp_path / "verify" / "report.json").exists()

    empty = load_config(write_config(tmp_path, SMALL.split("checks:")[0], "empty.yaml"))
    with pytest.raises(ConfigError, match="nothing to verify"):
        Experiment(empty).run_checks_only(write=False)


def test_expand_sweep():
    points = expand_sweep([("cost.c", [1, 10]), ("run.flux_mode", ["separate", "combined"])])
    assert [p.label for p in points] == ["point_000", "point_001", "point_002", "point_003"]
    assert points[1].parameters == {"cost.c": 1, "run.flux_mode": "combined"}


def test_sweep_runner(tmp_path):
    path = write_config(tmp_path)
    runner = SweepRunner(path, [("cost.c", [1.0, 10.0])], tmp_path / "sweep", workers=2)
    outcomes = runner.run()
    assert [o.status for o in outcomes] == ["ok", "ok"]
    assert (tmp_path / "sweep" / "point_001" / "report.json").exists()
    assert (tmp_path / "sweep" / "sweep_summary.csv").read_text().count("point_00") == 4


def test_sweep_validates_every_point_first(tmp_path):
    path = write_config(tmp_path)
    with pytest.raises(ConfigError, match="cost.c must be positive"):
        SweepRunner(path, [("cost.c", [1.0, -1.0])], tmp_path / "sweep")


@pytest.mark.parametrize("error", [FloatingPointError("overflow in exp"),
                                   np.linalg.LinAlgError("singular matrix"),
                                   ZeroDivisionError("division by zero")])
def test_sweep_keeps_numerical_failures_with_their_point(tmp_path, monkeypatch, error):
    original = Experiment.run

    def failing_run(self, *args, **kwargs):
        if self.config.cost.c == 10.0:
            raise error
        return original(self, *args, **kwargs)

    monkeypatch.setattr(Experiment, "run", failing_run)
    runner = SweepRunner(write_config(tmp_path), [("cost.c", [1.0, 10.0])], tmp_path / "sweep", workers=2)
    outcomes = runner.run()
    assert [o.status for o in outcomes] == ["ok", "error"]
    assert outcomes[1].error_type is type(error)
    assert type(error).__name__ in outcomes[1].error
    assert "point_001" in (tmp_path / "sweep" / "sweep_summary.csv").read_text()
