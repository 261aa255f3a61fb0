from pathlib import Path

import pytest

from fluxlim.core.config import (
    ExperimentConfig,
    apply_overrides,
    load_config,
    parse_override,
    parse_yaml,
)
from fluxlim.core.errors import ConfigError

BASE = """\
cost:
  kind: relativistic
  c: 2.0
potential: "quadratic:1"
grid:
  n_cells: 100
initial: "gaussian(0,1)"
run:
  t_end: 0.5
  snapshots: [0.25]
checks:
  - conservation
  - name: weak_max
    params: {kind: min}
"""


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "experiment.yaml"
    path.write_text(BASE)
    return path


def test_load_config(config_file):
    config = load_config(config_file)
    assert config.cost.c == 2.0
    assert config.grid.n_cells == 100
    assert config.grid.x_min == -6.0
    assert config.initial.spec == "gaussian(0,1)"
    assert config.run.snapshots == [0.25]
    assert [c.name for c in config.checks] == ["conservation", "weak_max"]
    assert config.checks[1].params == {"kind": "min"}
    assert config.base_dir == config_file.parent


def test_save_and_reload(tmp_path, config_file):
    config = load_config(config_file)
    config.save(tmp_path / "copy" / "saved.yaml")
    again = load_config(tmp_path / "copy" / "saved.yaml")
    assert again.to_dict() == config.to_dict()


def test_unknown_key_reports_position(tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text(BASE.replace("  n_cells: 100", "  n_cells: 100\n  cells: 3"))
    with pytest.raises(ConfigError) as info:
        load_config(path)
    assert info.value.key == "grid.cells"
    assert info.value.line == 7
    assert "line 7, column 3" in str(info.value)


@pytest.mark.parametrize("replacement, message", [
    (("c: 2.0", "c: -1.0"), "cost.c must be positive"),
    (("t_end: 0.5", "t_end: 0"), "t_end must be positive"),
    (("kind: relativistic", "kind: elastic"), "unknown cost kind"),
    (("\"quadratic:1\"", "\"cubic:1\""), "unknown potential"),
    (("gaussian(0,1)", "gaussian(0)"), "takes 2 parameters"),
    (("snapshots: [0.25]", "snapshots: [0.75]"), "snapshots"),
    (("- conservation", "- entropy"), "unknown check"),
    (("n_cells: 100", "n_cells: many"), "must be an integer"),
])
def test_invalid_values(tmp_path, replacement, message):
    path = tmp_path / "bad.yaml"
    path.write_text(BASE.replace(*replacement))
    with pytest.raises(ConfigError, match=message):
        load_config(path)


def test_jko_section_rules(tmp_path):
    path = tmp_path / "jko.yaml"
    path.write_text(BASE + "integrator: jko\n")
    with pytest.raises(ConfigError, match="needs a 'jko' section"):
        load_config(path)
    path.write_text(BASE + "integrator: jko\njko:\n  quantiles: 4\n")
    with pytest.raises(ConfigError, match="M too small"):
        load_config(path)


def test_dirichlet_needs_values(tmp_path):
    path = tmp_path / "dirichlet.yaml"
    path.write_text(BASE.replace("  t_end: 0.5", "  t_end: 0.5\n  boundary: dirichlet"))
    with pytest.raises(ConfigError, match="boundary_values"):
        load_config(path)


def test_missing_files(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_config(tmp_path / "absent.yaml")
    path = tmp_path / "csv.yaml"
    path.write_text(BASE.replace("gaussian(0,1)", "csv:missing.csv"))
    with pytest.raises(ConfigError, match="initial density file not found"):
        load_config(path)


def test_yaml_syntax_error_position():
    with pytest.raises(ConfigError) as info:
        parse_yaml("grid:\n  n_cells: [1, 2\n")
    assert info.value.line is not None


def test_parse_yaml_marks():
    _, marks = parse_yaml(BASE)
    assert marks["cost.c"] == (3, 3)
    assert marks["checks[1].params.kind"][0] == 15


def test_parse_override():
    assert parse_override("cost.c=1,10,100") == ("cost.c", [1, 10, 100])
    assert parse_override("run.flux_mode=separate,combined") == ("run.flux_mode", ["separate", "combined"])
    with pytest.raises(ConfigError):
        parse_override("cost.c")


def test_overrides(config_file):
    config = ExperimentConfig.load(config_file, {"cost.c": 10.0, "initial.offset": 0.1})
    assert config.cost.c == 10.0
    assert config.initial.offset == 0.1
    assert config.initial.spec == "gaussian(0,1)"
    with pytest.raises(ConfigError, match="unknown key"):
        ExperimentConfig.load(config_file, {"cost.speed": 3.0})
    with pytest.raises(ConfigError, match="not a section"):
        apply_overrides({"potential": "zero"}, {"potential.kappa": 1.0})


def test_defaults_validate():
    config = ExperimentConfig.from_dict({})
    assert config.integrator == "fv"
    assert config.potential == "zero"
    assert config.jko is None


@pytest.mark.parametrize("path", sorted((Path(__file__).parent.parent / "configs").glob("*.yaml")),
                         ids=lambda p: p.stem)
def test_bundled_configs_load(path):
    config = load_config(path)
    assert config.checks


def test_limited_interface_density(tmp_path):
    path = tmp_path / "limited.yaml"
    path.write_text(BASE.replace("  t_end: 0.5\n", "  t_end: 0.5\n  interface_density: limited\n"))
    assert load_config(path).run.interface_density == "limited"
