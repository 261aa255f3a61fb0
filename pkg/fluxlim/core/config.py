"""
Experiment configuration
"""

import copy
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import yaml

from .errors import ConfigError

logger = logging.getLogger(__name__)

Marks = Dict[str, Tuple[int, int]]

INTEGRATORS = ("fv", "jko")
COST_KINDS = ("relativistic", "classical", "tabulated")
FLUX_MODES = ("separate", "combined")
INTERFACE_DENSITIES = ("upwind", "centered", "limited")
BOUNDARIES = ("no_flux", "dirichlet")


class _Section:
    """Strict construction of a dataclass section from a mapping"""

    KEY: str = ""

    @classmethod
    def from_dict(cls, data: Any, marks: Optional[Marks] = None, prefix: Optional[str] = None):
        prefix = cls.KEY if prefix is None else prefix
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise _error(f"section '{prefix}' must be a mapping", prefix, marks)
        known = {f for f in cls.__dataclass_fields__}
        for key in data:
            if key not in known:
                raise _error(f"unknown key '{_join(prefix, key)}'", _join(prefix, key), marks)
        values = {}
        for key, value in data.items():
            default = cls.__dataclass_fields__[key].default
            values[key] = _coerce(value, default, _join(prefix, key), marks)
        return cls(**values)


def _join(prefix: str, key: Any) -> str:
    return f"{prefix}.{key}" if prefix else str(key)


def _error(message: str, key: str, marks: Optional[Marks]) -> ConfigError:
    line, column = (marks or {}).get(key, (None, None))
    return ConfigError(message, key=key, line=line, column=column)


def _coerce(value: Any, default: Any, key: str, marks: Optional[Marks]) -> Any:
    """Match the type of the field default where one is set"""
    if value is None or default is None or not isinstance(default, (bool, int, float, str)):
        return value
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise _error(f"'{key}' must be true or false", key, marks)
        return value
    if isinstance(default, int):
        if isinstance(value, bool) or not isinstance(value, int):
            raise _error(f"'{key}' must be an integer", key, marks)
        return value
    if isinstance(default, float):
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise _error(f"'{key}' must be a number", key, marks)
        return float(value)
    return str(value)


@dataclass
class CostConfig(_Section):
    """Cost kind and parameters"""
    KEY = "cost"
    kind: str = "relativistic"
    c: float = 1.0
    profile: Optional[str] = None
    samples: int = 10_000


@dataclass
class GridConfig(_Section):
    KEY = "grid"
    x_min: float = -6.0
    x_max: float = 6.0
    n_cells: int = 400


@dataclass
class InitialConfig(_Section):
    """``spec`` is gaussian(center,width), indicator(a,b), gibbs, uniform(value) or csv:<path>"""
    KEY = "initial"
    spec: str = "gibbs"
    offset: float = 0.0


@dataclass
class RunParams(_Section):
    """Finite-volume run parameters"""
    KEY = "run"
    t_end: float = 1.0
    cfl: float = 0.4
    snapshots: List[float] = field(default_factory=list)
    floor: float = 1e-12
    flux_mode: str = "separate"
    interface_density: str = "upwind"
    boundary: str = "no_flux"
    boundary_values: Optional[List[float]] = None
    log_every: int = 1


@dataclass
class JkoParams(_Section):
    KEY = "jko"
    h: float = 0.01
    n_steps: int = 10
    quantiles: int = 200
    newton_tol: float = 1e-10
    max_newton_iters: int = 100


@dataclass
class CheckSpec:
    """A check name with optional tolerance and parameters"""
    name: str
    tolerance: Optional[float] = None
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: Any, marks: Optional[Marks] = None, prefix: str = "checks") -> 'CheckSpec':
        if isinstance(data, str):
            return cls(name=data)
        if not isinstance(data, dict):
            raise _error("a check is a name or a mapping with 'name'", prefix, marks)
        for key in data:
            if key not in ("name", "tolerance", "params"):
                raise _error(f"unknown key '{_join(prefix, key)}'", _join(prefix, key), marks)
        if "name" not in data:
            raise _error("check entry needs a 'name'", prefix, marks)
        params = data.get("params") or {}
        if not isinstance(params, dict):
            raise _error("check params must be a mapping", _join(prefix, "params"), marks)
        tolerance = data.get("tolerance")
        if tolerance is not None and (isinstance(tolerance, bool) or not isinstance(tolerance, (int, float))):
            raise _error("check tolerance must be a number", _join(prefix, "tolerance"), marks)
        return cls(name=str(data["name"]), tolerance=None if tolerance is None else float(tolerance),
                   params=dict(params))

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "tolerance": self.tolerance, "params": self.params}


@dataclass
class ExperimentConfig:
    """Main configuration"""
    cost: CostConfig = field(default_factory=CostConfig)
    potential: str = "zero"
    grid: GridConfig = field(default_factory=GridConfig)
    initial: InitialConfig = field(default_factory=InitialConfig)
    integrator: str = "fv"
    run: RunParams = field(default_factory=RunParams)
    jko: Optional[JkoParams] = None
    checks: List[CheckSpec] = field(default_factory=list)
    output_dir: str = "results"
    log_level: str = "INFO"
    workers: int = 4
    base_dir: Path = field(default=Path("."), repr=False, compare=False)

    SECTIONS = ("cost", "potential", "grid", "initial", "integrator", "run", "jko",
                "checks", "output_dir", "log_level", "workers")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary"""
        return {
            "cost": asdict(self.cost),
            "potential": self.potential,
            "grid": asdict(self.grid),
            "initial": asdict(self.initial),
            "integrator": self.integrator,
            "run": asdict(self.run),
            "jko": asdict(self.jko) if self.jko is not None else None,
            "checks": [check.to_dict() for check in self.checks],
            "output_dir": self.output_dir,
            "log_level": self.log_level,
            "workers": self.workers,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any], marks: Optional[Marks] = None,
                  base_dir: Optional[Path] = None) -> 'ExperimentConfig':
        """Create from dictionary, rejecting unknown keys"""
        if data is None:
            data = {}
        if not isinstance(data, dict):
            raise ConfigError("configuration must be a mapping")
        for key in data:
            if key not in cls.SECTIONS:
                raise _error(f"unknown key '{key}'", str(key), marks)

        config = cls(base_dir=Path(base_dir) if base_dir else Path("."))
        if "cost" in data:
            config.cost = CostConfig.from_dict(data["cost"], marks)
        if "grid" in data:
            config.grid = GridConfig.from_dict(data["grid"], marks)
        if "initial" in data:
            initial = data["initial"]
            if isinstance(initial, str):
                initial = {"spec": initial}
            config.initial = InitialConfig.from_dict(initial, marks)
        if "run" in data:
            config.run = RunParams.from_dict(data["run"], marks)
        if data.get("jko") is not None:
            config.jko = JkoParams.from_dict(data["jko"], marks)
        if "checks" in data:
            checks = data["checks"] or []
            if not isinstance(checks, list):
                raise _error("'checks' must be a list", "checks", marks)
            config.checks = [CheckSpec.from_dict(entry, marks, f"checks[{i}]") for i, entry in enumerate(checks)]
        for key in ("potential", "integrator", "output_dir", "log_level"):
            if key in data:
                setattr(config, key, str(data[key]))
        if "workers" in data:
            config.workers = _coerce(data["workers"], 4, "workers", marks)
        config.validate(marks)
        return config

    def resolve_path(self, path: str) -> Path:
        """Paths in the file are relative to the file's directory"""
        candidate = Path(path)
        return candidate if candidate.is_absolute() else self.base_dir / candidate

    def validate(self, marks: Optional[Marks] = None):
        """Check documented parameter ranges and referenced files"""
        def fail(message: str, key: str):
            raise _error(message, key, marks)

        if self.integrator not in INTEGRATORS:
            fail(f"unknown integrator '{self.integrator}'", "integrator")
        if self.cost.kind not in COST_KINDS:
            fail(f"unknown cost kind '{self.cost.kind}'", "cost.kind")
        if not self.cost.c > 0:
            fail("cost.c must be positive", "cost.c")
        if self.cost.profile is not None and not self.resolve_path(self.cost.profile).exists():
            fail(f"cost profile not found: {self.cost.profile}", "cost.profile")
        if self.grid.n_cells < 2:
            fail("grid.n_cells must be >= 2", "grid.n_cells")
        if not self.grid.x_max > self.grid.x_min:
            fail("grid.x_max must exceed grid.x_min", "grid.x_max")
        from fluxlim.potential import parse_potential
        try:
            parse_potential(self.potential)
        except ValueError as e:
            fail(str(e), "potential")
        from fluxlim.experiment.initial import parse_initial_spec
        try:
            parse_initial_spec(self.initial.spec)
        except ValueError as e:
            fail(str(e), "initial.spec")
        if self.initial.spec.startswith("csv:") and not self.resolve_path(self.initial.spec[4:]).exists():
            fail(f"initial density file not found: {self.initial.spec[4:]}", "initial.spec")

        run = self.run
        if not run.t_end > 0:
            fail("run.t_end must be positive", "run.t_end")
        if not 0 < run.cfl <= 1:
            fail("run.cfl must lie in (0, 1]", "run.cfl")
        if not run.floor > 0:
            fail("run.floor must be positive", "run.floor")
        if run.flux_mode not in FLUX_MODES:
            fail(f"unknown flux mode '{run.flux_mode}'", "run.flux_mode")
        if run.interface_density not in INTERFACE_DENSITIES:
            fail(f"unknown interface density '{run.interface_density}'", "run.interface_density")
        if run.boundary not in BOUNDARIES:
            fail(f"unknown boundary '{run.boundary}'", "run.boundary")
        if run.boundary == "dirichlet":
            values = run.boundary_values
            if not isinstance(values, list) or len(values) != 2 or not all(
                    isinstance(v, (int, float)) and v > 0 for v in values):
                fail("dirichlet boundary needs two positive boundary_values", "run.boundary_values")
        if not isinstance(run.snapshots, list) or any(
                isinstance(t, bool) or not isinstance(t, (int, float)) or t < 0 or t > run.t_end
                for t in run.snapshots):
            fail("run.snapshots must be times within [0, t_end]", "run.snapshots")
        if run.log_every < 1:
            fail("run.log_every must be >= 1", "run.log_every")

        if self.integrator == "jko" and self.jko is None:
            fail("integrator jko needs a 'jko' section", "jko")
        if self.jko is not None:
            if not self.jko.h > 0:
                fail("jko.h must be positive", "jko.h")
            if self.jko.n_steps < 1:
                fail("jko.n_steps must be >= 1", "jko.n_steps")
            if self.jko.quantiles < 8:
                fail("M too small: jko.quantiles must be >= 8", "jko.quantiles")
        if self.workers < 1:
            fail("workers must be >= 1", "workers")

        from fluxlim.diagnostics.checks import CHECKS
        for i, check in enumerate(self.checks):
            if check.name not in CHECKS:
                fail(f"unknown check '{check.name}'", f"checks[{i}]")

    def save(self, path: Path):
        """Save configuration to file"""
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as f:
            yaml.safe_dump(self.to_dict(), f, default_flow_style=False, sort_keys=False)

    @classmethod
    def load(cls, path: Path, overrides: Optional[Dict[str, Any]] = None) -> 'ExperimentConfig':
        """Load configuration from a YAML file, applying dotted-key overrides"""
        path = Path(path)
        try:
            text = path.read_text(encoding='utf-8')
        except OSError as e:
            raise ConfigError(f"cannot read config {path}: {e.strerror}")
        data, marks = parse_yaml(text)
        if overrides:
            data = apply_overrides(data, overrides)
        return cls.from_dict(data, marks, base_dir=path.parent)


def parse_yaml(text: str) -> Tuple[Any, Marks]:
    """Document and the 1-based (line, column) of every key"""
    try:
        node = yaml.compose(text, Loader=yaml.SafeLoader)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        problem = getattr(e, "problem", None) or str(e)
        if mark is not None:
            raise ConfigError(f"invalid YAML: {problem}", line=mark.line + 1, column=mark.column + 1)
        raise ConfigError(f"invalid YAML: {problem}")
    marks: Marks = {}
    if node is not None:
        _collect_marks(node, "", marks)
    return data, marks


def _collect_marks(node: yaml.Node, prefix: str, marks: Marks):
    if isinstance(node, yaml.MappingNode):
        for key_node, value_node in node.value:
            path = _join(prefix, key_node.value)
            marks[path] = (key_node.start_mark.line + 1, key_node.start_mark.column + 1)
            _collect_marks(value_node, path, marks)
    elif isinstance(node, yaml.SequenceNode):
        for i, item in enumerate(node.value):
            path = f"{prefix}[{i}]"
            marks[path] = (item.start_mark.line + 1, item.start_mark.column + 1)
            _collect_marks(item, path, marks)


def parse_override(expression: str) -> Tuple[str, List[Any]]:
    """``section.key=v1,v2,...`` into the key and its YAML-parsed values"""
    key, sep, raw = expression.partition("=")
    key = key.strip()
    if not sep or not key or not raw.strip():
        raise ConfigError(f"sweep must look like key=v1,v2,...: '{expression}'")
    values = []
    for item in raw.split(","):
        try:
            values.append(yaml.safe_load(item.strip()))
        except yaml.YAMLError:
            raise ConfigError(f"invalid sweep value '{item}' for '{key}'", key=key)
    return key, values


def apply_overrides(data: Optional[Dict[str, Any]], overrides: Dict[str, Any]) -> Dict[str, Any]:
    """Copy of ``data`` with dotted keys set; unknown keys surface in from_dict"""
    result = copy.deepcopy(data) if data else {}
    for dotted, value in overrides.items():
        parts = dotted.split(".")
        target = result
        for part in parts[:-1]:
            current = target.get(part)
            if current is None:
                current = {}
                target[part] = current
            elif isinstance(current, str) and part == "initial":
                current = {"spec": current}
                target[part] = current
            elif not isinstance(current, dict):
                raise ConfigError(f"cannot override '{dotted}': '{part}' is not a section", key=dotted)
            target = current
        target[parts[-1]] = value
    return result


def load_config(config_path: Union[str, Path], overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Load an experiment configuration file"""
    path = Path(config_path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    config = ExperimentConfig.load(path, overrides)
    logger.info(f"Loaded configuration from {path}")
    return config
