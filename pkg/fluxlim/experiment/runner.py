"""
Builds solver objects from an ExperimentConfig and drives integration and checks
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional

from fluxlim import __version__
from fluxlim.core.config import ExperimentConfig
from fluxlim.core.errors import ConfigError
from fluxlim.core.interfaces import BoundaryKind, FluxMode, InterfaceDensity, PrincipleReport
from fluxlim.cost import CostFunction, make_cost
from fluxlim.diagnostics import CheckContext, VerificationEngine, create_check
from fluxlim.geometry import DensityField, Grid1D, l1_distance
from fluxlim.jko import JkoConfig, jko_run
from fluxlim.operators import OperatorContext
from fluxlim.potential import Potential, gibbs_density, parse_potential, warn_if_not_confining
from fluxlim.reporting import ReportGenerator, TrajectoryWriter
from fluxlim.solver import RunConfig, Trajectory, run
from .initial import build_initial

logger = logging.getLogger(__name__)


@dataclass
class ExperimentResult:
    """Outputs of one experiment"""
    config: ExperimentConfig
    trajectory: Optional[Trajectory]
    reports: List[PrincipleReport]
    output_dir: Optional[Path]
    summary: Dict[str, Any] = field(default_factory=dict)
    caveats: List[str] = field(default_factory=list)


class Experiment:
    """One configured experiment: grid, cost, potential, initial data and checks"""

    def __init__(self, config: ExperimentConfig, output_dir: Optional[Path] = None, seed: int = 0):
        self.config = config
        self.output_dir = Path(output_dir) if output_dir is not None else config.resolve_path(config.output_dir)
        self.seed = seed

        self.grid = Grid1D(config.grid.x_min, config.grid.x_max, config.grid.n_cells)
        self.cost = self._build_cost()
        self.potential: Potential = parse_potential(config.potential)
        warn_if_not_confining(self.potential, self.grid)
        self.ctx = self._build_context()
        self.u0 = build_initial(config.initial.spec, self.grid, self.potential,
                                config.initial.offset, config.base_dir)
        self.jko_config = self._build_jko_config()
        self.run_config = self._build_run_config()

    def _build_cost(self) -> CostFunction:
        spec = self.config.cost
        profile = str(self.config.resolve_path(spec.profile)) if spec.profile else None
        try:
            return make_cost(spec.kind, c=spec.c, profile=profile, samples=spec.samples)
        except ValueError as e:
            raise ConfigError(str(e), key="cost")

    def _build_context(self) -> OperatorContext:
        params = self.config.run
        left = right = None
        if params.boundary == "dirichlet":
            left, right = (float(v) for v in params.boundary_values)
        return OperatorContext(
            cost=self.cost,
            potential=self.potential,
            grid=self.grid,
            boundary=BoundaryKind(params.boundary),
            left_value=left,
            right_value=right,
            flux_mode=FluxMode(params.flux_mode),
            interface_density=InterfaceDensity(params.interface_density),
        )

    def _build_jko_config(self) -> Optional[JkoConfig]:
        spec = self.config.jko
        if spec is None:
            return None
        return JkoConfig(cost=self.cost, potential=self.potential, h=spec.h, M=spec.quantiles,
                         newton_tol=spec.newton_tol, max_newton_iters=spec.max_newton_iters)

    def _build_run_config(self) -> RunConfig:
        params = self.config.run
        if self.config.integrator == "jko":
            spec = self.config.jko
            t_end = spec.h * spec.n_steps
            snapshots = [k * spec.h for k in range(1, spec.n_steps)]
        else:
            t_end = params.t_end
            snapshots = params.snapshots
        return RunConfig(ctx=self.ctx, t_end=t_end, cfl_factor=params.cfl, snapshot_times=snapshots,
                         positivity_floor=params.floor, log_every=params.log_every)

    @property
    def jko_steps(self) -> int:
        return self.config.jko.n_steps if self.config.jko is not None else 0

    def integrate(self) -> Trajectory:
        if self.config.integrator == "jko":
            return jko_run(self.jko_config, self.u0, self.jko_steps, self.grid)
        return run(self.run_config, self.u0)

    def check_context(self, trajectory: Optional[Trajectory] = None) -> CheckContext:
        return CheckContext(ctx=self.ctx, u0=self.u0, run_config=self.run_config, trajectory=trajectory,
                            jko_config=self.jko_config, jko_steps=self.jko_steps,
                            integrator=self.config.integrator, seed=self.seed)

    def verify(self, context: CheckContext) -> List[PrincipleReport]:
        engine = VerificationEngine(max_workers=self.config.workers)
        for spec in self.config.checks:
            engine.register_check(create_check(spec.name, spec.tolerance, **spec.params))
        return engine.run(context)

    def summarize(self, trajectory: Trajectory, context: CheckContext) -> Dict[str, Any]:
        """Headline numbers printed after a run"""
        summary: Dict[str, Any] = {"integrator": trajectory.integrator, "t_final": trajectory.final_time}
        gibbs = gibbs_density(self.potential, self.grid)
        scaled = DensityField(self.grid, gibbs.values * trajectory.initial.mass)
        summary["l1_to_gibbs"] = l1_distance(trajectory.final, scaled)
        if trajectory.integrator == "jko":
            matched = context.fv_trajectory(FluxMode.COMBINED, trajectory.final_time)
            summary["l1_to_fv"] = l1_distance(trajectory.final, matched.final)
            summary["newton_iterations"] = trajectory.metadata.get("newton_iterations", [])
        return summary

    def run(self, write: bool = True) -> ExperimentResult:
        """Integrate, run the configured checks and write the output directory"""
        trajectory = self.integrate()
        context = self.check_context(trajectory)
        reports = self.verify(context)
        summary = self.summarize(trajectory, context)
        caveats = list(trajectory.metadata.get("caveats", []))
        output_dir = None
        if write:
            output_dir = self.output_dir
            TrajectoryWriter().write(trajectory, output_dir, config=self.echo(),
                                     gibbs=gibbs_density(self.potential, self.grid))
            self.write_reports(reports, output_dir, summary)
        return ExperimentResult(self.config, trajectory, reports, output_dir, summary, caveats)

    def run_checks_only(self, write: bool = True) -> ExperimentResult:
        """Checks without a primary run; integrations happen only where a check needs one"""
        if not self.config.checks:
            raise ConfigError("nothing to verify", key="checks")
        context = self.check_context()
        reports = self.verify(context)
        output_dir = None
        if write:
            output_dir = self.output_dir
            self.write_reports(reports, output_dir, {})
        return ExperimentResult(self.config, context.trajectory, reports, output_dir)

    def write_reports(self, reports: List[PrincipleReport], output_dir: Path, summary: Dict[str, Any]):
        generator = ReportGenerator()
        metadata = {"tool": "fluxlim", "version": __version__, "config": self.echo(),
                    "seed": self.seed, "summary": summary}
        generator.generate(reports, output_dir / "report.json", format="json", metadata=metadata)
        generator.generate(reports, output_dir / "report.csv", format="csv")

    def echo(self) -> Dict[str, Any]:
        return self.config.to_dict()
