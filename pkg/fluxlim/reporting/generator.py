"""
Output directory writers for trajectories and check reports
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from fluxlim import __version__
from fluxlim.core.interfaces import PrincipleReport, Verdict
from fluxlim.geometry import DensityField
from fluxlim.solver import Trajectory
from .csv import CSVReportGenerator, write_density_csv, write_steps_csv
from .formats import JSONReportGenerator, PlotScriptGenerator, write_json

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def snapshot_filename(t: float) -> str:
    return f"snapshot_{t:.10g}.csv"


class TrajectoryWriter:
    """meta.json, steps.csv, snapshot_<t>.csv and plot_snapshots.py for one run"""

    def write(self, trajectory: Trajectory, directory: PathLike,
              config: Optional[Dict[str, Any]] = None,
              gibbs: Optional[DensityField] = None) -> Path:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)

        snapshots = []
        for t, u in trajectory.snapshots:
            name = snapshot_filename(t)
            write_density_csv(u, directory / name)
            snapshots.append({"t": t, "file": name, "mass": u.mass})
        logger.info(f"Wrote {len(snapshots)} snapshots to {directory}")

        gibbs_file = None
        if gibbs is not None:
            gibbs_file = "gibbs.csv"
            write_density_csv(gibbs, directory / gibbs_file)

        write_steps_csv(trajectory.step_log, directory / "steps.csv")
        write_json(self.meta(trajectory, config, snapshots), directory / "meta.json")
        PlotScriptGenerator().generate(snapshots, directory / "plot_snapshots.py",
                                       title=f"{trajectory.integrator} run", version=__version__,
                                       gibbs_file=gibbs_file)
        return directory

    def meta(self, trajectory: Trajectory, config: Optional[Dict[str, Any]],
             snapshots: List[Dict[str, Any]]) -> Dict[str, Any]:
        records = trajectory.step_log
        dts = [r.dt for r in records if r.step > 0]
        statistics = {
            "logged_steps": len(records),
            "min_dt": min(dts) if dts else None,
            "max_dt": max(dts) if dts else None,
            "final_mass": records[-1].mass if records else None,
            "final_free_energy": records[-1].free_energy if records else None,
        }
        return {
            "tool": "fluxlim",
            "version": __version__,
            "integrator": trajectory.integrator,
            "config": config or {},
            "run": trajectory.config.to_dict(),
            "metadata": trajectory.metadata,
            "snapshots": snapshots,
            "step_statistics": statistics,
        }


class ReportGenerator:
    """Serialize check reports"""

    def __init__(self):
        self.generators = {
            'json': JSONReportGenerator(),
            'csv': CSVReportGenerator(),
        }

    def generate(self, reports: List[PrincipleReport], output_path: PathLike,
                 format: str = 'json', metadata: Optional[Dict[str, Any]] = None) -> Path:
        if format not in self.generators:
            raise ValueError(f"Unsupported format: {format}")
        entries = [report.to_dict() for report in reports]
        generator = self.generators[format]
        if format == 'json':
            return generator.generate(entries, Path(output_path), metadata)
        return generator.generate(entries, Path(output_path))

    @staticmethod
    def summarize(reports: List[PrincipleReport]) -> Dict[str, int]:
        counts = {verdict.value: 0 for verdict in Verdict}
        for report in reports:
            counts[report.verdict.value] += 1
        return counts
