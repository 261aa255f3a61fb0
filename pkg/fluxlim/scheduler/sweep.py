"""
Cartesian parameter sweeps run concurrently, one output directory per point
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from fluxlim.core.config import ExperimentConfig, load_config
from fluxlim.core.errors import FluxlimError
from fluxlim.core.interfaces import PrincipleReport
from fluxlim.experiment import Experiment, ExperimentResult
from fluxlim.reporting import write_sweep_summary

logger = logging.getLogger(__name__)


@dataclass
class SweepPoint:
    index: int
    parameters: Dict[str, Any]

    @property
    def label(self) -> str:
        return f"point_{self.index:03d}"


@dataclass
class PointOutcome:
    point: SweepPoint
    status: str
    reports: List[PrincipleReport] = field(default_factory=list)
    error: Optional[str] = None
    error_type: Optional[type] = None

    def to_row(self) -> Dict[str, Any]:
        return {
            "point": self.point.label,
            "parameters": self.point.parameters,
            "status": self.status,
            "reports": [report.to_dict() for report in self.reports],
            "error": self.error or "",
        }


def expand_sweep(axes: Sequence[Tuple[str, List[Any]]]) -> List[SweepPoint]:
    """Cartesian product of the axes, first axis slowest"""
    if not axes:
        raise ValueError("a sweep needs at least one parameter")
    keys = [key for key, _ in axes]
    if len(set(keys)) != len(keys):
        raise ValueError("a parameter appears twice in the sweep")
    return [SweepPoint(i, dict(zip(keys, combination)))
            for i, combination in enumerate(product(*[values for _, values in axes]))]


class SweepRunner:
    """Runs every point of a sweep in a thread pool.

    All point configurations are loaded and validated before anything runs,
    so an unknown key fails the whole sweep up front. Runtime errors stay
    with their point.
    """

    def __init__(self, config_path: Path, axes: Sequence[Tuple[str, List[Any]]],
                 output_dir: Path, workers: int = 4, seed: int = 0,
                 mode: str = "run"):
        if mode not in ("run", "verify"):
            raise ValueError(f"unknown sweep mode '{mode}'")
        self.config_path = Path(config_path)
        self.points = expand_sweep(axes)
        self.output_dir = Path(output_dir)
        self.workers = workers
        self.seed = seed
        self.mode = mode
        self.configs: Dict[int, ExperimentConfig] = {
            point.index: load_config(self.config_path, point.parameters) for point in self.points
        }

    def _run_point(self, point: SweepPoint) -> PointOutcome:
        logger.info(f"Sweep {point.label}: {point.parameters}")
        try:
            experiment = Experiment(self.configs[point.index], self.output_dir / point.label, self.seed)
            result: ExperimentResult = experiment.run() if self.mode == "run" else experiment.run_checks_only()
        except FluxlimError as e:
            logger.error(f"Sweep {point.label} failed: {e}")
            return PointOutcome(point, "error", error=str(e), error_type=type(e))
        except (np.linalg.LinAlgError, ArithmeticError) as e:
            logger.error(f"Sweep {point.label} hit a numerical failure: {type(e).__name__}: {e}")
            return PointOutcome(point, "error", error=f"{type(e).__name__}: {e}", error_type=type(e))
        except ValueError as e:
            logger.error(f"Sweep {point.label} rejected: {e}")
            return PointOutcome(point, "error", error=str(e), error_type=type(e))
        return PointOutcome(point, "ok", reports=result.reports)

    def run(self, on_point: Optional[Callable[[PointOutcome], None]] = None) -> List[PointOutcome]:
        """Outcomes ordered by point index; writes sweep_summary.csv"""
        with ThreadPoolExecutor(max_workers=max(1, self.workers)) as executor:
            futures = [executor.submit(self._run_point, point) for point in self.points]
            outcomes = []
            for future in futures:
                outcome = future.result()
                if on_point is not None:
                    on_point(outcome)
                outcomes.append(outcome)
        write_sweep_summary([outcome.to_row() for outcome in outcomes],
                            self.output_dir / "sweep_summary.csv")
        return outcomes
