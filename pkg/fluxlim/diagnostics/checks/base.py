"""
Base class for pluggable checks and the shared context they run against
"""

import logging
import threading
from abc import ABC, abstractmethod
from concurrent.futures import Future
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Dict, Optional

from fluxlim.core.errors import ConfigError
from fluxlim.core.interfaces import FluxMode, PrincipleReport
from fluxlim.geometry import DensityField
from fluxlim.jko import JkoConfig, jko_run
from fluxlim.operators import OperatorContext
from fluxlim.solver import RunConfig, Trajectory, run

logger = logging.getLogger(__name__)


@dataclass
class CheckContext:
    """Inputs shared by all checks of one experiment.

    ``trajectory`` is the primary run; auxiliary finite-volume and JKO runs
    are computed on first use and cached.
    """
    ctx: OperatorContext
    u0: DensityField
    run_config: RunConfig
    trajectory: Optional[Trajectory] = None
    jko_config: Optional[JkoConfig] = None
    jko_steps: int = 0
    integrator: str = "fv"
    seed: int = 0
    _cache: Dict[str, Future] = field(default_factory=dict, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def _cached(self, key: str, compute: Callable[[], Any]) -> Any:
        """Compute each key once; other threads asking for it wait on its future only"""
        with self._lock:
            future = self._cache.get(key)
            owner = future is None
            if owner:
                future = self._cache[key] = Future()
        if owner:
            logger.debug(f"Computing auxiliary run {key}")
            try:
                future.set_result(compute())
            except BaseException as e:
                future.set_exception(e)
        return future.result()

    def rerun(self, u0: Optional[DensityField] = None, **ctx_changes) -> Trajectory:
        """Finite-volume run with the experiment's run parameters"""
        config = replace(self.run_config, ctx=self.run_config.ctx.with_options(**ctx_changes))
        return run(config, u0 if u0 is not None else self.u0)

    def fv_trajectory(self, flux_mode: Optional[FluxMode] = None,
                      t_end: Optional[float] = None) -> Trajectory:
        """Finite-volume run in the given flux mode, optionally to another end time"""
        mode = flux_mode or self.ctx.flux_mode
        t_end = self.run_config.t_end if t_end is None else t_end
        primary = self.trajectory
        if (primary is not None and primary.integrator == "fv"
                and primary.config.ctx.flux_mode == mode and primary.config.t_end == t_end):
            return primary
        if t_end == self.run_config.t_end:
            return self._cached(f"fv:{mode.value}", lambda: self.rerun(flux_mode=mode))
        config = replace(self.run_config, ctx=self.run_config.ctx.with_options(flux_mode=mode),
                         t_end=t_end, snapshot_times=[])
        return self._cached(f"fv:{mode.value}:{t_end!r}", lambda: run(config, self.u0))

    def jko_trajectory(self) -> Optional[Trajectory]:
        primary = self.trajectory
        if primary is not None and primary.integrator == "jko":
            return primary
        if self.jko_config is None or self.jko_steps < 1:
            return None
        return self._cached("jko", lambda: jko_run(self.jko_config, self.u0, self.jko_steps, self.ctx.grid))

    def primary(self) -> Trajectory:
        """The configured integrator's run"""
        if self.trajectory is not None:
            return self.trajectory
        if self.integrator == "jko":
            jko = self.jko_trajectory()
            if jko is not None:
                return jko
        return self.fv_trajectory()


class PrincipleCheck(ABC):
    """A named verification run against a CheckContext.

    Subclasses declare their parameters with defaults in ``PARAMS``;
    unknown parameters are rejected at construction.
    """

    name: str = "check"
    default_tolerance: float = 1e-8
    PARAMS: Dict[str, Any] = {}

    def __init__(self, tolerance: Optional[float] = None, **params):
        unknown = sorted(set(params) - set(self.PARAMS))
        if unknown:
            raise ConfigError(f"unknown parameter '{unknown[0]}' for check '{self.name}'",
                              key=f"checks.{self.name}.{unknown[0]}")
        self.tolerance = self.default_tolerance if tolerance is None else float(tolerance)
        self.params = {**self.PARAMS, **params}

    def get_name(self) -> str:
        return self.name

    @abstractmethod
    def check(self, context: CheckContext) -> PrincipleReport:
        """Run the check"""
        pass

    def __repr__(self) -> str:
        return f"{type(self).__name__}(tolerance={self.tolerance}, params={self.params})"
