"""
JKO time stepping in quantile coordinates.

For quantile positions X (levels (j - 1/2)/M) and the previous iterate Xp
the step minimizes

    S(X) + h W(X, Xp),
    S(X) = -(1/M) sum log(M dX) - 1 + (1/M) sum V(X_j),
    W(X, Xp) = (1/M) sum phi((X_j - Xp_j) / h).

The index-matched coupling is optimal for convex displacement costs in 1-D,
so W needs no inner transport solve. The Hessian is tridiagonal and is
factored with a banded Cholesky.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional

import numpy as np
from scipy.linalg import LinAlgError, solveh_banded

from fluxlim.core.errors import NewtonFailure
from fluxlim.cost import CostFunction
from fluxlim.geometry import (
    DensityField,
    Grid1D,
    QuantileField,
    density_to_quantiles,
    mass,
    quantiles_to_density,
)
from fluxlim.potential import Potential
from fluxlim.solver import StepRecord, Trajectory

logger = logging.getLogger(__name__)

MIN_QUANTILES = 8
ARMIJO = 1e-4
BACKTRACK = 0.5
MAX_BACKTRACKS = 60


@dataclass
class JkoConfig:
    """One JKO minimization problem family"""
    cost: CostFunction
    potential: Potential
    h: float
    M: int
    newton_tol: float = 1e-10
    max_newton_iters: int = 100

    def __post_init__(self):
        if not self.h > 0:
            raise ValueError(f"time step h must be positive, got {self.h}")
        if int(self.M) != self.M or self.M < MIN_QUANTILES:
            raise ValueError(f"M too small: need at least {MIN_QUANTILES} quantiles, got {self.M}")
        if not self.newton_tol > 0:
            raise ValueError(f"newton_tol must be positive, got {self.newton_tol}")
        if self.max_newton_iters < 1:
            raise ValueError(f"max_newton_iters must be >= 1, got {self.max_newton_iters}")

    @property
    def max_displacement(self) -> float:
        return self.h * self.cost.domain_radius

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cost": self.cost.describe(),
            "potential": self.potential.spec(),
            "h": self.h,
            "M": self.M,
            "newton_tol": self.newton_tol,
            "max_newton_iters": self.max_newton_iters,
        }


@dataclass
class JkoStepResult:
    positions: QuantileField
    iterations: int
    grad_norm: float
    objective: float
    hessian_positive_definite: bool
    max_displacement: float


def _positions(X) -> np.ndarray:
    return X.positions if isinstance(X, QuantileField) else np.asarray(X, dtype=float)


def _feasible(cfg: JkoConfig, x: np.ndarray, xp: np.ndarray) -> bool:
    if np.any(np.diff(x) <= 0) or not np.all(np.isfinite(x)):
        return False
    if cfg.cost.is_bounded and np.any(np.abs(x - xp) >= cfg.max_displacement):
        return False
    return True


def quantile_free_energy(cfg: JkoConfig, X) -> float:
    """Spacing entropy estimator plus potential energy, S(X) above"""
    x = _positions(X)
    M = x.size
    gaps = np.diff(x)
    if np.any(gaps <= 0):
        return np.inf
    entropy = -np.sum(np.log(M * gaps)) / M - 1.0
    return float(entropy + np.sum(cfg.potential.value(x)) / M)


def transport_cost(cfg: JkoConfig, X, X_prev) -> float:
    """W(X, Xp) for the monotone coupling; +inf at or beyond the cost domain"""
    x, xp = _positions(X), _positions(X_prev)
    if cfg.cost.is_bounded and np.any(np.abs(x - xp) >= cfg.max_displacement):
        return np.inf
    return float(np.sum(cfg.cost.primal_value((x - xp) / cfg.h)) / x.size)


def jko_objective(cfg: JkoConfig, X, X_prev) -> float:
    """S(X) + h W(X, Xp)"""
    x, xp = _positions(X), _positions(X_prev)
    if x.shape != xp.shape:
        raise ValueError("quantile fields differ in size")
    if not _feasible(cfg, x, xp):
        return np.inf
    return quantile_free_energy(cfg, x) + cfg.h * transport_cost(cfg, x, xp)


def jko_gradient(cfg: JkoConfig, X, X_prev) -> np.ndarray:
    x, xp = _positions(X), _positions(X_prev)
    M = x.size
    inverse_gaps = 1.0 / np.diff(x)
    grad = np.zeros(M)
    grad[:-1] += inverse_gaps
    grad[1:] -= inverse_gaps
    grad += cfg.potential.grad(x)
    grad += cfg.cost.primal_slope((x - xp) / cfg.h)
    return grad / M


def jko_hessian_banded(cfg: JkoConfig, X, X_prev) -> np.ndarray:
    """Upper banded storage (2, M) of the tridiagonal Hessian"""
    x, xp = _positions(X), _positions(X_prev)
    M = x.size
    coupling = 1.0 / np.diff(x) ** 2
    diag = np.zeros(M)
    diag[:-1] += coupling
    diag[1:] += coupling
    diag += cfg.potential.hess(x)
    diag += cfg.cost.primal_curvature((x - xp) / cfg.h) / cfg.h
    banded = np.zeros((2, M))
    banded[0, 1:] = -coupling / M
    banded[1] = diag / M
    return banded


def _newton_direction(banded: np.ndarray, grad: np.ndarray):
    """Solve H p = -g, shifting the diagonal while H is indefinite"""
    try:
        return solveh_banded(banded, -grad), True
    except LinAlgError:
        pass
    scale = float(np.max(np.abs(banded[1])))
    shift = 1e-8 * scale
    while shift < 1e8 * scale:
        shifted = banded.copy()
        shifted[1] += shift
        try:
            return solveh_banded(shifted, -grad), False
        except LinAlgError:
            shift *= 10.0
    return -grad, False


def solve_jko_step(cfg: JkoConfig, X_prev: QuantileField, step: int = 0) -> JkoStepResult:
    """Damped Newton with backtracking from X_prev"""
    xp = _positions(X_prev)
    x = xp.copy()
    value = jko_objective(cfg, x, xp)
    grad = jko_gradient(cfg, x, xp)
    grad_norm = float(np.linalg.norm(grad))
    iterations = 0

    while grad_norm > cfg.newton_tol:
        if iterations >= cfg.max_newton_iters:
            raise NewtonFailure(step, QuantileField(x), grad_norm)
        direction, _ = _newton_direction(jko_hessian_banded(cfg, x, xp), grad)
        slope = float(grad @ direction)
        if slope >= 0:
            direction, slope = -grad, -float(grad @ grad)

        alpha = 1.0
        accepted = False
        fallback = None
        for _ in range(MAX_BACKTRACKS):
            trial = x + alpha * direction
            trial_value = jko_objective(cfg, trial, xp)
            if trial_value <= value + ARMIJO * alpha * slope:
                accepted = True
                break
            # near convergence the decrease drowns in rounding
            if fallback is None and trial_value <= value + 1e-14 * max(1.0, abs(value)):
                fallback = (trial, trial_value)
            alpha *= BACKTRACK
        if not accepted:
            if fallback is None:
                raise NewtonFailure(step, QuantileField(x), grad_norm, reason="line search stalled")
            trial, trial_value = fallback

        x, value = trial, trial_value
        grad = jko_gradient(cfg, x, xp)
        new_norm = float(np.linalg.norm(grad))
        iterations += 1
        logger.debug(f"JKO step {step} Newton iteration {iterations}: "
                     f"objective={value:.12g}, |grad|={new_norm:.3e}, alpha={alpha:.3g}")
        if not accepted and new_norm >= grad_norm:
            raise NewtonFailure(step, QuantileField(x), new_norm, reason="line search stalled")
        grad_norm = new_norm

    try:
        solveh_banded(jko_hessian_banded(cfg, x, xp), grad)
        positive_definite = True
    except LinAlgError:
        positive_definite = False

    return JkoStepResult(
        positions=QuantileField(x),
        iterations=iterations,
        grad_norm=grad_norm,
        objective=value,
        hessian_positive_definite=positive_definite,
        max_displacement=float(np.max(np.abs(x - xp))),
    )


def jko_step(cfg: JkoConfig, X_prev: QuantileField) -> QuantileField:
    """Minimizer of the JKO objective started from X_prev"""
    return solve_jko_step(cfg, X_prev).positions


@dataclass
class JkoRunStats:
    """Per-step Newton and energy bookkeeping stored in trajectory metadata"""
    newton_iterations: List[int] = field(default_factory=list)
    grad_norms: List[float] = field(default_factory=list)
    free_energies: List[float] = field(default_factory=list)
    max_displacements: List[float] = field(default_factory=list)
    hessian_positive_definite: List[bool] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "newton_iterations": self.newton_iterations,
            "grad_norms": self.grad_norms,
            "free_energies": self.free_energies,
            "max_displacements": self.max_displacements,
            "hessian_positive_definite": self.hessian_positive_definite,
        }


def _record(trajectory: Trajectory, step: int, t: float, h: float, u: DensityField, energy: float):
    trajectory.step_log.append(StepRecord(
        step=step, t=t, dt=h, mass=mass(u),
        min_density=float(np.min(u.values)), max_density=float(np.max(u.values)),
        free_energy=energy,
    ))


def jko_run(cfg: JkoConfig, u0: DensityField, n_steps: int, grid: Optional[Grid1D] = None) -> Trajectory:
    """Iterate jko_step n_steps times from the quantiles of u0.

    Snapshots are the reconstructed densities at t_k = k h on ``grid``
    (defaults to the grid of u0).
    """
    if n_steps < 1:
        raise ValueError(f"n_steps must be >= 1, got {n_steps}")
    grid = grid or u0.grid
    total = mass(u0)
    if not total > 0:
        raise ValueError("empty density")
    if abs(total - 1.0) > 1e-12:
        logger.info(f"Renormalizing JKO initial data from mass {total:.12g} to 1")
        u0 = DensityField(u0.grid, u0.values / total)

    X = density_to_quantiles(u0, cfg.M)
    trajectory = Trajectory(cfg, integrator="jko")
    stats = JkoRunStats()
    caveats = []

    energy = quantile_free_energy(cfg, X)
    stats.free_energies.append(energy)
    u = quantiles_to_density(X, grid)
    trajectory.add_snapshot(0.0, u)
    _record(trajectory, 0, 0.0, cfg.h, u, energy)

    logger.info(f"Starting jko run: h={cfg.h}, M={cfg.M}, steps={n_steps}, "
                f"cost={cfg.cost.name}, potential={cfg.potential.spec()}")

    for k in range(1, n_steps + 1):
        result = solve_jko_step(cfg, X, step=k)
        X = result.positions
        energy = quantile_free_energy(cfg, X)
        stats.newton_iterations.append(result.iterations)
        stats.grad_norms.append(result.grad_norm)
        stats.free_energies.append(energy)
        stats.max_displacements.append(result.max_displacement)
        stats.hessian_positive_definite.append(result.hessian_positive_definite)

        if not caveats and np.any(cfg.potential.hess(X.positions) < 0):
            caveats.append("non-convex potential: JKO steps may return local minima")
            logger.warning(f"Local-minimum caveat at step {k}: potential {cfg.potential.spec()} "
                           f"is not convex on the quantile support")

        t = k * cfg.h
        u = quantiles_to_density(X, grid)
        trajectory.add_snapshot(t, u)
        _record(trajectory, k, t, cfg.h, u, energy)
        logger.debug(f"JKO step {k}: {result.iterations} Newton iterations, F={energy:.12g}")

    trajectory.metadata.update({
        "integrator": "jko",
        "steps": n_steps,
        "initial_mass": total,
        "caveats": caveats,
        "final_quantiles": X.positions.tolist(),
        **stats.to_dict(),
    })
    logger.info(f"Finished jko run: {sum(stats.newton_iterations)} Newton iterations in total")
    return trajectory
