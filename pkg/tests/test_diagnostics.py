import math
import threading
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import pytest

from fluxlim.core.errors import ConfigError
from fluxlim.core.interfaces import InterfaceDensity, PrincipleReport, Verdict
from fluxlim.cost import ClassicalQuadraticCost, RelativisticCost
from fluxlim.diagnostics import (
    CheckContext,
    VerificationEngine,
    check_classical_limit,
    check_comparison_evolutionary,
    check_conservation,
    check_constant_state,
    check_ellipticity,
    check_gibbs_convergence,
    check_lq_identity,
    check_lyapunov,
    check_propagation_speed,
    check_stationary,
    check_stationary_order,
    check_weak_max_evolutionary,
    classical_limit_trend,
    create_check,
    mass_outside,
)
from fluxlim.experiment.initial import mollified_indicator
from fluxlim.geometry import DensityField, Grid1D
from fluxlim.operators import OperatorContext
from fluxlim.potential import PolynomialPotential, ZeroPotential, gibbs_density
from fluxlim.solver import RunConfig, run

from .helpers import gaussian_field


@pytest.fixture
def small_ctx(relativistic, quadratic):
    return OperatorContext(relativistic, quadratic, Grid1D(-4.0, 4.0, 160))


@pytest.fixture
def indicator_run(free_ctx):
    grid = free_ctx.grid
    u0 = DensityField(grid, np.where(np.abs(grid.centers) < 0.5, 1.0, 0.0))
    return run(RunConfig(free_ctx, t_end=1.0, snapshot_times=[0.25, 0.5], positivity_floor=1e-300), u0)


def test_report_evaluation():
    assert PrincipleReport.evaluate("a", [], -0.5e-8, 1e-8).verdict == Verdict.PASS
    assert PrincipleReport.evaluate("a", [], -2e-8, 1e-8).verdict == Verdict.FAIL
    assert PrincipleReport.evaluate("a", [], -0.5e-8, 1e-8, absorbed=True).verdict == Verdict.FAIL
    report = PrincipleReport.hypothesis_not_met("a", ["h"], 1e-8, "because")
    assert report.verdict == Verdict.HYPOTHESIS_NOT_MET
    assert report.to_dict()["margin"] is None
    assert report.to_dict()["details"]["reason"] == "because"


def test_comparison_keeps_order(small_ctx):
    u0 = gaussian_field(small_ctx.grid)
    config = RunConfig(small_ctx, t_end=0.2, snapshot_times=[0.1])
    lower = run(config, u0)
    upper = run(config, DensityField(u0.grid, u0.values + 0.1))
    report = check_comparison_evolutionary(lower, upper)
    assert report.passed, report.details
    assert report.measured_margin > 0

    swapped = check_comparison_evolutionary(upper, lower)
    assert swapped.verdict == Verdict.HYPOTHESIS_NOT_MET
    assert "not ordered" in swapped.details["reason"]


def test_comparison_rejects_mismatched_runs(small_ctx):
    u0 = gaussian_field(small_ctx.grid)
    a = run(RunConfig(small_ctx, t_end=0.1), u0)
    b = run(RunConfig(small_ctx, t_end=0.1, snapshot_times=[0.05]), u0)
    with pytest.raises(ValueError, match="mismatched snapshot times"):
        check_comparison_evolutionary(a, b)


def test_weak_max_for_concave_potential(relativistic):
    grid = Grid1D(-1.0, 1.0, 100)
    potential = PolynomialPotential([0.0, 0.0, -0.5])
    ctx = OperatorContext(relativistic, potential, grid)
    trajectory = run(RunConfig(ctx, t_end=0.05, snapshot_times=[0.025]), gaussian_field(grid, width=0.3))
    report = check_weak_max_evolutionary(trajectory, relativistic, potential, kind="max")
    assert report.check_name == "weak_max"
    assert report.passed, report.details
    minimum = check_weak_max_evolutionary(trajectory, relativistic, potential, kind="min")
    assert minimum.check_name == "weak_min"
    assert minimum.verdict == Verdict.HYPOTHESIS_NOT_MET


def test_weak_max_rejects_unknown_kind(indicator_run, relativistic):
    with pytest.raises(ValueError):
        check_weak_max_evolutionary(indicator_run, relativistic, ZeroPotential(), kind="mean")


LIGHT_CONE_GRID = Grid1D(-4.0, 4.0, 800)


def light_cone_ctx(c, density=InterfaceDensity.LIMITED):
    return OperatorContext(RelativisticCost(c), ZeroPotential(), LIGHT_CONE_GRID, interface_density=density)


@pytest.fixture(scope="module", params=[1.0, 0.5], ids=["c=1", "c=0.5"])
def light_cone_run(request):
    u0 = mollified_indicator(LIGHT_CONE_GRID, -0.5, 0.5)
    return run(RunConfig(light_cone_ctx(request.param), t_end=1.0, snapshot_times=[0.5]), u0)


def test_limited_front_stays_in_light_cone(light_cone_run):
    c = light_cone_run.config.ctx.cost.speed_bound
    dx = LIGHT_CONE_GRID.dx
    for t, u in light_cone_run.snapshots:
        edge = 0.5 + c * t + 5 * dx
        assert mass_outside(u, -edge, edge) <= 1e-8, t

    report = check_propagation_speed(light_cone_run)
    assert report.passed, report.details
    assert report.details["max_mass_outside"] <= 1e-8
    radii = report.details["radii"]
    assert radii[-1] > radii[0] + 0.5 * c
    assert all(r <= b for r, b in zip(radii, report.details["bounds"]))


def test_upwind_front_outruns_light_cone():
    u0 = mollified_indicator(LIGHT_CONE_GRID, -0.5, 0.5)
    trajectory = run(RunConfig(light_cone_ctx(1.0, InterfaceDensity.UPWIND), t_end=1.0), u0)
    report = check_propagation_speed(trajectory)
    assert report.verdict == Verdict.FAIL
    assert report.measured_margin < 0
    assert report.details["max_mass_outside"] > 1e-8


def test_mass_outside(free_ctx):
    grid = free_ctx.grid
    u = DensityField(grid, np.ones(grid.n_cells))
    assert mass_outside(u, -10.0, 10.0) == 0.0
    assert mass_outside(u, 0.0, 5.0) == pytest.approx(5.0)


def test_propagation_needs_bounded_cost_and_zero_potential(small_ctx):
    u0 = gaussian_field(small_ctx.grid)
    trajectory = run(RunConfig(small_ctx, t_end=0.05), u0)
    assert check_propagation_speed(trajectory).verdict == Verdict.HYPOTHESIS_NOT_MET
    classical = run(RunConfig(small_ctx.with_options(cost=ClassicalQuadraticCost(), potential=ZeroPotential()),
                              t_end=0.05), u0)
    report = check_propagation_speed(classical)
    assert report.verdict == Verdict.HYPOTHESIS_NOT_MET
    assert "infinite speed" in report.details["reason"]


def test_stationary_gibbs(ctx):
    assert check_stationary(gibbs_density(ctx.potential, ctx.grid), ctx).passed
    report = check_stationary(gaussian_field(ctx.grid, center=2.0, width=0.3), ctx)
    assert report.verdict == Verdict.FAIL


def test_stationary_order(ctx):
    report = check_stationary_order(ctx)
    assert report.passed, report.details
    assert all(r < 1e-9 for r in report.details["residuals"])


def test_lq_identity_report(ctx):
    report = check_lq_identity(ctx, lambda x: 1.0 + 0.5 * np.exp(-x ** 2), resolutions=[400, 800])
    assert report.passed, report.details
    assert report.details["mismatches"][1] < report.details["mismatches"][0]
    assert report.details["ratios"][0] > 3.0


def test_constant_state(ctx):
    report = check_constant_state(ctx)
    assert report.passed
    assert report.details["sign"] == "NonNegative"
    assert report.details["constants_are"] == "subsolution"


def test_run_structure_checks(small_ctx):
    trajectory = run(RunConfig(small_ctx, t_end=0.3), gaussian_field(small_ctx.grid, center=0.8))
    for report in (check_ellipticity(trajectory), check_lyapunov(trajectory), check_conservation(trajectory)):
        assert report.passed, (report.check_name, report.details)
    assert check_lyapunov(trajectory).details["measure"] == "per unit time"


def test_gibbs_convergence(small_ctx):
    trajectory = run(RunConfig(small_ctx, t_end=6.0, snapshot_times=[1.0, 2.0, 4.0]),
                     gaussian_field(small_ctx.grid, center=0.5))
    report = check_gibbs_convergence(trajectory, small_ctx.potential)
    assert report.passed, report.details
    trace = report.details["distance_trace"]
    assert trace[-1] < trace[0]


def test_classical_limit(quadratic):
    grid = Grid1D(-4.0, 4.0, 120)
    u0 = gaussian_field(grid, center=0.5, width=0.8)
    report = check_classical_limit(RelativisticCost(100.0), quadratic, u0, t=0.2)
    assert report.passed, report.details
    trend = classical_limit_trend([RelativisticCost(c) for c in (10.0, 1.0, 100.0)], quadratic, u0, t=0.2)
    assert trend["speeds"] == [1.0, 10.0, 100.0]
    assert trend["monotone"]


def test_engine_keeps_registration_order(small_ctx):
    u0 = gaussian_field(small_ctx.grid)
    config = RunConfig(small_ctx, t_end=0.1)
    context = CheckContext(ctx=small_ctx, u0=u0, run_config=config)
    engine = VerificationEngine(max_workers=3)
    for name in ("conservation", "constant_state", "lyapunov", "ellipticity"):
        engine.register_check(create_check(name))
    reports = engine.run(context)
    assert [r.check_name for r in reports] == ["conservation", "constant_state", "lyapunov", "ellipticity"]
    assert all(r.passed for r in reports)
    with pytest.raises(TypeError):
        engine.register_check("lyapunov")


def test_check_context_computes_distinct_runs_concurrently(small_ctx):
    context = CheckContext(ctx=small_ctx, u0=gaussian_field(small_ctx.grid),
                           run_config=RunConfig(small_ctx, t_end=0.1))
    # each computation waits for the other one to start, so serialized keys would time out
    barrier = threading.Barrier(2, timeout=10.0)
    calls = []

    def compute(key):
        calls.append(key)
        barrier.wait()
        return {"key": key}

    with ThreadPoolExecutor(max_workers=4) as pool:
        results = list(pool.map(lambda key: context._cached(key, lambda: compute(key)), ["a", "b", "a", "b"]))
    assert sorted(calls) == ["a", "b"]
    assert results[0] is results[2] and results[1] is results[3]
    assert results[0] == {"key": "a"}


def test_check_context_remembers_failures(small_ctx):
    context = CheckContext(ctx=small_ctx, u0=gaussian_field(small_ctx.grid),
                           run_config=RunConfig(small_ctx, t_end=0.1))
    calls = []

    def explode():
        calls.append(1)
        raise FloatingPointError("overflow")

    for _ in range(2):
        with pytest.raises(FloatingPointError):
            context._cached("fv:separate", explode)
    assert calls == [1]


def test_create_check_validation():
    with pytest.raises(ConfigError, match="unknown check"):
        create_check("entropy_production")
    with pytest.raises(ConfigError, match="unknown parameter"):
        create_check("comparison", offset=0.1, scale=2.0)
    check = create_check("propagation", slack_cells=2)
    assert check.params["threshold"] == 1e-10
    assert math.isclose(check.tolerance, 0.0)
