"""
Command-line interface for fluxlim
"""

import functools
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

import click
from rich.console import Console
from rich.table import Table

from fluxlim import __version__
from fluxlim.core.config import ExperimentConfig, load_config, parse_override
from fluxlim.core.errors import (
    BlowUpError,
    ConfigError,
    FluxlimError,
    NewtonFailure,
    StiffnessCollapseError,
    SupportError,
)
from fluxlim.core.interfaces import PrincipleReport, Verdict
from fluxlim.experiment import Experiment, ExperimentResult
from fluxlim.scheduler import PointOutcome, SweepRunner

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_FAIL = 2
EXIT_HYPOTHESIS = 3
EXIT_RUNTIME = 4

RUNTIME_ERRORS = (BlowUpError, StiffnessCollapseError, NewtonFailure, SupportError)


def configure_logging(level: Optional[str]):
    logging.basicConfig(level=getattr(logging, (level or "INFO").upper(), logging.INFO),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")


def exit_code(reports: List[PrincipleReport], strict_hypotheses: bool) -> int:
    """0 all Pass, 2 any Fail, 3 HypothesisNotMet under --strict-hypotheses"""
    verdicts = {report.verdict for report in reports}
    if Verdict.FAIL in verdicts:
        return EXIT_FAIL
    if strict_hypotheses and Verdict.HYPOTHESIS_NOT_MET in verdicts:
        return EXIT_HYPOTHESIS
    return EXIT_OK


def guarded(command):
    """Map errors onto the exit-code contract"""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except RUNTIME_ERRORS as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_RUNTIME)
        except (ConfigError, ValueError) as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_CONFIG)
        except FluxlimError as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(EXIT_RUNTIME)
    return wrapper


def _notes(report: PrincipleReport) -> str:
    details = report.details
    if report.verdict == Verdict.HYPOTHESIS_NOT_MET:
        return details.get("reason", "")
    for key in ("l1_distance", "residual", "final_distance", "max_deviation", "worst_increase",
                "max_mass_outside"):
        if isinstance(details.get(key), (int, float)):
            return f"{key}={details[key]:.3e}"
    if "mismatches" in details:
        return "mismatches=" + ", ".join(f"{m:.3e}" for m in details["mismatches"])
    if "residuals" in details:
        return "residuals=" + ", ".join(f"{r:.3e}" for r in details["residuals"])
    return ""


def print_reports(reports: List[PrincipleReport], title: str):
    if not reports:
        click.echo("No checks configured")
        return
    table = Table(title=title)
    table.add_column("Check")
    table.add_column("Verdict")
    table.add_column("Margin", justify="right")
    table.add_column("Tolerance", justify="right")
    table.add_column("Notes")
    styles = {Verdict.PASS: "green", Verdict.FAIL: "red", Verdict.HYPOTHESIS_NOT_MET: "yellow"}
    for report in reports:
        margin = report.measured_margin
        table.add_row(
            report.check_name,
            f"[{styles[report.verdict]}]{report.verdict.value}[/]",
            "-" if margin != margin else f"{margin:.3e}",
            "-" if report.tolerance is None else f"{report.tolerance:.1e}",
            _notes(report),
        )
    Console().print(table)
    counts = {verdict: 0 for verdict in Verdict}
    for report in reports:
        counts[report.verdict] += 1
    click.echo("Verdicts: " + " ".join(f"{v.value}={n}" for v, n in counts.items()))
    for report in reports:
        if "mismatches" in report.details:
            ratios = report.details.get("ratios", [])
            click.echo(f"{report.check_name}: n={report.details['resolutions']} "
                       f"mismatch={['%.3e' % m for m in report.details['mismatches']]} "
                       f"ratio={['-' if r is None else '%.2f' % r for r in ratios]}")


def _load(ctx: click.Context, config_path: str, overrides: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    config = load_config(config_path, overrides)
    configure_logging(ctx.obj.get("log_level") or config.log_level)
    return config


def _experiment(ctx: click.Context, config: ExperimentConfig) -> Experiment:
    output_dir = ctx.obj.get("output_dir")
    return Experiment(config, Path(output_dir) if output_dir else None, seed=ctx.obj["seed"])


def _finish(ctx: click.Context, result: ExperimentResult, title: str):
    print_reports(result.reports, title)
    for caveat in result.caveats:
        click.echo(f"Caveat: {caveat}")
    if result.output_dir is not None:
        click.echo(f"Outputs written to {result.output_dir}")
    ctx.exit(exit_code(result.reports, ctx.obj["strict_hypotheses"]))


@click.group()
@click.version_option(__version__, prog_name="fluxlim")
@click.option('--output-dir', type=click.Path(file_okay=False), default=None,
              help='Output directory (overrides output_dir in the config)')
@click.option('--strict-hypotheses', is_flag=True, help='Exit 3 when a check hypothesis is not met')
@click.option('--seed', default=0, type=int, help='Seed for randomized property sampling')
@click.option('--log-level', default=None, help='Logging level (overrides log_level in the config)')
@click.pass_context
def cli(ctx, output_dir, strict_hypotheses, seed, log_level):
    """Flux-limited drift-diffusion laboratory"""
    ctx.ensure_object(dict)
    ctx.obj.update(output_dir=output_dir, strict_hypotheses=strict_hypotheses, seed=seed,
                   log_level=log_level)


@cli.command()
@click.argument('config_path', type=click.Path(dir_okay=False))
@click.pass_context
@guarded
def solve(ctx, config_path):
    """Run the finite-volume solver and its checks"""
    config = _load(ctx, config_path)
    if config.integrator != "fv":
        raise ConfigError("solve needs integrator fv; use 'fluxlim jko' for JKO runs", key="integrator")
    result = _experiment(ctx, config).run()
    summary = result.summary
    click.echo(f"Solved to t={summary['t_final']:g} in {result.trajectory.metadata['steps']} steps")
    click.echo(f"Final L1 distance to Gibbs: {summary['l1_to_gibbs']:.3e}")
    _finish(ctx, result, "solve checks")


@cli.command()
@click.argument('config_path', type=click.Path(dir_okay=False))
@click.pass_context
@guarded
def jko(ctx, config_path):
    """Run the JKO integrator and its checks"""
    config = _load(ctx, config_path)
    if config.integrator != "jko":
        raise ConfigError("jko needs integrator jko", key="integrator")
    result = _experiment(ctx, config).run()
    summary = result.summary
    iterations = summary.get("newton_iterations", [])
    click.echo(f"JKO: {len(iterations)} steps to t={summary['t_final']:g}, "
               f"Newton iterations per step {iterations}")
    click.echo(f"L1 distance to matched fv run: {summary['l1_to_fv']:.3e}")
    click.echo(f"Final L1 distance to Gibbs: {summary['l1_to_gibbs']:.3e}")
    _finish(ctx, result, "jko checks")


@cli.command()
@click.argument('config_path', type=click.Path(dir_okay=False))
@click.pass_context
@guarded
def verify(ctx, config_path):
    """Run the configured checks and write report.json"""
    config = _load(ctx, config_path)
    if not config.checks:
        raise ConfigError("nothing to verify", key="checks")
    result = _experiment(ctx, config).run_checks_only()
    _finish(ctx, result, "verification")


@cli.command()
@click.argument('config_path', type=click.Path(dir_okay=False))
@click.option('--param', 'params', multiple=True, required=True,
              help='Swept parameter as key=v1,v2,... (repeatable, cartesian product)')
@click.option('--checks-only', is_flag=True, help='Run only the checks at each point')
@click.pass_context
@guarded
def sweep(ctx, config_path, params, checks_only):
    """Run a cartesian parameter sweep concurrently"""
    axes = [parse_override(expression) for expression in params]
    base = _load(ctx, config_path)
    output_dir = Path(ctx.obj["output_dir"]) if ctx.obj.get("output_dir") else base.resolve_path(base.output_dir)
    runner = SweepRunner(Path(config_path), axes, output_dir, workers=base.workers,
                         seed=ctx.obj["seed"], mode="verify" if checks_only else "run")

    def report(outcome: PointOutcome):
        values = ", ".join(f"{k}={v}" for k, v in outcome.point.parameters.items())
        if outcome.status == "error":
            click.echo(f"{outcome.point.label} [{values}]: error: {outcome.error}")
            return
        verdicts = ", ".join(f"{r.check_name}={r.verdict.value} ({_notes(r)})" for r in outcome.reports)
        click.echo(f"{outcome.point.label} [{values}]: {verdicts or 'no checks'}")

    outcomes = runner.run(on_point=report)
    click.echo(f"Sweep summary written to {output_dir / 'sweep_summary.csv'}")

    codes = [exit_code(o.reports, ctx.obj["strict_hypotheses"]) for o in outcomes if o.status == "ok"]
    if any(o.status == "error" for o in outcomes):
        codes.append(EXIT_RUNTIME)
    ctx.exit(max(codes, default=EXIT_OK))


def main():
    cli(obj={})


if __name__ == '__main__':
    main()
