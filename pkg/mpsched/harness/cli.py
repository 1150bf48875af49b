"""
mpsched - Command Line Interface
run, compare, sweep, validate and presets commands

Result tables go to stdout, logs and diagnostics to stderr. Exit codes:
0 success, 1 simulation invariant violation or failed check, 2 bad
configuration or usage.
"""

import functools
import sys
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import click

from mpsched import __version__
from mpsched.core.config import resolve_seeds, settings
from mpsched.core.exceptions import ConfigurationError, SimulationError
from mpsched.core.logging_config import get_logger, setup_logging
from mpsched.harness.runner import ExperimentRunner
from mpsched.harness.summary import format_table
from mpsched.harness.validation import run_checks
from mpsched.scenarios.loader import dump_config, resolve_scenario
from mpsched.scenarios.presets import PRESET_NAMES, preset
from mpsched.scenarios.schemas import ScenarioConfig
from mpsched.schedulers.base import SCHEDULER_NAMES

logger = get_logger(__name__)

QUICK_DURATION_S = 10.0
QUICK_WARMUP_S = 1.0
QUICK_SEEDS = 3
DEFAULT_COMPARISON = ("minsrtt", "queueaware")


def exit_codes(command: Callable) -> Callable:
    """Map domain errors to exit codes with the messages on stderr."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except ConfigurationError as e:
            for message in e.errors:
                click.echo(f"error: {message}", err=True)
            sys.exit(2)
        except SimulationError as e:
            logger.error("simulation failed", error=str(e))
            click.echo(f"simulation error: {e}", err=True)
            sys.exit(1)

    return wrapper


def scenario_options(command: Callable) -> Callable:
    options = [
        click.option("--preset", "preset_name", type=str, default=None, help=f"One of: {', '.join(PRESET_NAMES)}"),
        click.option(
            "--config",
            "config_path",
            type=click.Path(dir_okay=False, path_type=Path),
            default=None,
            help="Scenario file (JSON, or YAML by extension)",
        ),
        click.option(
            "--set",
            "overrides",
            multiple=True,
            metavar="PATH=VALUE",
            help="Override a field, e.g. subflows.2.one_way_delay_s=0.06 (list positions are 1-based)",
        ),
        click.option("--seeds", type=str, default=None, help="Seed list such as 1,2,5-8"),
        click.option(
            "--out",
            type=click.Path(file_okay=False, path_type=Path),
            default=None,
            help="Output directory (default: MPSCHED_OUTPUT_DIR)",
        ),
        click.option("--quick", is_flag=True, help="Short runs over the first seeds, for smoke tests"),
        click.option("--workers", type=click.IntRange(min=1), default=None, help="Parallel seed workers"),
    ]
    for option in reversed(options):
        command = option(command)
    return command


def shorten(scenario: ScenarioConfig) -> ScenarioConfig:
    """Quick variant of a scenario; file transfers keep their horizon."""
    if scenario.is_file_transfer:
        return scenario
    return scenario.model_copy(
        update={
            "duration_s": min(scenario.duration_s, QUICK_DURATION_S),
            "warmup_s": min(scenario.warmup_s, QUICK_WARMUP_S),
        }
    )


def pick_seeds(scenario: ScenarioConfig, cli_seeds: Optional[str], quick: bool) -> List[int]:
    seeds = resolve_seeds(cli_seeds, scenario.seeds)
    if quick and not cli_seeds and not settings.SEEDS:
        seeds = seeds[:QUICK_SEEDS]
    return seeds


def split_names(values: Sequence[str]) -> List[str]:
    """Flatten repeated and comma-separated option values."""
    names: List[str] = []
    for value in values:
        names += [v.strip().lower() for v in value.split(",") if v.strip()]
    return names


def _prepare(
    preset_name: Optional[str],
    config_path: Optional[Path],
    overrides: Tuple[str, ...],
    scheduler: Optional[str],
    seeds: Optional[str],
    quick: bool,
) -> Tuple[ScenarioConfig, List[int]]:
    scenario = resolve_scenario(preset_name, config_path, overrides, scheduler)
    if quick:
        scenario = shorten(scenario)
    return scenario, pick_seeds(scenario, seeds, quick)


@click.group()
@click.version_option(__version__, prog_name="mpsched")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False), default=None)
@click.option("--log-format", type=click.Choice(["json", "console"], case_sensitive=False), default=None)
def cli(log_level: Optional[str], log_format: Optional[str]) -> None:
    """Discrete-event simulator for multipath packet schedulers."""
    if log_level:
        settings.LOG_LEVEL = log_level.upper()
    if log_format:
        settings.LOG_FORMAT = log_format.lower()
    setup_logging(settings.LOG_LEVEL, settings.LOG_FORMAT)


@cli.command()
@scenario_options
@click.option("--scheduler", type=str, default=None, help=f"One of: {', '.join(SCHEDULER_NAMES)}")
@exit_codes
def run(preset_name, config_path, overrides, seeds, out, quick, workers, scheduler) -> None:
    """Run one scheduler over a seed list and write traces and summaries."""
    scenario, seed_list = _prepare(preset_name, config_path, overrides, scheduler, seeds, quick)
    out_dir = out or settings.OUTPUT_DIR
    result = ExperimentRunner(max_workers=workers).run_experiment(scenario, seed_list, out_dir)
    click.echo(format_table(result.summary))
    logger.info("results written", directory=str(result.summary_file.parent), traces=len(result.trace_files))


@cli.command()
@scenario_options
@click.option(
    "--scheduler",
    "schedulers",
    multiple=True,
    help="Scheduler to compare; repeat or comma-separate. The first is the baseline.",
)
@exit_codes
def compare(preset_name, config_path, overrides, seeds, out, quick, workers, schedulers) -> None:
    """Run several schedulers on one scenario and print a comparison."""
    names = split_names(schedulers) or list(DEFAULT_COMPARISON)
    if len(names) < 2:
        raise click.UsageError("compare needs at least two schedulers")
    scenario, seed_list = _prepare(preset_name, config_path, overrides, names[0], seeds, quick)
    for name in names[1:]:
        scenario.with_scheduler(name)
    table = ExperimentRunner(max_workers=workers).compare(scenario, names, seed_list, out or settings.OUTPUT_DIR)
    click.echo(format_table(table))


@cli.command()
@scenario_options
@click.option("--scheduler", "schedulers", multiple=True, help="Scheduler to include; repeat or comma-separate")
@click.option("--param", "parameter", required=True, help="Dotted field to vary, e.g. subflows.2.one_way_delay_s")
@click.option("--values", "values", required=True, help="Comma-separated values, e.g. 0.01,0.03,0.06")
@exit_codes
def sweep(preset_name, config_path, overrides, seeds, out, quick, workers, schedulers, parameter, values) -> None:
    """Compare schedulers across the values of one parameter."""
    names = split_names(schedulers) or list(DEFAULT_COMPARISON)
    points = [v.strip() for v in values.split(",") if v.strip()]
    if not points:
        raise click.UsageError("--values must list at least one value")
    scenario, seed_list = _prepare(preset_name, config_path, overrides, names[0], seeds, quick)
    table = ExperimentRunner(max_workers=workers).sweep(
        scenario, names, parameter, points, seed_list, out or settings.OUTPUT_DIR
    )
    click.echo(format_table(table))


@cli.command()
@click.option("--quick", is_flag=True, help="Subsampled grids and shorter runs")
@click.option("--inject-fault", is_flag=True, hidden=True)
@exit_codes
def validate(quick: bool, inject_fault: bool) -> None:
    """Run the built-in oracle suite."""
    results = run_checks(quick=quick, inject_fault=inject_fault)
    width = max(len(r.name) for r in results)
    for r in results:
        status = "PASS" if r.passed else "FAIL"
        click.echo(f"{status}  {r.name:<{width}}  {r.duration_s:6.2f}s  {r.detail}")
    failed = [r.name for r in results if not r.passed]
    if failed:
        click.echo(f"{len(failed)} of {len(results)} checks failed", err=True)
        sys.exit(1)
    click.echo(f"all {len(results)} checks passed")


@cli.command()
@click.option("--dump", "dump_name", type=str, default=None, help="Print a preset as an editable JSON config")
@exit_codes
def presets(dump_name: Optional[str]) -> None:
    """List the built-in scenarios."""
    if dump_name:
        click.echo(dump_config(preset(dump_name)), nl=False)
        return
    for name in PRESET_NAMES:
        scenario = preset(name)
        links = " + ".join(s.name for s in scenario.subflows)
        load = scenario.load.pattern.value
        click.echo(f"{name:<24} {links:<22} {load}")


def main() -> None:
    cli(prog_name="mpsched")


__all__ = ["cli", "main"]
