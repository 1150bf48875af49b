"""
mpsched - Experiment Runner
Executes seed sweeps of a scenario on a worker pool and writes result files
"""

import sys
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from tqdm import tqdm

from mpsched.core.config import settings
from mpsched.core.exceptions import ConfigurationError
from mpsched.core.logging_config import get_logger, run_context, setup_logging
from mpsched.harness.csv_io import trace_path, trace_to_frame, write_csv_atomic
from mpsched.harness.summary import aggregate_runs, compare_table, run_summary, runs_frame
from mpsched.protocol.connection import simulate_connection
from mpsched.scenarios.loader import apply_override
from mpsched.scenarios.schemas import ScenarioConfig, validate

logger = get_logger(__name__)


@dataclass
class SeedRun:
    """One (scenario, scheduler, seed) execution and its outputs"""
    scenario: ScenarioConfig
    seed: int
    trace: Optional[pd.DataFrame] = None
    summary: Optional[Dict[str, Any]] = None


@dataclass
class ExperimentResult:
    """Tables and file paths produced for one scenario/scheduler pair"""
    scenario: ScenarioConfig
    runs: pd.DataFrame
    summary: pd.DataFrame
    trace_files: List[Path] = field(default_factory=list)
    runs_file: Optional[Path] = None
    summary_file: Optional[Path] = None


def run_scenario(scenario: ScenarioConfig, seed: int) -> SeedRun:
    """
    Simulate one seed and summarise it.

    Args:
        scenario: Validated scenario
        seed: Run seed

    Returns:
        Completed SeedRun with its trace table and RunSummary row
    """
    with run_context(scenario=scenario.name, scheduler=scenario.scheduler, seed=seed):
        logger.debug("seed run started")
        result = simulate_connection(scenario, seed)
        trace = trace_to_frame(result.trace)
        summary = run_summary(result, trace, scenario.warmup_s)
        logger.debug(
            "seed run finished",
            aggregate_goodput_bps=summary["aggregate_goodput_bps"],
            local_drops=result.local_drops,
            retransmissions=result.retransmissions,
        )
    return SeedRun(scenario=scenario, seed=seed, trace=trace, summary=summary)


def _worker_init(level: str, fmt: str) -> None:
    setup_logging(level, fmt)


class ExperimentRunner:
    """
    Runs seeds of a scenario, in-process or on a process pool.

    Seeds are independent; results are returned in seed order whatever the
    completion order. Progress is reported on stderr.
    """

    def __init__(self, max_workers: Optional[int] = None, show_progress: bool = True):
        self.max_workers = max_workers or settings.WORKERS
        self.show_progress = show_progress
        self.stats = {
            "total_runs": 0,
            "completed_runs": 0,
            "failed_runs": 0,
        }

    def run_many(self, scenario: ScenarioConfig, seeds: Sequence[int]) -> List[SeedRun]:
        """
        Execute every seed.

        Raises:
            Exception: The first failure of any seed, after logging it
        """
        seeds = list(seeds)
        self.stats["total_runs"] += len(seeds)
        progress = tqdm(
            total=len(seeds),
            desc=f"{scenario.name}/{scenario.scheduler}",
            file=sys.stderr,
            disable=not self.show_progress,
            leave=False,
        )
        runs: Dict[int, SeedRun] = {}
        try:
            if self.max_workers <= 1 or len(seeds) <= 1:
                for seed in seeds:
                    runs[seed] = self._guarded(scenario, seed)
                    progress.update(1)
            else:
                workers = min(self.max_workers, len(seeds))
                with ProcessPoolExecutor(
                    max_workers=workers,
                    initializer=_worker_init,
                    initargs=(settings.LOG_LEVEL, settings.LOG_FORMAT),
                ) as pool:
                    futures = {pool.submit(run_scenario, scenario, seed): seed for seed in seeds}
                    for future in as_completed(futures):
                        seed = futures[future]
                        try:
                            runs[seed] = future.result()
                        except Exception as e:
                            self._record_failure(scenario, seed, e)
                            raise
                        self.stats["completed_runs"] += 1
                        progress.update(1)
        finally:
            progress.close()
        return [runs[seed] for seed in seeds]

    def _guarded(self, scenario: ScenarioConfig, seed: int) -> SeedRun:
        try:
            run = run_scenario(scenario, seed)
        except Exception as e:
            self._record_failure(scenario, seed, e)
            raise
        self.stats["completed_runs"] += 1
        return run

    def _record_failure(self, scenario: ScenarioConfig, seed: int, error: Exception) -> None:
        self.stats["failed_runs"] += 1
        logger.error(
            "seed run failed",
            scenario=scenario.name,
            scheduler=scenario.scheduler,
            seed=seed,
            error=str(error),
        )

    def run_experiment(
        self,
        scenario: ScenarioConfig,
        seeds: Sequence[int],
        out_dir: Optional[Path] = None,
    ) -> ExperimentResult:
        """
        Run all seeds and, when ``out_dir`` is given, write
        ``<out>/<scenario>/<scheduler>/`` trace_seed<N>.csv, runs.csv and summary.csv.
        """
        logger.info("experiment started", scenario=scenario.name, scheduler=scenario.scheduler, seeds=len(seeds))
        seed_runs = self.run_many(scenario, seeds)
        runs = runs_frame([r.summary for r in seed_runs], scenario.is_file_transfer)
        summary = aggregate_runs(runs)
        result = ExperimentResult(scenario=scenario, runs=runs, summary=summary)

        if out_dir is not None:
            base = Path(out_dir) / scenario.name / scenario.scheduler
            for r in seed_runs:
                result.trace_files.append(
                    write_csv_atomic(r.trace, trace_path(out_dir, scenario.name, scenario.scheduler, r.seed))
                )
            result.runs_file = write_csv_atomic(runs, base / "runs.csv")
            result.summary_file = write_csv_atomic(summary, base / "summary.csv")

        logger.info(
            "experiment finished",
            scenario=scenario.name,
            scheduler=scenario.scheduler,
            aggregate_goodput_bps=float(summary["aggregate_goodput_bps_mean"].iloc[0]),
        )
        return result

    def compare(
        self,
        scenario: ScenarioConfig,
        schedulers: Sequence[str],
        seeds: Sequence[int],
        out_dir: Optional[Path] = None,
    ) -> pd.DataFrame:
        """
        Run the same scenario under several schedulers.

        The first scheduler is the baseline of the ratio column. Writes
        ``<out>/<scenario>/compare.csv`` when ``out_dir`` is given.
        """
        if len(schedulers) < 2:
            raise ConfigurationError(["schedulers: compare needs at least two schedulers"])
        summaries = [
            self.run_experiment(scenario.with_scheduler(name), seeds, out_dir).summary for name in schedulers
        ]
        table = compare_table(summaries)
        if out_dir is not None:
            write_csv_atomic(table, Path(out_dir) / scenario.name / "compare.csv")
        return table

    def sweep(
        self,
        scenario: ScenarioConfig,
        schedulers: Sequence[str],
        parameter: str,
        values: Sequence[Any],
        seeds: Sequence[int],
        out_dir: Optional[Path] = None,
    ) -> pd.DataFrame:
        """
        Compare schedulers over several values of one dotted parameter.

        Writes ``<out>/<scenario>/sweep.csv`` when ``out_dir`` is given.
        """
        tables = []
        for value in values:
            raw = scenario.model_dump(mode="json")
            apply_override(raw, f"{parameter}={value}")
            variant = validate(raw)
            summaries = [self.run_experiment(variant.with_scheduler(name), seeds).summary for name in schedulers]
            table = compare_table(summaries)
            table.insert(0, "parameter", parameter)
            table.insert(1, "value", value)
            tables.append(table)
        sweep = pd.concat(tables, ignore_index=True)
        if out_dir is not None:
            write_csv_atomic(sweep, Path(out_dir) / scenario.name / "sweep.csv")
        return sweep


__all__ = [
    "SeedRun",
    "ExperimentResult",
    "run_scenario",
    "ExperimentRunner",
]
