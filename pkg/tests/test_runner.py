from __future__ import annotations

from pathlib import Path

import pytest
import structlog

from mpsched.core.exceptions import ConfigurationError
from mpsched.harness.runner import ExperimentRunner
from tests.conftest import build_scenario

pytestmark = pytest.mark.integration


@pytest.fixture
def short_scenario():
    return build_scenario(name="short", duration_s=2.0, warmup_s=0.5)


def test_experiment_writes_one_trace_per_seed_and_summaries(tmp_path: Path, short_scenario) -> None:
    runner = ExperimentRunner(max_workers=1, show_progress=False)
    result = runner.run_experiment(short_scenario, [1, 2, 3], tmp_path)

    base = tmp_path / "short" / "queueaware"
    assert sorted(p.name for p in base.glob("trace_seed*.csv")) == [
        "trace_seed1.csv",
        "trace_seed2.csv",
        "trace_seed3.csv",
    ]
    assert result.runs_file == base / "runs.csv"
    assert result.summary_file == base / "summary.csv"
    assert list(result.runs["seed"]) == [1, 2, 3]
    assert result.summary.loc[0, "seeds"] == 3
    assert runner.stats == {"total_runs": 3, "completed_runs": 3, "failed_runs": 0}


def test_process_pool_matches_in_process_results(short_scenario) -> None:
    serial = ExperimentRunner(max_workers=1, show_progress=False).run_many(short_scenario, [3, 1, 2])
    pooled = ExperimentRunner(max_workers=2, show_progress=False).run_many(short_scenario, [3, 1, 2])
    assert [r.seed for r in pooled] == [3, 1, 2]
    for a, b in zip(serial, pooled):
        assert a.summary == b.summary
        assert a.trace.equals(b.trace)


def test_in_process_seeds_leave_no_log_context_behind(short_scenario) -> None:
    ExperimentRunner(max_workers=1, show_progress=False).run_many(short_scenario, [1, 2])
    assert structlog.contextvars.get_contextvars() == {}


def test_failed_seed_is_counted_and_raised(mocker, short_scenario) -> None:
    mocker.patch("mpsched.harness.runner.run_scenario", side_effect=RuntimeError("boom"))
    runner = ExperimentRunner(max_workers=1, show_progress=False)
    with pytest.raises(RuntimeError, match="boom"):
        runner.run_many(short_scenario, [1])
    assert runner.stats["failed_runs"] == 1


def test_compare_needs_two_schedulers(short_scenario) -> None:
    with pytest.raises(ConfigurationError, match="at least two"):
        ExperimentRunner(show_progress=False).compare(short_scenario, ["queueaware"], [1])


def test_compare_writes_table(tmp_path: Path, short_scenario) -> None:
    table = ExperimentRunner(max_workers=1, show_progress=False).compare(
        short_scenario, ["minsrtt", "queueaware"], [1, 2], tmp_path
    )
    assert list(table["scheduler"]) == ["minsrtt", "queueaware"]
    assert table.loc[0, "ratio_to_baseline"] == 1.0
    assert (tmp_path / "short" / "compare.csv").exists()


def test_sweep_varies_one_parameter(tmp_path: Path, short_scenario) -> None:
    table = ExperimentRunner(max_workers=1, show_progress=False).sweep(
        short_scenario,
        ["minsrtt", "queueaware"],
        "subflows.2.one_way_delay_s",
        ["0.01", "0.06"],
        [1],
        tmp_path,
    )
    assert list(table["value"]) == ["0.01", "0.01", "0.06", "0.06"]
    assert set(table["parameter"]) == {"subflows.2.one_way_delay_s"}
    assert (tmp_path / "short" / "sweep.csv").exists()


def test_sweep_rejects_invalid_values(short_scenario) -> None:
    with pytest.raises(ConfigurationError, match="subflows.1.per"):
        ExperimentRunner(show_progress=False).sweep(short_scenario, ["jsq", "queueaware"], "subflows.1.per", ["1.5"], [1])
