"""Experiment harness: runner, CSV output, summaries and the oracle suite."""

from mpsched.harness.csv_io import read_csv, trace_path, trace_to_frame, write_csv_atomic
from mpsched.harness.runner import ExperimentResult, ExperimentRunner, SeedRun, run_scenario
from mpsched.harness.summary import aggregate_runs, compare_table, format_table, run_summary, summarize_trace
from mpsched.harness.validation import CheckResult, run_checks

__all__ = [
    "read_csv",
    "trace_path",
    "trace_to_frame",
    "write_csv_atomic",
    "ExperimentResult",
    "ExperimentRunner",
    "SeedRun",
    "run_scenario",
    "aggregate_runs",
    "compare_table",
    "format_table",
    "run_summary",
    "summarize_trace",
    "CheckResult",
    "run_checks",
]
