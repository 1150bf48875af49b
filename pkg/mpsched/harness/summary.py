"""
mpsched - Run Summaries
Per-seed RunSummary rows, seed aggregates and scheduler comparisons
"""

from typing import Dict, List, Optional, Sequence

import numpy as np
import pandas as pd

from mpsched.protocol.connection import ConnectionResult
from mpsched.protocol.metrics import stickiness_p95

KEY_COLUMNS = ["scenario", "scheduler"]


def goodput_column(subflow: int) -> str:
    return f"goodput_sf{subflow}_bps"


def summarize_trace(trace: pd.DataFrame, warmup_s: float) -> Dict[str, float]:
    """
    Mean goodput per subflow and in aggregate, after the warm-up.

    Each row is weighted by the length of its interval, so a partial final
    interval counts for what it covers. Used both for the summary files and
    to recompute them from a parsed trace.
    """
    means: Dict[str, float] = {}
    total = 0.0
    for subflow, rows in trace.groupby("subflow", sort=True):
        times = rows["time_s"].to_numpy(dtype=float)
        lengths = np.diff(times, prepend=0.0)
        kept = times > warmup_s
        span = lengths[kept].sum()
        bits = (rows["goodput_bps"].to_numpy(dtype=float)[kept] * lengths[kept]).sum()
        mean = float(bits / span) if span > 0 else 0.0
        means[goodput_column(int(subflow))] = mean
        total += mean
    means["aggregate_goodput_bps"] = total
    return means


def run_summary(result: ConnectionResult, trace: pd.DataFrame, warmup_s: float) -> Dict[str, object]:
    """One RunSummary row for a finished seed."""
    row: Dict[str, object] = {
        "scenario": result.scenario,
        "scheduler": result.scheduler,
        "seed": result.seed,
    }
    row.update(summarize_trace(trace, warmup_s))
    row.update(
        {
            "completion_time_s": result.completion_time_s,
            "local_drops": result.local_drops,
            "link_losses": result.link_losses,
            "retransmissions": result.retransmissions,
            "stickiness_p95": stickiness_p95(result.run_lengths),
            "app_backlog": result.app_backlog,
            "offered": result.offered,
            "delivered": result.delivered,
        }
    )
    return row


def runs_frame(rows: Sequence[Dict[str, object]], file_mode: bool) -> pd.DataFrame:
    frame = pd.DataFrame(list(rows)).sort_values(KEY_COLUMNS + ["seed"], kind="mergesort")
    if not file_mode:
        frame = frame.drop(columns=["completion_time_s"])
    return frame.reset_index(drop=True)


def aggregate_runs(runs: pd.DataFrame) -> pd.DataFrame:
    """
    Mean and sample standard deviation of every metric over seeds.

    A single seed reports a standard deviation of 0.
    """
    metrics = [c for c in runs.columns if c not in KEY_COLUMNS + ["seed"]]
    grouped = runs.groupby(KEY_COLUMNS, sort=False)[metrics]
    means = grouped.mean().add_suffix("_mean")
    stds = grouped.std(ddof=1).fillna(0.0).add_suffix("_std")
    ordered: List[str] = []
    for metric in metrics:
        ordered += [f"{metric}_mean", f"{metric}_std"]
    summary = pd.concat([means, stds], axis=1)[ordered].reset_index()
    summary.insert(2, "seeds", grouped.size().to_numpy())
    return summary


def compare_table(summaries: Sequence[pd.DataFrame]) -> pd.DataFrame:
    """
    Side-by-side scheduler comparison.

    The first summary is the baseline; ``ratio_to_baseline`` divides each
    scheduler's mean aggregate goodput (or, for file transfers, mean
    completion time) by the baseline's.
    """
    table = pd.concat(list(summaries), ignore_index=True)
    keep = ["scenario", "scheduler", "seeds", "aggregate_goodput_bps_mean", "aggregate_goodput_bps_std"]
    keep += sorted(c for c in table.columns if c.startswith("goodput_sf") and c.endswith("_mean"))
    file_mode = "completion_time_s_mean" in table.columns and table["completion_time_s_mean"].notna().any()
    if file_mode:
        keep += ["completion_time_s_mean", "completion_time_s_std"]
    keep += ["local_drops_mean", "retransmissions_mean", "stickiness_p95_mean"]
    table = table[keep].copy()

    metric = "completion_time_s_mean" if file_mode else "aggregate_goodput_bps_mean"
    baseline: Optional[float] = table[metric].iloc[0]
    table["ratio_to_baseline"] = table[metric] / baseline if baseline else np.nan
    return table


def format_table(frame: pd.DataFrame) -> str:
    """Human-readable rendering for standard output."""
    return frame.to_string(index=False, float_format=lambda v: f"{v:,.0f}" if abs(v) >= 1e4 else f"{v:.4f}")


__all__ = [
    "goodput_column",
    "summarize_trace",
    "run_summary",
    "runs_frame",
    "aggregate_runs",
    "compare_table",
    "format_table",
]
