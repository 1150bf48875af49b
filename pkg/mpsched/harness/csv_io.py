"""
mpsched - CSV Output
Trace and summary tables written atomically with a fixed, documented format

Format: header row, UTF-8, '.' decimal separator, '\\n' line endings, floats
in shortest round-trip form, missing values as empty fields.
"""

import os
from pathlib import Path
from typing import Iterable

import pandas as pd

from mpsched.protocol.metrics import TRACE_COLUMNS, TraceRecord


def trace_to_frame(records: Iterable[TraceRecord]) -> pd.DataFrame:
    """Build the trace table, sorted by (time_s, subflow)."""
    frame = pd.DataFrame(
        [
            (r.time_s, r.subflow, r.goodput_bps, r.srtt_s, r.queue_occupancy_pkts, r.cwnd_pkts)
            for r in records
        ],
        columns=TRACE_COLUMNS,
    )
    frame = frame.astype(
        {
            "time_s": "float64",
            "subflow": "int64",
            "goodput_bps": "float64",
            "srtt_s": "float64",
            "queue_occupancy_pkts": "int64",
            "cwnd_pkts": "float64",
        }
    )
    return frame.sort_values(["time_s", "subflow"], kind="mergesort").reset_index(drop=True)


def write_csv_atomic(frame: pd.DataFrame, path: Path) -> Path:
    """
    Write a table to ``path`` through a temporary file and a rename.

    Returns:
        The final path
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    frame.to_csv(tmp, index=False, encoding="utf-8", lineterminator="\n", na_rep="")
    os.replace(tmp, path)
    return path


def read_csv(path: Path) -> pd.DataFrame:
    """Read a table written by write_csv_atomic without losing float precision."""
    return pd.read_csv(path, encoding="utf-8", float_precision="round_trip")


def trace_path(out_dir: Path, scenario: str, scheduler: str, seed: int) -> Path:
    return Path(out_dir) / scenario / scheduler / f"trace_seed{seed}.csv"


__all__ = ["trace_to_frame", "write_csv_atomic", "read_csv", "trace_path"]
