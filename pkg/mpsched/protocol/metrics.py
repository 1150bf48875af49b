"""
mpsched - Delivery Metrics
Delivery log, per-interval goodput and assignment stickiness
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from mpsched.core.exceptions import ConfigurationError
from mpsched.sim.engine import SimTime, seconds_to_ns


@dataclass(frozen=True)
class TraceRecord:
    """One (interval, subflow) sample. srtt_s is None before the first RTT sample."""
    time_s: float
    subflow: int
    goodput_bps: float
    srtt_s: Optional[float]
    queue_occupancy_pkts: int
    cwnd_pkts: float


TRACE_COLUMNS = [
    "time_s",
    "subflow",
    "goodput_bps",
    "srtt_s",
    "queue_occupancy_pkts",
    "cwnd_pkts",
]


class DeliveryLog:
    """First ACK of every packet: (ack time, subflow, application bytes)."""

    def __init__(self):
        self._times: List[SimTime] = []
        self._subflows: List[int] = []
        self._bytes: List[int] = []

    def __len__(self) -> int:
        return len(self._times)

    def record(self, ack_time: SimTime, subflow: int, size_bytes: int) -> None:
        self._times.append(ack_time)
        self._subflows.append(subflow)
        self._bytes.append(size_bytes)

    @property
    def times_ns(self) -> np.ndarray:
        return np.asarray(self._times, dtype=np.int64)

    @property
    def subflows(self) -> np.ndarray:
        return np.asarray(self._subflows, dtype=np.int64)

    @property
    def sizes(self) -> np.ndarray:
        return np.asarray(self._bytes, dtype=np.int64)

    @property
    def total_bytes(self) -> int:
        return int(sum(self._bytes))


@dataclass(frozen=True)
class GoodputSeries:
    """Goodput per interval; row i covers (boundary[i-1], boundary[i]]."""
    boundaries_s: np.ndarray
    per_subflow_bps: np.ndarray
    aggregate_bps: np.ndarray


def interval_boundaries(interval_s: float, end: SimTime) -> np.ndarray:
    """Tick times k*interval up to ``end``, closing with a partial interval at ``end``."""
    step = seconds_to_ns(interval_s)
    if step <= 0:
        raise ConfigurationError([f"interval_s: must be > 0, got {interval_s}"])
    ticks = list(range(step, end + 1, step))
    if not ticks or ticks[-1] != end:
        ticks.append(end)
    return np.asarray(ticks, dtype=np.int64)


def measure_goodput(
    log: DeliveryLog,
    interval_s: float,
    n_subflows: int,
    end: Optional[SimTime] = None,
    boundaries: Optional[Sequence[SimTime]] = None,
) -> GoodputSeries:
    """
    Unique application bits per second, per subflow and aggregated.

    Args:
        log: First-ACK delivery log (each packet appears once)
        interval_s: Measurement interval in seconds
        n_subflows: Number of subflows (indices 1..n)
        end: Last boundary in ns; defaults to the last delivery time
        boundaries: Explicit interval ends in ns, overriding interval_s/end

    Returns:
        GoodputSeries with one row per interval
    """
    times = log.times_ns
    if boundaries is None:
        if end is None:
            end = int(times.max()) if len(times) else seconds_to_ns(interval_s)
        bounds = interval_boundaries(interval_s, end)
    else:
        bounds = np.asarray(boundaries, dtype=np.int64)

    bins = np.searchsorted(bounds, times, side="left")
    inside = bins < len(bounds)
    delivered = np.zeros((len(bounds), n_subflows), dtype=np.int64)
    np.add.at(delivered, (bins[inside], log.subflows[inside] - 1), log.sizes[inside])

    lengths_s = np.diff(bounds, prepend=0) / 1e9
    per_subflow = delivered * 8 / lengths_s[:, None]
    return GoodputSeries(
        boundaries_s=bounds / 1e9,
        per_subflow_bps=per_subflow,
        aggregate_bps=per_subflow.sum(axis=1),
    )


def assignment_run_lengths(assignments: Sequence[int]) -> List[int]:
    """Lengths of maximal runs of consecutive dispatches to the same subflow."""
    runs: List[int] = []
    previous = None
    for subflow in assignments:
        if subflow == previous:
            runs[-1] += 1
        else:
            runs.append(1)
            previous = subflow
    return runs


def stickiness_p95(run_lengths: Sequence[int]) -> float:
    if len(run_lengths) == 0:
        return 0.0
    return float(np.percentile(np.asarray(run_lengths), 95))


__all__ = [
    "TraceRecord",
    "TRACE_COLUMNS",
    "DeliveryLog",
    "GoodputSeries",
    "interval_boundaries",
    "measure_goodput",
    "assignment_run_lengths",
    "stickiness_p95",
]
