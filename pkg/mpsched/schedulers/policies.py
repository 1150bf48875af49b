"""
mpsched - Subflow Selection Policies

Pure functions over SubflowView snapshots. A view is eligible when it is
usable and has congestion-window space; every policy returns a 1-based
subflow index or None when nothing is eligible (the packet stays buffered).
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from mpsched.queueing.policies import argmin_index
from mpsched.sim.rng import RandomStream

COLD_START_ESTIMATE = 1.0


@dataclass(frozen=True)
class SubflowView:
    """Scheduler-visible state of one subflow at decision time."""
    index: int
    queue_occupancy: int
    srtt: Optional[float] = None
    service_estimate: Optional[float] = None
    cwnd_available: bool = True
    usable: bool = True

    @property
    def eligible(self) -> bool:
        return self.usable and self.cwnd_available


def _eligibility(views: Sequence[SubflowView]) -> List[bool]:
    return [v.eligible for v in views]


def effective_service_estimates(views: Sequence[SubflowView]) -> List[float]:
    """
    Service estimates with the cold-start rule applied.

    An unsampled subflow borrows the mean of the sampled estimates, or 1.0
    when no subflow has a sample yet.
    """
    sampled = [v.service_estimate for v in views if v.service_estimate is not None]
    fallback = sum(sampled) / len(sampled) if sampled else COLD_START_ESTIMATE
    return [v.service_estimate if v.service_estimate is not None else fallback for v in views]


def choose_queueaware(views: Sequence[SubflowView], t: Optional[float] = None) -> Optional[int]:
    """argmin over eligible views of n_k(t) * S_k."""
    estimates = effective_service_estimates(views)
    scores = [v.queue_occupancy * s for v, s in zip(views, estimates)]
    return argmin_index(scores, _eligibility(views))


def choose_minsrtt(views: Sequence[SubflowView], t: Optional[float] = None) -> Optional[int]:
    """argmin SRTT over eligible views; an unsampled SRTT counts as 0."""
    srtts = [v.srtt if v.srtt is not None else 0.0 for v in views]
    return argmin_index(srtts, _eligibility(views))


def choose_jsq(views: Sequence[SubflowView], t: Optional[float] = None) -> Optional[int]:
    return argmin_index([v.queue_occupancy for v in views], _eligibility(views))


def choose_roundrobin(views: Sequence[SubflowView], cursor: int) -> Tuple[Optional[int], int]:
    """
    Next eligible view at or after the cursor, wrapping around.

    Args:
        views: Subflow snapshots
        cursor: 0-based position to start scanning from

    Returns:
        (chosen 1-based index or None, updated cursor)
    """
    count = len(views)
    for step in range(count):
        position = (cursor + step) % count
        if views[position].eligible:
            return position + 1, (position + 1) % count
    return None, cursor


def choose_random(views: Sequence[SubflowView], stream: RandomStream) -> Optional[int]:
    candidates = [i for i, v in enumerate(views) if v.eligible]
    if not candidates:
        return None
    return candidates[stream.index(len(candidates))] + 1


__all__ = [
    "COLD_START_ESTIMATE",
    "SubflowView",
    "effective_service_estimates",
    "choose_queueaware",
    "choose_minsrtt",
    "choose_jsq",
    "choose_roundrobin",
    "choose_random",
]
