"""
mpsched - Discrete-Event Kernel
Integer-nanosecond virtual clock and an ordered future-event set
"""

import heapq
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Tuple

from mpsched.core.exceptions import SimulationError

SimTime = int

NS_PER_SECOND = 1_000_000_000


def seconds_to_ns(seconds: float) -> SimTime:
    """Convert seconds to integer nanoseconds (round half to even)."""
    return int(round(seconds * NS_PER_SECOND))


def ns_to_seconds(ns: SimTime) -> float:
    """Convert integer nanoseconds to seconds."""
    return ns / NS_PER_SECOND


class EventKind(str, Enum):
    """Event descriptors"""
    ARRIVAL = "arrival"
    TRANSMISSION_COMPLETE = "transmission_complete"
    ACK_ARRIVAL = "ack_arrival"
    LOSS_TIMER = "loss_timer"
    MEASUREMENT_TICK = "measurement_tick"


@dataclass(eq=False)
class Event:
    """A scheduled callback. Ordered by (fire_at, sequence_no)."""
    fire_at: SimTime
    sequence_no: int
    kind: EventKind
    handler: Callable[["Event"], None]
    payload: Any = None
    cancelled: bool = False


@dataclass(frozen=True)
class SimStats:
    """Counts of events dispatched by one run_until call."""
    dispatched: int
    by_kind: Dict[str, int] = field(default_factory=dict)
    clock: SimTime = 0
    stopped: bool = False


class Simulator:
    """
    Single-threaded event loop.

    Events firing at the same instant dispatch in scheduling order. When
    ``record_log`` is set every dispatched event is appended to
    ``dispatch_log`` as (fire_at, sequence_no, kind) for replay comparison.
    """

    def __init__(self, record_log: bool = False):
        self._heap: List[Tuple[SimTime, int, Event]] = []
        self._now: SimTime = 0
        self._next_seq = 0
        self._stopped = False
        self.record_log = record_log
        self.dispatch_log: List[Tuple[SimTime, int, str]] = []

    @property
    def now(self) -> SimTime:
        return self._now

    @property
    def pending(self) -> int:
        return len(self._heap)

    def schedule(
        self,
        fire_at: SimTime,
        kind: EventKind,
        handler: Callable[[Event], None],
        payload: Any = None,
    ) -> Event:
        """
        Insert an event into the future-event set.

        Args:
            fire_at: Absolute firing time in nanoseconds
            kind: Event descriptor
            handler: Callable invoked with the event when it fires
            payload: Opaque data for the handler

        Returns:
            The scheduled event (may be cancelled later)

        Raises:
            SimulationError: If fire_at lies before the current clock
        """
        fire_at = int(fire_at)
        if fire_at < self._now:
            raise SimulationError(
                f"event in past: {kind.value} at {fire_at} ns, clock {self._now} ns"
            )
        event = Event(fire_at, self._next_seq, kind, handler, payload)
        self._next_seq += 1
        heapq.heappush(self._heap, (fire_at, event.sequence_no, event))
        return event

    def schedule_in(
        self,
        delay: SimTime,
        kind: EventKind,
        handler: Callable[[Event], None],
        payload: Any = None,
    ) -> Event:
        return self.schedule(self._now + int(delay), kind, handler, payload)

    @staticmethod
    def cancel(event: Optional[Event]) -> None:
        if event is not None:
            event.cancelled = True

    def stop(self) -> None:
        """End the current run_until at the present instant."""
        self._stopped = True

    def run_until(self, end: SimTime) -> SimStats:
        """
        Dispatch every event with fire_at <= end.

        The clock finishes at ``end`` unless stop() was called, in which
        case it stays at the time of the stopping event.
        """
        end = int(end)
        if end < self._now:
            raise SimulationError(f"event in past: run_until({end}) with clock {self._now}")

        self._stopped = False
        counts: Counter = Counter()
        dispatched = 0
        heap = self._heap

        while heap and heap[0][0] <= end:
            fire_at, seq, event = heapq.heappop(heap)
            if event.cancelled:
                continue
            self._now = fire_at
            if self.record_log:
                self.dispatch_log.append((fire_at, seq, event.kind.value))
            event.handler(event)
            dispatched += 1
            counts[event.kind.value] += 1
            if self._stopped:
                break

        if not self._stopped:
            self._now = end

        return SimStats(
            dispatched=dispatched,
            by_kind=dict(counts),
            clock=self._now,
            stopped=self._stopped,
        )


__all__ = [
    "SimTime",
    "NS_PER_SECOND",
    "seconds_to_ns",
    "ns_to_seconds",
    "EventKind",
    "Event",
    "SimStats",
    "Simulator",
]
