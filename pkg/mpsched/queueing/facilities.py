"""
mpsched - Parallel Service Facilities
K FCFS queue+server pairs fed by one dispatcher, simulated event by event

This module provides:
- Arrival and service process descriptions
- Runtime facility state (waiting queue, busy server)
- simulate_facilities(): one seeded run returning AbstractStats
"""

from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Deque, List, Optional, Sequence, Tuple

from mpsched.core.exceptions import ConfigurationError, SimulationError
from mpsched.core.logging_config import get_logger
from mpsched.queueing.policies import DispatchPolicy, make_dispatch_policy
from mpsched.sim.engine import Event, EventKind, SimTime, Simulator, ns_to_seconds, seconds_to_ns
from mpsched.sim.rng import RandomStream, draw_exponential

logger = get_logger(__name__)


class ArrivalKind(str, Enum):
    POISSON = "poisson"
    DETERMINISTIC = "deterministic"


class ServiceKind(str, Enum):
    EXPONENTIAL = "exponential"
    DETERMINISTIC = "deterministic"


@dataclass(frozen=True)
class ArrivalProcess:
    """Packets per second offered to the dispatcher. A zero rate yields no arrivals."""
    rate: float
    kind: ArrivalKind = ArrivalKind.POISSON

    def __post_init__(self):
        if self.rate < 0:
            raise ConfigurationError([f"arrivals.rate: must be >= 0, got {self.rate}"])


@dataclass(frozen=True)
class ServiceDistribution:
    kind: ServiceKind
    mean: float

    def __post_init__(self):
        if not self.mean > 0:
            raise ConfigurationError([f"service.mean: must be > 0, got {self.mean}"])

    @property
    def rate(self) -> float:
        return 1.0 / self.mean

    @classmethod
    def exponential(cls, rate: float) -> "ServiceDistribution":
        if not rate > 0:
            raise ConfigurationError([f"service.rate: must be > 0, got {rate}"])
        return cls(ServiceKind.EXPONENTIAL, 1.0 / rate)


@dataclass(frozen=True)
class FacilitySpec:
    """Static description of one facility. capacity None means unbounded."""
    service: ServiceDistribution
    capacity: Optional[int] = None

    def __post_init__(self):
        if self.capacity is not None and self.capacity < 0:
            raise ConfigurationError([f"facility.capacity: must be >= 0, got {self.capacity}"])


class ServiceFacility:
    """Runtime state of facility k: FCFS waiting queue plus one server."""

    def __init__(self, index: int, spec: FacilitySpec, stream: RandomStream):
        self.index = index
        self.spec = spec
        self.stream = stream
        self.queue: Deque[Tuple[int, SimTime]] = deque()
        self.in_service: Optional[Tuple[int, SimTime, SimTime]] = None
        self.served = 0
        self.dropped = 0
        self.total_wait_ns = 0
        self.total_sojourn_ns = 0

    @property
    def occupancy(self) -> int:
        """n_k(t): packets waiting, excluding the one in service."""
        return len(self.queue)

    @property
    def server_busy(self) -> bool:
        return self.in_service is not None

    @property
    def full(self) -> bool:
        return self.spec.capacity is not None and len(self.queue) >= self.spec.capacity

    def draw_service_ns(self) -> SimTime:
        service = self.spec.service
        if service.kind is ServiceKind.DETERMINISTIC:
            return seconds_to_ns(service.mean)
        return seconds_to_ns(draw_exponential(self.stream, service.rate))


@dataclass(frozen=True)
class FacilityStats:
    index: int
    served: int
    dropped: int
    queued: int
    in_service: int
    mean_wait_s: float
    mean_sojourn_s: float


@dataclass(frozen=True)
class AbstractStats:
    """
    Outcome of one facility simulation.

    Waits and sojourns are averaged over served packets. ``dispatch`` and
    ``completions`` are filled only when the run was traced.
    """
    arrivals: int
    served: int
    dropped: int
    queued: int
    in_service: int
    mean_wait_s: float
    mean_sojourn_s: float
    facilities: Tuple[FacilityStats, ...]
    dispatch: Tuple[int, ...] = ()
    completions: Tuple[Tuple[int, int], ...] = ()

    @property
    def conserved(self) -> bool:
        return self.arrivals == self.served + self.dropped + self.queued + self.in_service


class _FacilityRun:
    def __init__(
        self,
        arrivals: ArrivalProcess,
        specs: Sequence[FacilitySpec],
        policy: DispatchPolicy,
        seed: int,
        trace: bool,
    ):
        self.sim = Simulator()
        self.arrivals = arrivals
        self.policy = policy
        self.arrival_stream = RandomStream(seed, "arrivals")
        self.facilities = [
            ServiceFacility(k, spec, RandomStream(seed, f"service-{k}"))
            for k, spec in enumerate(specs, start=1)
        ]
        self.rates = [f.spec.service.rate for f in self.facilities]
        self.trace = trace
        self.dispatch: List[int] = []
        self.completions: List[Tuple[int, int]] = []
        self.arrived = 0
        self.horizon: SimTime = 0

    def _next_gap_ns(self) -> SimTime:
        if self.arrivals.kind is ArrivalKind.DETERMINISTIC:
            return max(1, seconds_to_ns(1.0 / self.arrivals.rate))
        return seconds_to_ns(draw_exponential(self.arrival_stream, self.arrivals.rate))

    def _schedule_arrival(self) -> None:
        fire_at = self.sim.now + self._next_gap_ns()
        if fire_at <= self.horizon:
            self.sim.schedule(fire_at, EventKind.ARRIVAL, self._on_arrival)

    def _start_service(self, facility: ServiceFacility, packet_id: int, arrived_at: SimTime) -> None:
        now = self.sim.now
        facility.in_service = (packet_id, arrived_at, now)
        self.sim.schedule(
            now + facility.draw_service_ns(),
            EventKind.TRANSMISSION_COMPLETE,
            self._on_complete,
            facility,
        )

    def _on_arrival(self, event: Event) -> None:
        packet_id = self.arrived
        self.arrived += 1
        k = self.policy([f.occupancy for f in self.facilities], self.rates)
        facility = self.facilities[k - 1]
        if self.trace:
            self.dispatch.append(k)

        if not facility.server_busy:
            self._start_service(facility, packet_id, self.sim.now)
        elif facility.full:
            facility.dropped += 1
        else:
            facility.queue.append((packet_id, self.sim.now))

        self._schedule_arrival()

    def _on_complete(self, event: Event) -> None:
        facility: ServiceFacility = event.payload
        packet_id, arrived_at, started_at = facility.in_service
        now = self.sim.now
        facility.served += 1
        facility.total_wait_ns += started_at - arrived_at
        facility.total_sojourn_ns += now - arrived_at
        if self.trace:
            self.completions.append((facility.index, packet_id))

        facility.in_service = None
        if facility.queue:
            next_id, next_arrival = facility.queue.popleft()
            self._start_service(facility, next_id, next_arrival)

    def run(self, horizon: SimTime) -> AbstractStats:
        self.horizon = horizon
        if self.arrivals.rate > 0:
            self._schedule_arrival()
        self.sim.run_until(horizon)
        return self._collect()

    def _collect(self) -> AbstractStats:
        per_facility = []
        for f in self.facilities:
            per_facility.append(
                FacilityStats(
                    index=f.index,
                    served=f.served,
                    dropped=f.dropped,
                    queued=f.occupancy,
                    in_service=int(f.server_busy),
                    mean_wait_s=ns_to_seconds(f.total_wait_ns / f.served) if f.served else 0.0,
                    mean_sojourn_s=ns_to_seconds(f.total_sojourn_ns / f.served) if f.served else 0.0,
                )
            )
        served = sum(f.served for f in self.facilities)
        total_wait = sum(f.total_wait_ns for f in self.facilities)
        total_sojourn = sum(f.total_sojourn_ns for f in self.facilities)
        stats = AbstractStats(
            arrivals=self.arrived,
            served=served,
            dropped=sum(f.dropped for f in self.facilities),
            queued=sum(f.occupancy for f in self.facilities),
            in_service=sum(int(f.server_busy) for f in self.facilities),
            mean_wait_s=ns_to_seconds(total_wait / served) if served else 0.0,
            mean_sojourn_s=ns_to_seconds(total_sojourn / served) if served else 0.0,
            facilities=tuple(per_facility),
            dispatch=tuple(self.dispatch),
            completions=tuple(self.completions),
        )
        if not stats.conserved:
            raise SimulationError(
                f"conservation violated: arrivals={stats.arrivals} served={stats.served} "
                f"dropped={stats.dropped} queued={stats.queued} in_service={stats.in_service}"
            )
        return stats


def simulate_facilities(
    arrivals: ArrivalProcess,
    facilities: Sequence[FacilitySpec],
    policy,
    horizon: SimTime,
    seed: int,
    trace: bool = False,
) -> AbstractStats:
    """
    Run K parallel facilities behind one FCFS dispatcher.

    Args:
        arrivals: Arrival process (rate in packets/second)
        facilities: One spec per facility
        policy: Dispatcher callable or registered name
            (min_conditional_wait, jsq, random, roundrobin)
        horizon: Simulated duration in nanoseconds
        seed: Run seed
        trace: Record dispatch choices and completion order

    Returns:
        AbstractStats for the run

    Raises:
        ConfigurationError: Bad horizon, facilities or policy
        SimulationError: If packet conservation fails
    """
    if horizon <= 0:
        raise ConfigurationError([f"horizon: must be > 0, got {horizon}"])
    if not facilities:
        raise ConfigurationError(["facilities: at least one facility is required"])
    if isinstance(policy, str):
        policy = make_dispatch_policy(policy, RandomStream(seed, "dispatch"))

    stats = _FacilityRun(arrivals, facilities, policy, seed, trace).run(horizon)
    logger.debug(
        "facility run complete",
        seed=seed,
        arrivals=stats.arrivals,
        served=stats.served,
        dropped=stats.dropped,
        mean_wait_s=stats.mean_wait_s,
    )
    return stats


__all__ = [
    "ArrivalKind",
    "ServiceKind",
    "ArrivalProcess",
    "ServiceDistribution",
    "FacilitySpec",
    "ServiceFacility",
    "FacilityStats",
    "AbstractStats",
    "simulate_facilities",
]
