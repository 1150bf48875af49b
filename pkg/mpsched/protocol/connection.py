"""
mpsched - Multipath Connection Model
Shared send buffer over per-subflow drop-tail device queues, links, ACKs and
penalize-and-retransmit loss recovery

This module provides:
- MptcpConnection: one seeded protocol-mode run of a scenario
- ConnectionResult: trace rows, counters and logs of a finished run
"""

from collections import deque
from dataclasses import dataclass, field
from typing import Deque, Dict, List, Optional, Tuple

from mpsched.core.exceptions import SimulationError
from mpsched.core.logging_config import get_logger
from mpsched.protocol.load import offer_load
from mpsched.protocol.metrics import (
    DeliveryLog,
    GoodputSeries,
    TraceRecord,
    assignment_run_lengths,
    measure_goodput,
)
from mpsched.protocol.packet import PacketRecord, PacketState
from mpsched.protocol.subflow import Subflow
from mpsched.scenarios.schemas import ScenarioConfig
from mpsched.schedulers.base import create_scheduler
from mpsched.schedulers.estimators import EwmaConfig, PacketTimestamps, update_service_estimate, update_srtt
from mpsched.schedulers.policies import SubflowView
from mpsched.sim.engine import Event, EventKind, SimStats, SimTime, Simulator, ns_to_seconds, seconds_to_ns
from mpsched.sim.rng import RandomStream

logger = get_logger(__name__)


@dataclass(frozen=True)
class Assignment:
    """Outcome of one dispatch decision."""
    seq: int
    subflow: int
    dropped: bool


@dataclass(frozen=True)
class SubflowCounters:
    index: int
    assigned: int
    delivered: int
    bytes_delivered: int
    local_drops: int
    link_losses: int
    losses_detected: int


@dataclass
class ConnectionResult:
    """Everything a finished run reports to the harness."""
    scenario: str
    scheduler: str
    seed: int
    n_subflows: int
    trace: List[TraceRecord]
    goodput: GoodputSeries
    offered: int
    delivered: int
    local_drops: int
    link_losses: int
    retransmissions: int
    app_backlog: int
    completion_time_s: Optional[float]
    end_time_s: float
    run_lengths: List[int]
    subflows: List[SubflowCounters]
    delivery_log: DeliveryLog
    ticks_checked: int
    sim_stats: SimStats
    dispatch_log: List[Tuple[SimTime, int, str]] = field(default_factory=list)


class MptcpConnection:
    """
    One MPTCP-like sender driven by a scheduler.

    Packet flow: application -> send buffer (FCFS) -> scheduler -> device
    queue of the chosen subflow (drop-tail) -> access link (gated by cwnd)
    -> shared backbone and core stages -> ACK after the round-trip delay.
    ``held`` counts accepted, unacknowledged packets. Only those not yet in
    the network (unsent, queued, or dropped awaiting detection) occupy
    send-buffer capacity; when it is full the application blocks.
    """

    def __init__(self, scenario: ScenarioConfig, seed: int, record_log: bool = False):
        self.scenario = scenario
        self.seed = seed
        self.protocol = scenario.protocol
        self.ewma = EwmaConfig(alpha=self.protocol.alpha, srtt_gain=self.protocol.srtt_gain)
        self.sim = Simulator(record_log=record_log)
        self.end: SimTime = seconds_to_ns(scenario.duration_s)
        self.interval: SimTime = seconds_to_ns(scenario.interval_s)

        self.subflows = [
            Subflow(k, spec, self.protocol, RandomStream(seed, f"loss-{k}"))
            for k, spec in enumerate(scenario.subflows, start=1)
        ]
        self.scheduler = create_scheduler(scenario.scheduler, RandomStream(seed, "scheduler"))
        self.load = offer_load(scenario.load, self.protocol.packet_size_bytes, RandomStream(seed, "arrivals"))

        # Send buffer
        self.capacity = self.protocol.send_buffer_capacity
        self.unsent: Deque[PacketRecord] = deque()
        self.held = 0
        self.app_backlog = 0
        self._next_seq = 0
        self._arrival_event: Optional[Event] = None

        # Shared stages after the access links
        self._backbone_free_at: SimTime = 0
        self._core_free_at: SimTime = 0

        # Accounting
        self.state_counts: Dict[PacketState, int] = {state: 0 for state in PacketState}
        self.offered = 0
        self.delivered = 0
        self.local_drops = 0
        self.link_losses = 0
        self.retransmissions = 0
        self.completion_time: Optional[SimTime] = None
        self._assign_counter = 0
        self.assignments: List[int] = []
        self.delivery_log = DeliveryLog()
        self._samples: List[Tuple[SimTime, List[Tuple[Optional[float], int, float]]]] = []

    # ================================
    # Bookkeeping
    # ================================

    @property
    def now(self) -> SimTime:
        return self.sim.now

    def _move(self, packet: PacketRecord, state: PacketState) -> None:
        self.state_counts[packet.state] -= 1
        self.state_counts[state] += 1
        packet.state = state

    @property
    def buffered(self) -> int:
        """Send-buffer occupancy: held packets that have not entered the network."""
        return self.held - sum(sf.in_flight for sf in self.subflows)

    def check_conservation(self) -> None:
        """
        Verify that every accepted packet is accounted for exactly once.

        Raises:
            SimulationError: On any mismatch between counters and structures
        """
        counts = self.state_counts
        problems = []
        if sum(counts.values()) != self.offered:
            problems.append(f"states sum to {sum(counts.values())}, offered {self.offered}")
        if counts[PacketState.SENDBUFFER] != len(self.unsent):
            problems.append(f"sendbuffer {counts[PacketState.SENDBUFFER]} vs {len(self.unsent)} unsent")
        queued = sum(len(sf.device_queue) for sf in self.subflows)
        if counts[PacketState.QUEUED] != queued:
            problems.append(f"queued {counts[PacketState.QUEUED]} vs {queued} in device queues")
        in_flight = sum(sf.in_flight for sf in self.subflows)
        network = counts[PacketState.IN_FLIGHT] + counts[PacketState.LOST_IN_LINK]
        if network != in_flight:
            problems.append(f"in flight {network} vs {in_flight} counted by subflows")
        if counts[PacketState.DELIVERED] != len(self.delivery_log) or self.delivered != len(self.delivery_log):
            problems.append(f"delivered {counts[PacketState.DELIVERED]} vs {len(self.delivery_log)} logged")
        if self.held != self.offered - counts[PacketState.DELIVERED]:
            problems.append(f"send buffer holds {self.held}, expected {self.offered - counts[PacketState.DELIVERED]}")
        off_network = counts[PacketState.SENDBUFFER] + counts[PacketState.QUEUED] + counts[PacketState.DROPPED_LOCAL]
        if self.buffered != off_network:
            problems.append(f"send buffer occupancy {self.buffered} vs {off_network} packets off the network")
        for sf in self.subflows:
            if len(sf.device_queue) > sf.spec.queue_capacity:
                problems.append(f"subflow {sf.index} queue {len(sf.device_queue)} above capacity")
            if sf.cwnd < 1:
                problems.append(f"subflow {sf.index} cwnd {sf.cwnd} below 1")
        if problems:
            raise SimulationError(
                f"conservation violated at t={ns_to_seconds(self.now):.9f}s: " + "; ".join(problems)
            )

    # ================================
    # Application load
    # ================================

    def _admit(self) -> None:
        """
        Move generated packets into the send buffer while it has room.

        Reinjected losses can push occupancy past capacity; admission then
        waits until it drains below.
        """
        self.app_backlog += self.load.generate_until(self.now)
        if self.capacity is None:
            room = self.app_backlog
        else:
            room = max(0, min(self.app_backlog, self.capacity - self.buffered))
        for _ in range(room):
            packet = PacketRecord(self._next_seq, self.load.packet_size_for(self._next_seq))
            self._next_seq += 1
            self.state_counts[PacketState.SENDBUFFER] += 1
            self.unsent.append(packet)
            self.held += 1
            self.offered += 1
        self.app_backlog -= room

        next_arrival = self.load.next_arrival
        if (
            self.app_backlog == 0
            and self._arrival_event is None
            and next_arrival is not None
            and next_arrival <= self.end
        ):
            self._arrival_event = self.sim.schedule(next_arrival, EventKind.ARRIVAL, self._on_arrival)

    def _on_arrival(self, event: Event) -> None:
        self._arrival_event = None
        self._admit()
        self._dispatch()

    # ================================
    # Scheduling
    # ================================

    def _views_for(self, packet: PacketRecord) -> List[SubflowView]:
        views = [sf.view() for sf in self.subflows]
        avoid = packet.avoid_subflow
        if avoid is not None and any(v.eligible for v in views if v.index != avoid):
            views[avoid - 1] = self.subflows[avoid - 1].view(usable=False)
        return views

    def dispatch_next(self) -> Optional[Assignment]:
        """
        Hand the send-buffer head to the subflow the scheduler picks.

        A reinjected packet avoids the subflow that lost it when another
        eligible subflow exists. A full device queue drops the packet
        (drop-tail); the sender only learns of it through loss detection.

        Returns:
            The assignment, or None when the buffer is empty or blocked
        """
        if not self.unsent:
            return None
        packet = self.unsent[0]
        choice = self.scheduler.choose(self._views_for(packet), ns_to_seconds(self.now))
        if choice is None:
            return None
        self.unsent.popleft()
        sf = self.subflows[choice - 1]

        packet.attempt += 1
        packet.subflow = sf.index
        packet.assign_order = self._assign_counter
        self._assign_counter += 1
        packet.avoid_subflow = None
        packet.t_s = self.now
        packet.t_enter_nic = None
        packet.t_a = None
        sf.assigned += 1
        sf.track_assignment(packet)
        self.assignments.append(sf.index)

        if sf.queue_full:
            self._move(packet, PacketState.DROPPED_LOCAL)
            sf.local_drops += 1
            self.local_drops += 1
            sf.start_timer_entry(packet, self.now)
            self._arm_timer(sf)
            return Assignment(packet.seq, sf.index, dropped=True)

        self._move(packet, PacketState.QUEUED)
        sf.device_queue.append(packet)
        self.transmit_and_ack(sf)
        return Assignment(packet.seq, sf.index, dropped=False)

    def _dispatch(self) -> None:
        while self.dispatch_next() is not None:
            pass

    # ================================
    # Transmission
    # ================================

    def transmit_and_ack(self, sf: Subflow) -> None:
        """Start serialising the device-queue head if the link is idle and cwnd allows."""
        if not sf.can_transmit():
            return
        packet = sf.device_queue.popleft()
        self._move(packet, PacketState.IN_FLIGHT)
        packet.t_enter_nic = self.now
        sf.in_flight += 1
        sf.link_busy = True
        sf.start_timer_entry(packet, self.now)
        self._arm_timer(sf)
        self.sim.schedule(
            self.now + sf.serialization_ns(packet.size),
            EventKind.TRANSMISSION_COMPLETE,
            self._on_transmission_complete,
            (sf, packet, packet.attempt),
        )

    def _shared_stage_exit(self, size_bytes: int) -> SimTime:
        bits = size_bytes * 8
        backbone_start = max(self.now, self._backbone_free_at)
        self._backbone_free_at = backbone_start + seconds_to_ns(bits / self.protocol.backbone_rate_bps)
        core_start = max(self._backbone_free_at, self._core_free_at)
        self._core_free_at = core_start + seconds_to_ns(bits / self.protocol.core_rate_bps)
        return self._core_free_at

    def _on_transmission_complete(self, event: Event) -> None:
        sf, packet, attempt = event.payload
        sf.link_busy = False
        if packet.attempt == attempt and packet.state is PacketState.IN_FLIGHT:
            if sf.draw_link_loss():
                self._move(packet, PacketState.LOST_IN_LINK)
                sf.link_losses += 1
                self.link_losses += 1
            else:
                ack_at = self._shared_stage_exit(packet.size) + 2 * sf.one_way_delay_ns
                self.sim.schedule(ack_at, EventKind.ACK_ARRIVAL, self._on_ack, (sf, packet, attempt))
        self.transmit_and_ack(sf)
        # the next queued packet may now be on the wire, freeing send-buffer room
        self._admit()
        self._dispatch()

    def _on_ack(self, event: Event) -> None:
        sf, packet, attempt = event.payload
        if packet.attempt != attempt or packet.state is not PacketState.IN_FLIGHT:
            return

        packet.t_a = self.now
        self._move(packet, PacketState.DELIVERED)
        sf.in_flight -= 1
        self.held -= 1
        self.delivered += 1
        sf.delivered += 1
        sf.bytes_delivered += packet.size
        self.delivery_log.record(self.now, sf.index, packet.size)

        stamps = PacketTimestamps(
            ns_to_seconds(packet.t_s), ns_to_seconds(packet.t_enter_nic), ns_to_seconds(packet.t_a)
        )
        if not (packet.retransmission and self.protocol.exclude_retransmission_samples):
            sf.srtt = update_srtt(sf.srtt, stamps.rtt, self.ewma.srtt_gain)
            sf.service_estimate = update_service_estimate(
                sf.service_estimate, stamps.service, self.ewma.alpha
            )
        sf.on_ack_grow()

        lost = sf.on_delivery(packet, self.protocol.dupack_threshold)
        if lost:
            self.on_loss_penalize_retransmit(sf, lost)

        if self.load.is_file and self.delivered == self.load.total:
            self.completion_time = self.now
            self.sim.stop()
            return

        self._admit()
        self._dispatch()
        self.transmit_and_ack(sf)

    # ================================
    # Loss recovery
    # ================================

    def on_loss_penalize_retransmit(self, sf: Subflow, lost: List[PacketRecord]) -> None:
        """
        Penalize the subflow and reinject its lost packets.

        cwnd is halved at most once per window; reinjected packets go back
        to the head of the send buffer in sequence order, marked to avoid
        this subflow.
        """
        highest = self._assign_counter - 1
        avoid = sf.index if len(self.subflows) > 1 else None
        for packet in lost:
            if packet.state in (PacketState.IN_FLIGHT, PacketState.LOST_IN_LINK):
                sf.in_flight -= 1
            sf.losses_detected += 1
            self.retransmissions += 1
            sf.penalize(packet.assign_order, highest)
            self._move(packet, PacketState.SENDBUFFER)
            packet.avoid_subflow = avoid
        self.unsent.extendleft(sorted(lost, key=lambda p: p.seq, reverse=True))
        self._dispatch()

    def _arm_timer(self, sf: Subflow) -> None:
        if sf.rto_event is not None:
            return
        deadline = sf.next_deadline()
        if deadline is None:
            return
        sf.rto_event = self.sim.schedule(max(deadline, self.now), EventKind.LOSS_TIMER, self._on_rto, sf)

    def _on_rto(self, event: Event) -> None:
        sf: Subflow = event.payload
        sf.rto_event = None
        lost = sf.expire(self.now)
        if lost:
            self.on_loss_penalize_retransmit(sf, lost)
            self.transmit_and_ack(sf)
        self._arm_timer(sf)

    # ================================
    # Measurement
    # ================================

    def _sample(self) -> None:
        self._samples.append(
            (self.now, [(sf.srtt, len(sf.device_queue), sf.cwnd) for sf in self.subflows])
        )
        self.check_conservation()

    def _on_tick(self, event: Event) -> None:
        self._admit()
        self._dispatch()
        self._sample()
        if self.now < self.end:
            self.sim.schedule(min(self.now + self.interval, self.end), EventKind.MEASUREMENT_TICK, self._on_tick)

    # ================================
    # Run
    # ================================

    def run(self) -> ConnectionResult:
        """
        Simulate until the horizon (or file completion).

        Raises:
            SimulationError: If an invariant is violated
        """
        self._admit()
        self._dispatch()
        self.sim.schedule(min(self.interval, self.end), EventKind.MEASUREMENT_TICK, self._on_tick)
        stats = self.sim.run_until(self.end)

        if not self._samples or self._samples[-1][0] < self.now:
            self._sample()

        if self.load.is_file and self.completion_time is None:
            logger.warning(
                "file transfer incomplete at horizon",
                delivered=self.delivered,
                total=self.load.total,
                horizon_s=self.scenario.duration_s,
            )

        return self._result(stats)

    def _result(self, stats: SimStats) -> ConnectionResult:
        boundaries = [t for t, _ in self._samples]
        goodput = measure_goodput(
            self.delivery_log, self.scenario.interval_s, len(self.subflows), boundaries=boundaries
        )
        trace: List[TraceRecord] = []
        for row, (t, per_subflow) in enumerate(self._samples):
            for k, (srtt, queue, cwnd) in enumerate(per_subflow, start=1):
                trace.append(
                    TraceRecord(
                        time_s=ns_to_seconds(t),
                        subflow=k,
                        goodput_bps=float(goodput.per_subflow_bps[row, k - 1]),
                        srtt_s=srtt,
                        queue_occupancy_pkts=queue,
                        cwnd_pkts=cwnd,
                    )
                )

        return ConnectionResult(
            scenario=self.scenario.name,
            scheduler=self.scenario.scheduler,
            seed=self.seed,
            n_subflows=len(self.subflows),
            trace=trace,
            goodput=goodput,
            offered=self.offered,
            delivered=self.delivered,
            local_drops=self.local_drops,
            link_losses=self.link_losses,
            retransmissions=self.retransmissions,
            app_backlog=self.app_backlog,
            completion_time_s=None if self.completion_time is None else ns_to_seconds(self.completion_time),
            end_time_s=ns_to_seconds(self.now),
            run_lengths=assignment_run_lengths(self.assignments),
            subflows=[
                SubflowCounters(
                    index=sf.index,
                    assigned=sf.assigned,
                    delivered=sf.delivered,
                    bytes_delivered=sf.bytes_delivered,
                    local_drops=sf.local_drops,
                    link_losses=sf.link_losses,
                    losses_detected=sf.losses_detected,
                )
                for sf in self.subflows
            ],
            delivery_log=self.delivery_log,
            ticks_checked=len(self._samples),
            sim_stats=stats,
            dispatch_log=list(self.sim.dispatch_log),
        )


def simulate_connection(scenario: ScenarioConfig, seed: int, record_log: bool = False) -> ConnectionResult:
    """Run one protocol-mode simulation of ``scenario`` with ``seed``."""
    return MptcpConnection(scenario, seed, record_log=record_log).run()


__all__ = [
    "Assignment",
    "SubflowCounters",
    "ConnectionResult",
    "MptcpConnection",
    "simulate_connection",
]
