"""
mpsched - Subflow State
Device queue, congestion window, path estimators and loss detection for one path
"""

import math
from collections import deque
from enum import Enum
from typing import Deque, List, Optional, Tuple

from mpsched.protocol.packet import PacketRecord, PacketState
from mpsched.scenarios.schemas import ProtocolSpec, SubflowSpec
from mpsched.schedulers.policies import SubflowView
from mpsched.sim.engine import Event, SimTime, seconds_to_ns
from mpsched.sim.rng import RandomStream

_UNRESOLVED = (PacketState.IN_FLIGHT, PacketState.LOST_IN_LINK, PacketState.DROPPED_LOCAL)


class CongestionState(str, Enum):
    SLOW_START = "slow_start"
    CONGESTION_AVOIDANCE = "congestion_avoidance"


class Subflow:
    """
    One TCP-like subflow.

    ``in_flight`` counts packets that started serialisation and whose fate
    the sender has not learned yet (including undetected link losses).
    Local drops never reach the link and are not counted.
    """

    def __init__(self, index: int, spec: SubflowSpec, protocol: ProtocolSpec, loss_stream: RandomStream):
        self.index = index
        self.spec = spec
        self.protocol = protocol
        self.loss_stream = loss_stream
        self.one_way_delay_ns = seconds_to_ns(spec.one_way_delay_s)

        self.device_queue: Deque[PacketRecord] = deque()
        self.link_busy = False
        self.usable = True

        # Congestion control
        self.cwnd = float(protocol.initial_cwnd)
        self.ssthresh = math.inf
        self.cc_state = CongestionState.SLOW_START
        self.in_flight = 0
        self.recovery_point = -1

        # Estimators
        self.srtt: Optional[float] = None
        self.service_estimate: Optional[float] = None

        # Loss detection: assignment order, revealed holes, timer entries
        self.ack_count = 0
        self._order: Deque[Tuple[PacketRecord, int, int]] = deque()
        self._suspects: Deque[Tuple[PacketRecord, int, int]] = deque()
        self._timed: Deque[Tuple[PacketRecord, int, SimTime]] = deque()
        self.rto_event: Optional[Event] = None

        # Counters
        self.assigned = 0
        self.delivered = 0
        self.bytes_delivered = 0
        self.local_drops = 0
        self.link_losses = 0
        self.losses_detected = 0

    def __repr__(self) -> str:
        return (
            f"Subflow(index={self.index}, queue={len(self.device_queue)}, "
            f"cwnd={self.cwnd:.2f}, in_flight={self.in_flight})"
        )

    # ================================
    # Scheduler view
    # ================================

    @property
    def queue_occupancy(self) -> int:
        return len(self.device_queue)

    @property
    def queue_full(self) -> bool:
        return len(self.device_queue) >= self.spec.queue_capacity

    @property
    def cwnd_available(self) -> bool:
        return self.in_flight < self.cwnd

    def view(self, usable: Optional[bool] = None) -> SubflowView:
        return SubflowView(
            index=self.index,
            queue_occupancy=len(self.device_queue),
            srtt=self.srtt,
            service_estimate=self.service_estimate,
            cwnd_available=self.in_flight < self.cwnd,
            usable=self.usable if usable is None else usable,
        )

    # ================================
    # Link
    # ================================

    def serialization_ns(self, size_bytes: int) -> SimTime:
        return seconds_to_ns(size_bytes * 8 / self.spec.link_rate_bps)

    def can_transmit(self) -> bool:
        return not self.link_busy and bool(self.device_queue) and self.in_flight < self.cwnd

    def draw_link_loss(self) -> bool:
        return self.spec.per > 0 and self.loss_stream.bernoulli(self.spec.per)

    # ================================
    # Congestion control
    # ================================

    def on_ack_grow(self) -> None:
        """Slow start adds one packet per ACK; congestion avoidance adds 1/cwnd."""
        if self.cwnd < self.ssthresh:
            self.cwnd += 1.0
        else:
            self.cc_state = CongestionState.CONGESTION_AVOIDANCE
            self.cwnd += 1.0 / self.cwnd

    def penalize(self, lost_assign_order: int, highest_assign_order: int) -> bool:
        """
        Halve cwnd for a loss, at most once per window of data.

        Returns:
            True if the window was reduced
        """
        if lost_assign_order <= self.recovery_point:
            return False
        self.cwnd = max(1.0, self.cwnd / 2)
        self.ssthresh = self.cwnd
        self.cc_state = CongestionState.CONGESTION_AVOIDANCE
        self.recovery_point = highest_assign_order
        return True

    # ================================
    # Estimators
    # ================================

    def rto_ns(self) -> SimTime:
        if self.srtt is None:
            return seconds_to_ns(self.protocol.initial_rto_s)
        return seconds_to_ns(max(2 * self.srtt, self.protocol.min_rto_s))

    # ================================
    # Loss detection
    # ================================

    @staticmethod
    def _unresolved(packet: PacketRecord, attempt: int) -> bool:
        return packet.attempt == attempt and packet.state in _UNRESOLVED

    def track_assignment(self, packet: PacketRecord) -> None:
        self._order.append((packet, packet.attempt, packet.assign_order))

    def start_timer_entry(self, packet: PacketRecord, start: SimTime) -> None:
        """Begin the retransmission timeout clock (NIC entry or local drop)."""
        self._timed.append((packet, packet.attempt, start))

    def on_delivery(self, packet: PacketRecord, threshold: int) -> List[PacketRecord]:
        """
        Register an ACK and run the duplicate-ACK proxy.

        Earlier-assigned packets still unresolved when a later one is
        acknowledged are holes; a hole is lost once ``threshold`` deliveries
        (counting the revealing one) have been seen.

        Returns:
            Packets newly declared lost, in assignment order
        """
        self.ack_count += 1
        acked_order = packet.assign_order
        while self._order and self._order[0][2] <= acked_order:
            candidate, attempt, order = self._order.popleft()
            if order < acked_order and self._unresolved(candidate, attempt):
                self._suspects.append((candidate, attempt, self.ack_count))

        lost: List[PacketRecord] = []
        while self._suspects:
            candidate, attempt, revealed_at = self._suspects[0]
            if not self._unresolved(candidate, attempt):
                self._suspects.popleft()
            elif self.ack_count - revealed_at + 1 >= threshold:
                self._suspects.popleft()
                lost.append(candidate)
            else:
                break
        return lost

    def expire(self, now: SimTime) -> List[PacketRecord]:
        """Packets whose timeout elapsed by ``now``."""
        rto = self.rto_ns()
        lost: List[PacketRecord] = []
        while self._timed:
            candidate, attempt, start = self._timed[0]
            if not self._unresolved(candidate, attempt):
                self._timed.popleft()
            elif start + rto <= now:
                self._timed.popleft()
                lost.append(candidate)
            else:
                break
        return lost

    def next_deadline(self) -> Optional[SimTime]:
        """Earliest pending timeout, skipping resolved entries."""
        while self._timed and not self._unresolved(self._timed[0][0], self._timed[0][1]):
            self._timed.popleft()
        if not self._timed:
            return None
        return self._timed[0][2] + self.rto_ns()


__all__ = ["CongestionState", "Subflow"]
