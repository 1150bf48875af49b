"""
mpsched - Packet Records
"""

from enum import Enum
from typing import Optional

from mpsched.sim.engine import SimTime


class PacketState(str, Enum):
    """Where a packet currently is. Every accepted packet is in exactly one state."""
    SENDBUFFER = "sendbuffer"
    QUEUED = "queued"
    IN_FLIGHT = "in_flight"
    LOST_IN_LINK = "lost_in_link"
    DROPPED_LOCAL = "dropped_local"
    DELIVERED = "delivered"


class PacketRecord:
    """
    One application packet and its current transmission attempt.

    Timestamps are integer nanoseconds of the latest attempt. ``attempt``
    increases on every assignment so stale events can be recognised.
    """

    __slots__ = (
        "seq",
        "size",
        "state",
        "subflow",
        "attempt",
        "assign_order",
        "avoid_subflow",
        "t_s",
        "t_enter_nic",
        "t_a",
    )

    def __init__(self, seq: int, size: int):
        self.seq = seq
        self.size = size
        self.state = PacketState.SENDBUFFER
        self.subflow: Optional[int] = None
        self.attempt = 0
        self.assign_order = -1
        self.avoid_subflow: Optional[int] = None
        self.t_s: Optional[SimTime] = None
        self.t_enter_nic: Optional[SimTime] = None
        self.t_a: Optional[SimTime] = None

    @property
    def retransmission(self) -> bool:
        return self.attempt > 1

    def __repr__(self) -> str:
        return (
            f"PacketRecord(seq={self.seq}, state={self.state.value}, "
            f"subflow={self.subflow}, attempt={self.attempt})"
        )


__all__ = ["PacketState", "PacketRecord"]
