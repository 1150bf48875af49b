"""Protocol-mode model of a multipath sender."""

from mpsched.protocol.connection import (
    Assignment,
    ConnectionResult,
    MptcpConnection,
    SubflowCounters,
    simulate_connection,
)
from mpsched.protocol.load import LoadGenerator, interarrival_s, offer_load, packets_for_file
from mpsched.protocol.metrics import (
    TRACE_COLUMNS,
    DeliveryLog,
    GoodputSeries,
    TraceRecord,
    measure_goodput,
    stickiness_p95,
)
from mpsched.protocol.packet import PacketRecord, PacketState
from mpsched.protocol.subflow import CongestionState, Subflow

__all__ = [
    "Assignment",
    "ConnectionResult",
    "MptcpConnection",
    "SubflowCounters",
    "simulate_connection",
    "LoadGenerator",
    "interarrival_s",
    "offer_load",
    "packets_for_file",
    "TRACE_COLUMNS",
    "DeliveryLog",
    "GoodputSeries",
    "TraceRecord",
    "measure_goodput",
    "stickiness_p95",
    "PacketRecord",
    "PacketState",
    "CongestionState",
    "Subflow",
]
