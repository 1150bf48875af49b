"""Discrete-event kernel and seeded random streams."""

from mpsched.sim.engine import (
    NS_PER_SECOND,
    Event,
    EventKind,
    SimStats,
    SimTime,
    Simulator,
    ns_to_seconds,
    seconds_to_ns,
)
from mpsched.sim.rng import RandomStream, draw_exponential

__all__ = [
    "NS_PER_SECOND",
    "Event",
    "EventKind",
    "SimStats",
    "SimTime",
    "Simulator",
    "ns_to_seconds",
    "seconds_to_ns",
    "RandomStream",
    "draw_exponential",
]
