"""
mpsched - Application Load
Packet generation for constant-rate, Poisson and file-upload workloads
"""

import math
from typing import Optional

from mpsched.core.exceptions import ConfigurationError
from mpsched.scenarios.schemas import LoadPattern, LoadSpec
from mpsched.sim.engine import SimTime, seconds_to_ns
from mpsched.sim.rng import RandomStream, draw_exponential


def packets_for_file(file_size_bytes: int, packet_size_bytes: int) -> int:
    """Number of packets needed for a file; the last one may be partial."""
    return math.ceil(file_size_bytes / packet_size_bytes)


def interarrival_s(rate_bps: float, packet_size_bytes: int) -> float:
    """Seconds between packets of a constant-rate load."""
    return packet_size_bytes * 8 / rate_bps


class LoadGenerator:
    """
    Application writer feeding the send buffer.

    Arrival times are produced on demand with ``generate_until(now)``, which
    returns how many packets the application produced up to ``now``. While
    the send buffer is full those packets wait in the application, so no
    event is needed per generated packet.
    """

    def __init__(self, spec: LoadSpec, packet_size_bytes: int, stream: Optional[RandomStream] = None):
        self.spec = spec
        self.packet_size = packet_size_bytes
        self.stream = stream
        self.generated = 0

        if spec.pattern is LoadPattern.FILE:
            if not spec.file_size_bytes or spec.file_size_bytes <= 0:
                raise ConfigurationError(["load.file_size_bytes: must be > 0"])
            self.total: Optional[int] = packets_for_file(spec.file_size_bytes, packet_size_bytes)
            self.next_arrival: Optional[SimTime] = 0
            self._gap_ns = 0
            self._rate_pps = 0.0
        else:
            if not spec.rate_bps or spec.rate_bps <= 0:
                raise ConfigurationError(["load.rate_bps: must be > 0"])
            if spec.pattern is LoadPattern.POISSON and stream is None:
                raise ConfigurationError(["load: poisson pattern needs a random stream"])
            self.total = None
            self._rate_pps = spec.rate_bps / (packet_size_bytes * 8)
            self._gap_ns = max(1, seconds_to_ns(interarrival_s(spec.rate_bps, packet_size_bytes)))
            self.next_arrival = self._draw_gap()

    @property
    def is_file(self) -> bool:
        return self.total is not None

    @property
    def exhausted(self) -> bool:
        return self.total is not None and self.generated >= self.total

    def packet_size_for(self, index: int) -> int:
        """Size in bytes of the index-th packet (0-based)."""
        if self.total is not None and index == self.total - 1:
            remainder = self.spec.file_size_bytes - index * self.packet_size
            return remainder
        return self.packet_size

    def _draw_gap(self) -> SimTime:
        if self.spec.pattern is LoadPattern.POISSON:
            return seconds_to_ns(draw_exponential(self.stream, self._rate_pps))
        return self._gap_ns

    def generate_until(self, now: SimTime) -> int:
        """Produce every packet due at or before ``now``; returns the count."""
        if self.total is not None:
            produced = self.total - self.generated
            self.generated = self.total
            self.next_arrival = None
            return produced

        produced = 0
        while self.next_arrival is not None and self.next_arrival <= now:
            produced += 1
            self.next_arrival += self._draw_gap()
        self.generated += produced
        return produced


def offer_load(spec: LoadSpec, packet_size_bytes: int = 1500, stream: Optional[RandomStream] = None) -> LoadGenerator:
    """
    Build the arrival stream for a load spec.

    Args:
        spec: Rate or file load description
        packet_size_bytes: Application packet size
        stream: Random stream for the Poisson pattern

    Returns:
        LoadGenerator positioned at t=0
    """
    return LoadGenerator(spec, packet_size_bytes, stream)


__all__ = ["packets_for_file", "interarrival_s", "LoadGenerator", "offer_load"]
