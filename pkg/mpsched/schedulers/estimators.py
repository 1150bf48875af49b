"""
mpsched - Path Estimators
Exponentially weighted service-time estimate and smoothed RTT
"""

from dataclasses import dataclass
from typing import Optional

from mpsched.core.exceptions import ConfigurationError, SimulationError


@dataclass(frozen=True)
class EwmaConfig:
    """Smoothing weights: alpha for the service estimate, srtt_gain for SRTT."""
    alpha: float = 0.8
    srtt_gain: float = 0.125

    def __post_init__(self):
        errors = []
        if not 0 < self.alpha < 1:
            errors.append(f"alpha: must be in (0,1), got {self.alpha}")
        if not 0 < self.srtt_gain < 1:
            errors.append(f"srtt_gain: must be in (0,1), got {self.srtt_gain}")
        if errors:
            raise ConfigurationError(errors)


@dataclass(frozen=True)
class PacketTimestamps:
    """
    Timestamps of one transmission attempt, in seconds.

    t_s: assigned to a subflow; t_enter_nic: serialisation starts;
    t_a: ACK received.
    """
    t_s: float
    t_enter_nic: float
    t_a: float

    @property
    def rtt(self) -> float:
        return self.t_a - self.t_s

    @property
    def wait(self) -> float:
        return self.t_enter_nic - self.t_s

    @property
    def service(self) -> float:
        """X_i = RTT_i - W_i."""
        return self.rtt - self.wait


def update_service_estimate(current: Optional[float], sample: float, alpha: float = 0.8) -> float:
    """
    Fold a service-time sample into the estimate: alpha*S + (1-alpha)*X.

    Args:
        current: Current estimate in seconds, or None before the first sample
        sample: Measured service time X_i in seconds
        alpha: Weight of the previous estimate

    Returns:
        New estimate; the first sample initialises it

    Raises:
        SimulationError: If the sample is negative
    """
    if sample < 0:
        raise SimulationError(f"negative service sample {sample!r}: timestamp ordering violated")
    if current is None:
        return sample
    return alpha * current + (1 - alpha) * sample


def update_srtt(current: Optional[float], sample: float, gain: float = 0.125) -> float:
    """srtt := (1-g)*srtt + g*sample, initialised to the first sample."""
    if not sample > 0:
        raise SimulationError(f"nonpositive RTT sample {sample!r}")
    if current is None:
        return sample
    return (1 - gain) * current + gain * sample


__all__ = ["EwmaConfig", "PacketTimestamps", "update_service_estimate", "update_srtt"]
