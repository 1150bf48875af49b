"""
mpsched - Scheduler Contract and Registry
Stateful schedulers wrapping the pure selection policies
"""

from abc import ABC, abstractmethod
from typing import Callable, Dict, List, Optional, Sequence

from mpsched.core.exceptions import ConfigurationError
from mpsched.schedulers.policies import (
    SubflowView,
    choose_jsq,
    choose_minsrtt,
    choose_queueaware,
    choose_random,
    choose_roundrobin,
)
from mpsched.sim.rng import RandomStream


class Scheduler(ABC):
    """Picks a subflow for the packet at the head of the send buffer."""

    name: str = ""

    @abstractmethod
    def choose(self, views: Sequence[SubflowView], now: float) -> Optional[int]:
        """
        Select a subflow.

        Args:
            views: One snapshot per subflow, in index order
            now: Current simulated time in seconds

        Returns:
            1-based subflow index, or None to keep the packet buffered
        """

    def __repr__(self) -> str:
        return f"{type(self).__name__}()"


class QueueAwareScheduler(Scheduler):
    name = "queueaware"

    def choose(self, views: Sequence[SubflowView], now: float) -> Optional[int]:
        return choose_queueaware(views, now)


class RoundRobinScheduler(Scheduler):
    name = "roundrobin"

    def __init__(self):
        self.cursor = 0

    def choose(self, views: Sequence[SubflowView], now: float) -> Optional[int]:
        choice, self.cursor = choose_roundrobin(views, self.cursor)
        return choice


class MinSrttScheduler(Scheduler):
    """
    Lowest smoothed RTT first.

    Until every usable subflow has an SRTT sample the choice is made
    round-robin so each path gets measured.
    """

    name = "minsrtt"

    def __init__(self):
        self._warmup = RoundRobinScheduler()

    @property
    def warming_up(self) -> bool:
        return self._warmup is not None

    def choose(self, views: Sequence[SubflowView], now: float) -> Optional[int]:
        if self._warmup is not None:
            if all(v.srtt is not None for v in views if v.usable):
                self._warmup = None
            else:
                return self._warmup.choose(views, now)
        return choose_minsrtt(views, now)


class RandomScheduler(Scheduler):
    name = "random"

    def __init__(self, stream: RandomStream):
        self.stream = stream

    def choose(self, views: Sequence[SubflowView], now: float) -> Optional[int]:
        return choose_random(views, self.stream)


class JsqScheduler(Scheduler):
    name = "jsq"

    def choose(self, views: Sequence[SubflowView], now: float) -> Optional[int]:
        return choose_jsq(views, now)


_REGISTRY: Dict[str, Callable[[Optional[RandomStream]], Scheduler]] = {
    "queueaware": lambda rng: QueueAwareScheduler(),
    "minsrtt": lambda rng: MinSrttScheduler(),
    "roundrobin": lambda rng: RoundRobinScheduler(),
    "random": lambda rng: RandomScheduler(rng),
    "jsq": lambda rng: JsqScheduler(),
}

SCHEDULER_NAMES: List[str] = list(_REGISTRY)


def create_scheduler(name: str, rng: Optional[RandomStream] = None) -> Scheduler:
    """
    Instantiate a scheduler by name.

    Raises:
        ConfigurationError: Unknown name, or random without a stream
    """
    factory = _REGISTRY.get(name)
    if factory is None:
        raise ConfigurationError(
            [f"scheduler: unknown scheduler {name!r}; valid: {', '.join(SCHEDULER_NAMES)}"]
        )
    if name == "random" and rng is None:
        raise ConfigurationError(["scheduler: random needs a random stream"])
    return factory(rng)


__all__ = [
    "Scheduler",
    "QueueAwareScheduler",
    "MinSrttScheduler",
    "RoundRobinScheduler",
    "RandomScheduler",
    "JsqScheduler",
    "SCHEDULER_NAMES",
    "create_scheduler",
]
