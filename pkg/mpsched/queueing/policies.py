"""
mpsched - Dispatcher Policies
Assignment of an arriving packet to one of K parallel service facilities

Facility indices are 1-based throughout. Ties go to the lowest index unless
the tie-break hook has been flipped with override_tie_break().
"""

from contextlib import contextmanager
from typing import Callable, Iterator, List, Optional, Sequence

from mpsched.core.exceptions import ConfigurationError
from mpsched.sim.rng import RandomStream

DispatchPolicy = Callable[[Sequence[int], Sequence[float]], int]

LOWEST = "lowest"
HIGHEST = "highest"

_tie_break = LOWEST


@contextmanager
def override_tie_break(mode: str = HIGHEST) -> Iterator[None]:
    """Temporarily change the tie-break rule (fault injection for the oracle suite)."""
    global _tie_break
    if mode not in (LOWEST, HIGHEST):
        raise ConfigurationError([f"tie_break: unknown mode {mode!r}"])
    previous = _tie_break
    _tie_break = mode
    try:
        yield
    finally:
        _tie_break = previous


def argmin_index(values: Sequence[float], eligible: Optional[Sequence[bool]] = None) -> Optional[int]:
    """
    1-based index of the smallest value among eligible entries.

    Returns None when nothing is eligible.
    """
    best: Optional[int] = None
    best_value = 0.0
    prefer_later = _tie_break == HIGHEST
    for i, value in enumerate(values):
        if eligible is not None and not eligible[i]:
            continue
        if best is None or value < best_value or (prefer_later and value == best_value):
            best = i
            best_value = value
    return None if best is None else best + 1


def _check_facilities(occupancies: Sequence[int], rates: Optional[Sequence[float]] = None) -> None:
    if len(occupancies) == 0:
        raise ConfigurationError(["facilities: at least one facility is required"])
    if rates is None:
        return
    if len(rates) != len(occupancies):
        raise ConfigurationError(
            [f"facilities: {len(occupancies)} occupancies but {len(rates)} service rates"]
        )
    for k, mu in enumerate(rates, start=1):
        if not mu > 0:
            raise ConfigurationError([f"facilities.{k}.service_rate: must be > 0, got {mu}"])


def policy_min_conditional_wait(occupancies: Sequence[int], rates: Sequence[float]) -> int:
    """
    Pick the facility with the smallest expected wait n_k / mu_k.

    Args:
        occupancies: Waiting packets per facility (in-service excluded)
        rates: Service rates mu_k in packets/second

    Returns:
        1-based facility index

    Raises:
        ConfigurationError: Empty facility set or a nonpositive rate
    """
    _check_facilities(occupancies, rates)
    return argmin_index([n / mu for n, mu in zip(occupancies, rates)])


def policy_jsq(occupancies: Sequence[int], rates: Optional[Sequence[float]] = None) -> int:
    """Join the shortest queue; service rates are ignored."""
    _check_facilities(occupancies)
    return argmin_index(occupancies)


class RandomDispatch:
    """Uniform random split, ignoring queue state."""

    def __init__(self, stream: RandomStream):
        self.stream = stream

    def __call__(self, occupancies: Sequence[int], rates: Optional[Sequence[float]] = None) -> int:
        _check_facilities(occupancies)
        return self.stream.index(len(occupancies)) + 1


class RoundRobinDispatch:
    """Cycle through facilities 1..K."""

    def __init__(self):
        self.cursor = 0

    def __call__(self, occupancies: Sequence[int], rates: Optional[Sequence[float]] = None) -> int:
        _check_facilities(occupancies)
        k = self.cursor % len(occupancies)
        self.cursor = k + 1
        return k + 1


DISPATCH_POLICY_NAMES: List[str] = ["min_conditional_wait", "jsq", "random", "roundrobin"]


def make_dispatch_policy(name: str, stream: Optional[RandomStream] = None) -> DispatchPolicy:
    """
    Build a dispatcher by name.

    Raises:
        ConfigurationError: Unknown name, or random without a stream
    """
    if name == "min_conditional_wait":
        return policy_min_conditional_wait
    if name == "jsq":
        return policy_jsq
    if name == "random":
        if stream is None:
            raise ConfigurationError(["policy: random dispatch needs a random stream"])
        return RandomDispatch(stream)
    if name == "roundrobin":
        return RoundRobinDispatch()
    raise ConfigurationError(
        [f"policy: unknown dispatcher {name!r}; valid: {', '.join(DISPATCH_POLICY_NAMES)}"]
    )


__all__ = [
    "DispatchPolicy",
    "LOWEST",
    "HIGHEST",
    "override_tie_break",
    "argmin_index",
    "policy_min_conditional_wait",
    "policy_jsq",
    "RandomDispatch",
    "RoundRobinDispatch",
    "DISPATCH_POLICY_NAMES",
    "make_dispatch_policy",
]
