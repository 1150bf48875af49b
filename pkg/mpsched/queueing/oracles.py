"""
mpsched - Queueing Theory Oracles
Closed-form mean queueing waits used to validate the facility simulation
"""

from scipy import stats

from mpsched.core.exceptions import ConfigurationError


def mm1_mean_wait(arrival_rate: float, service_rate: float) -> float:
    """
    Mean wait in queue of an M/M/1 system: rho / (mu - lambda).

    Raises:
        ConfigurationError: If the system is not stable
    """
    if not 0 <= arrival_rate < service_rate:
        raise ConfigurationError(
            [f"mm1: need 0 <= lambda < mu, got lambda={arrival_rate}, mu={service_rate}"]
        )
    rho = arrival_rate / service_rate
    return rho / (service_rate - arrival_rate)


def erlang_c(servers: int, offered_load: float) -> float:
    """
    Probability that an arrival must wait in an M/M/c queue.

    Written with Poisson terms so large c does not overflow factorials:
    sum_{k<c} a^k/k! = e^a * cdf(c-1), a^c/c! = e^a * pmf(c).
    """
    if servers < 1 or not 0 <= offered_load < servers:
        raise ConfigurationError(
            [f"erlang_c: need c >= 1 and 0 <= a < c, got c={servers}, a={offered_load}"]
        )
    if offered_load == 0:
        return 0.0
    tail = stats.poisson.pmf(servers, offered_load) * servers / (servers - offered_load)
    head = stats.poisson.cdf(servers - 1, offered_load)
    return float(tail / (head + tail))


def mmc_mean_wait(arrival_rate: float, service_rate: float, servers: int) -> float:
    """Mean wait in queue of an M/M/c system (shared queue, c identical servers)."""
    if not service_rate > 0:
        raise ConfigurationError([f"mmc: mu must be > 0, got {service_rate}"])
    offered_load = arrival_rate / service_rate
    probability_wait = erlang_c(servers, offered_load)
    return probability_wait / (servers * service_rate - arrival_rate)


__all__ = ["mm1_mean_wait", "erlang_c", "mmc_mean_wait"]
