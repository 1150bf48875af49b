"""Parallel service facilities, dispatcher policies and queueing oracles."""

from mpsched.queueing.facilities import (
    AbstractStats,
    ArrivalKind,
    ArrivalProcess,
    FacilitySpec,
    FacilityStats,
    ServiceDistribution,
    ServiceKind,
    simulate_facilities,
)
from mpsched.queueing.oracles import erlang_c, mm1_mean_wait, mmc_mean_wait
from mpsched.queueing.policies import (
    make_dispatch_policy,
    override_tie_break,
    policy_jsq,
    policy_min_conditional_wait,
)

__all__ = [
    "AbstractStats",
    "ArrivalKind",
    "ArrivalProcess",
    "FacilitySpec",
    "FacilityStats",
    "ServiceDistribution",
    "ServiceKind",
    "simulate_facilities",
    "erlang_c",
    "mm1_mean_wait",
    "mmc_mean_wait",
    "make_dispatch_policy",
    "override_tie_break",
    "policy_jsq",
    "policy_min_conditional_wait",
]
