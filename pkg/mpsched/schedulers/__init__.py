"""Subflow schedulers, their estimators and the scheduler registry."""

from mpsched.queueing.policies import override_tie_break
from mpsched.schedulers.base import (
    SCHEDULER_NAMES,
    JsqScheduler,
    MinSrttScheduler,
    QueueAwareScheduler,
    RandomScheduler,
    RoundRobinScheduler,
    Scheduler,
    create_scheduler,
)
from mpsched.schedulers.estimators import (
    EwmaConfig,
    PacketTimestamps,
    update_service_estimate,
    update_srtt,
)
from mpsched.schedulers.policies import (
    SubflowView,
    choose_jsq,
    choose_minsrtt,
    choose_queueaware,
    choose_random,
    choose_roundrobin,
)

__all__ = [
    "override_tie_break",
    "SCHEDULER_NAMES",
    "JsqScheduler",
    "MinSrttScheduler",
    "QueueAwareScheduler",
    "RandomScheduler",
    "RoundRobinScheduler",
    "Scheduler",
    "create_scheduler",
    "EwmaConfig",
    "PacketTimestamps",
    "update_service_estimate",
    "update_srtt",
    "SubflowView",
    "choose_jsq",
    "choose_minsrtt",
    "choose_queueaware",
    "choose_random",
    "choose_roundrobin",
]
