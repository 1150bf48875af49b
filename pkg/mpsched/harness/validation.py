"""
mpsched - Built-in Oracle Suite
Brute-force, closed-form and invariant checks run by the validate command
"""

import time
from contextlib import nullcontext
from dataclasses import dataclass
from typing import Callable, List, Sequence, Tuple

from mpsched.core.exceptions import SimulationError
from mpsched.core.logging_config import get_logger
from mpsched.protocol.connection import simulate_connection
from mpsched.queueing.facilities import ArrivalProcess, FacilitySpec, ServiceDistribution, simulate_facilities
from mpsched.queueing.oracles import mm1_mean_wait, mmc_mean_wait
from mpsched.queueing.policies import HIGHEST, override_tie_break, policy_jsq, policy_min_conditional_wait
from mpsched.scenarios.presets import preset
from mpsched.schedulers.estimators import update_service_estimate, update_srtt
from mpsched.schedulers.policies import SubflowView, choose_queueaware
from mpsched.sim.engine import seconds_to_ns

logger = get_logger(__name__)

SERVICE_GRID_S = (0.0005, 0.001, 0.002, 0.004)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    duration_s: float


def brute_force_argmin(values: Sequence[float]) -> int:
    """Lowest 1-based index holding the minimum, by exhaustive scan."""
    smallest = min(values)
    for i, value in enumerate(values):
        if value == smallest:
            return i + 1
    raise AssertionError("unreachable")


def _occupancy_grid(quick: bool) -> List[Tuple[int, int]]:
    step = 5 if quick else 1
    values = list(range(0, 101, step))
    return [(a, b) for a in values for b in values]


def _service_pairs() -> List[Tuple[float, float]]:
    return [(s1, s2) for s1 in SERVICE_GRID_S for s2 in SERVICE_GRID_S]


# ================================
# Checks
# ================================

def check_min_conditional_wait(quick: bool) -> str:
    mismatches = 0
    cases = 0
    for s1, s2 in _service_pairs():
        rates = (1.0 / s1, 1.0 / s2)
        for n in _occupancy_grid(quick):
            cases += 1
            expected = brute_force_argmin([n[0] / rates[0], n[1] / rates[1]])
            if policy_min_conditional_wait(n, rates) != expected:
                mismatches += 1
    if mismatches:
        raise AssertionError(f"{mismatches} of {cases} choices differ from brute force")
    return f"{cases} cases, 0 mismatches"


def check_queueaware(quick: bool) -> str:
    mismatches = 0
    cases = 0
    for s1, s2 in _service_pairs():
        for n in _occupancy_grid(quick):
            cases += 1
            views = [
                SubflowView(index=1, queue_occupancy=n[0], service_estimate=s1),
                SubflowView(index=2, queue_occupancy=n[1], service_estimate=s2),
            ]
            expected = brute_force_argmin([n[0] * s1, n[1] * s2])
            if choose_queueaware(views) != expected:
                mismatches += 1
    if mismatches:
        raise AssertionError(f"{mismatches} of {cases} choices differ from brute force")
    return f"{cases} cases, 0 mismatches"


def check_jsq_equivalence(quick: bool) -> str:
    cases = 0
    for n in _occupancy_grid(quick):
        cases += 1
        if policy_jsq(n) != policy_min_conditional_wait(n, (500.0, 500.0)):
            raise AssertionError(f"jsq and min-conditional-wait differ at n={n}")
    return f"{cases} occupancy vectors agree"


def check_ewma(quick: bool) -> str:
    value = update_service_estimate(1.0, 2.0, 0.8)
    if value != 1.2:
        raise AssertionError(f"update_service_estimate(1.0, 2.0, 0.8) = {value!r}")
    start, target, alpha = 1.0, 0.05, 0.8
    estimate = start
    for n in range(1, 21):
        estimate = update_service_estimate(estimate, target, alpha)
        expected = alpha ** n * abs(start - target)
        if abs(abs(estimate - target) - expected) > 1e-12 * expected:
            raise AssertionError(f"step {n}: |S-c|={abs(estimate - target)!r}, closed form {expected!r}")
    srtt = update_srtt(0.100, 0.200, 0.125)
    if abs(srtt - 0.1125) > 1e-15:
        raise AssertionError(f"update_srtt(100 ms, 200 ms) = {srtt!r}")
    return "weights exact, 20-step recursion matches closed form"


def check_mm1(quick: bool) -> str:
    mu, lam = 1.0, 0.5
    arrivals = 200_000 if quick else 1_000_000
    tolerance = 0.10 if quick else 0.05
    stats = simulate_facilities(
        ArrivalProcess(rate=lam),
        [FacilitySpec(ServiceDistribution.exponential(mu))],
        "jsq",
        seconds_to_ns(arrivals / lam),
        seed=1,
    )
    expected = mm1_mean_wait(lam, mu)
    error = abs(stats.mean_wait_s - expected) / expected
    if error > tolerance:
        raise AssertionError(f"mean wait {stats.mean_wait_s:.4f}s vs {expected:.4f}s ({error:.1%})")
    return f"mean wait {stats.mean_wait_s:.4f}s vs {expected:.4f}s ({error:.2%}, {stats.arrivals} arrivals)"


def check_jsq_mmc_bounds(quick: bool) -> str:
    """
    JSQ over c identical exponential facilities waits no less than the
    pooled M/M/c queue and no more than a uniform split into c M/M/1 queues.
    """
    mu, servers, lam = 1.0, 2, 1.4
    arrivals = 200_000 if quick else 1_000_000
    tolerance = 0.10 if quick else 0.05
    stats = simulate_facilities(
        ArrivalProcess(rate=lam),
        [FacilitySpec(ServiceDistribution.exponential(mu)) for _ in range(servers)],
        "jsq",
        seconds_to_ns(arrivals / lam),
        seed=1,
    )
    pooled = mmc_mean_wait(lam, mu, servers)
    split = mm1_mean_wait(lam / servers, mu)
    if stats.mean_wait_s < (1 - tolerance) * pooled:
        raise AssertionError(f"jsq mean wait {stats.mean_wait_s:.4f}s below the M/M/{servers} bound {pooled:.4f}s")
    if stats.mean_wait_s > (1 + tolerance) * split:
        raise AssertionError(f"jsq mean wait {stats.mean_wait_s:.4f}s above the split M/M/1 wait {split:.4f}s")
    return f"{pooled:.4f}s <= jsq {stats.mean_wait_s:.4f}s <= {split:.4f}s ({stats.arrivals} arrivals)"


def check_conservation(quick: bool) -> str:
    scenario = preset("wifi-lossy")
    duration = 5.0 if quick else 15.0
    scenario = scenario.model_copy(update={"duration_s": duration, "warmup_s": 1.0})
    ticks = 0
    for name in ("queueaware", "minsrtt"):
        result = simulate_connection(scenario.with_scheduler(name), seed=1)
        ticks += result.ticks_checked
    return f"{ticks} measurement ticks conserved"


def check_determinism(quick: bool) -> str:
    scenario = preset("wifi-identical")
    scenario = scenario.model_copy(update={"duration_s": 2.0, "warmup_s": 0.0})
    first = simulate_connection(scenario, seed=7, record_log=True)
    second = simulate_connection(scenario, seed=7, record_log=True)
    if first.dispatch_log != second.dispatch_log:
        raise AssertionError("dispatch logs differ between identical runs")
    return f"{len(first.dispatch_log)} events replayed identically"


CHECKS: List[Tuple[str, Callable[[bool], str]]] = [
    ("min-conditional-wait oracle", check_min_conditional_wait),
    ("queueaware oracle", check_queueaware),
    ("jsq equivalence", check_jsq_equivalence),
    ("ewma recursion", check_ewma),
    ("m/m/1 closed form", check_mm1),
    ("jsq m/m/c bounds", check_jsq_mmc_bounds),
    ("conservation", check_conservation),
    ("determinism", check_determinism),
]


def run_checks(quick: bool = False, inject_fault: bool = False) -> List[CheckResult]:
    """
    Run every check; failures are reported, not raised.

    Args:
        quick: Subsample the oracle grids and shorten the simulated runs
        inject_fault: Flip the scheduler tie-break to the highest index,
            a negative control the oracle checks must catch
    """
    results = []
    for name, check in CHECKS:
        started = time.perf_counter()
        fault = override_tie_break(HIGHEST) if inject_fault else nullcontext()
        try:
            with fault:
                detail = check(quick)
            passed = True
        except (AssertionError, SimulationError) as e:
            detail = str(e)
            passed = False
        elapsed = time.perf_counter() - started
        results.append(CheckResult(name=name, passed=passed, detail=detail, duration_s=elapsed))
        logger.debug("check finished", check=name, passed=passed, duration_s=round(elapsed, 3))
    return results


__all__ = ["CheckResult", "CHECKS", "brute_force_argmin", "run_checks"]
