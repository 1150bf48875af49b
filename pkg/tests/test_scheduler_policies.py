from __future__ import annotations

import itertools

import numpy as np
import pytest

from mpsched.harness.validation import brute_force_argmin
from mpsched.schedulers.policies import (
    SubflowView,
    choose_jsq,
    choose_minsrtt,
    choose_queueaware,
    choose_random,
    choose_roundrobin,
    effective_service_estimates,
)
from mpsched.sim.rng import RandomStream

pytestmark = pytest.mark.unit


def _views(occupancies, estimates=None, srtts=None, **flags) -> list[SubflowView]:
    estimates = estimates or [None] * len(occupancies)
    srtts = srtts or [None] * len(occupancies)
    return [
        SubflowView(index=k, queue_occupancy=n, service_estimate=s, srtt=r, **flags)
        for k, (n, s, r) in enumerate(zip(occupancies, estimates, srtts), start=1)
    ]


def test_queueaware_scores_occupancy_times_estimate() -> None:
    # scores (0.08, 0.02)
    assert choose_queueaware(_views([40, 5], [0.002, 0.004])) == 2


def test_queueaware_ties_to_lowest_index() -> None:
    assert choose_queueaware(_views([0, 0], [0.003, 0.001])) == 1


def test_queueaware_matches_brute_force_on_random_views() -> None:
    rng = np.random.default_rng(99)
    for _ in range(10_000):
        n = [int(x) for x in rng.integers(0, 101, size=2)]
        s = [float(x) for x in rng.choice([0.0005, 0.001, 0.002, 0.004], size=2)]
        assert choose_queueaware(_views(n, s)) == brute_force_argmin([n[0] * s[0], n[1] * s[1]])


@pytest.mark.parametrize("scale", [0.5, 8.0])
def test_queueaware_is_scale_invariant(scale: float) -> None:
    estimates = [0.001, 0.003]
    for n in itertools.product(range(0, 30, 2), repeat=2):
        assert choose_queueaware(_views(list(n), estimates)) == choose_queueaware(
            _views(list(n), [s * scale for s in estimates])
        )


def test_queueaware_with_equal_estimates_is_jsq() -> None:
    for n in itertools.product(range(0, 21), repeat=2):
        assert choose_queueaware(_views(list(n), [0.002, 0.002])) == choose_jsq(_views(list(n)))


def test_queueaware_never_picks_ineligible_views() -> None:
    views = [
        SubflowView(index=1, queue_occupancy=0, service_estimate=0.001, cwnd_available=False),
        SubflowView(index=2, queue_occupancy=90, service_estimate=0.01),
        SubflowView(index=3, queue_occupancy=0, service_estimate=0.001, usable=False),
    ]
    assert choose_queueaware(views) == 2


def test_cold_start_borrows_mean_of_sampled_estimates() -> None:
    views = _views([1, 1, 1], [0.002, None, 0.004])
    assert effective_service_estimates(views) == [0.002, pytest.approx(0.003), 0.004]
    assert effective_service_estimates(_views([0, 0])) == [1.0, 1.0]


def test_minsrtt_examples() -> None:
    assert choose_minsrtt(_views([0, 0], srtts=[0.030, 0.025])) == 2
    assert choose_minsrtt(_views([0, 0], srtts=[0.030, 0.030])) == 1
    blocked = [
        SubflowView(index=1, queue_occupancy=0, srtt=0.030),
        SubflowView(index=2, queue_occupancy=0, srtt=0.025, cwnd_available=False),
    ]
    assert choose_minsrtt(blocked) == 1


def test_jsq_example() -> None:
    assert choose_jsq(_views([7, 3])) == 2


def test_round_robin_alternates() -> None:
    views = _views([0, 0])
    cursor = 0
    picks = []
    for _ in range(4):
        choice, cursor = choose_roundrobin(views, cursor)
        picks.append(choice)
    assert picks == [1, 2, 1, 2]


def test_round_robin_skips_ineligible() -> None:
    views = [SubflowView(index=1, queue_occupancy=0), SubflowView(index=2, queue_occupancy=0, usable=False)]
    assert choose_roundrobin(views, 1) == (1, 1)


def test_random_choice_is_reproducible() -> None:
    views = _views([0, 0, 0])
    a, b = RandomStream(12, "scheduler"), RandomStream(12, "scheduler")
    picks = [choose_random(views, a) for _ in range(30)]
    assert picks == [choose_random(views, b) for _ in range(30)]
    assert set(picks) <= {1, 2, 3}


def test_random_choice_golden_sequence() -> None:
    stream = RandomStream(1, "scheduler")
    picks = [choose_random(_views([0, 0]), stream) for _ in range(10)]
    assert picks == [1, 1, 2, 1, 1, 1, 1, 2, 2, 2]


@pytest.mark.parametrize("policy", ["queueaware", "minsrtt", "jsq", "roundrobin", "random"])
def test_single_eligible_subflow_is_always_chosen(policy: str) -> None:
    views = [
        SubflowView(index=1, queue_occupancy=0, srtt=0.01, service_estimate=0.001, usable=False),
        SubflowView(index=2, queue_occupancy=99, srtt=0.2, service_estimate=0.01),
    ]
    choose = {
        "queueaware": lambda: choose_queueaware(views),
        "minsrtt": lambda: choose_minsrtt(views),
        "jsq": lambda: choose_jsq(views),
        "roundrobin": lambda: choose_roundrobin(views, 0)[0],
        "random": lambda: choose_random(views, RandomStream(1, "scheduler")),
    }[policy]
    assert choose() == 2


@pytest.mark.parametrize(
    "choose",
    [
        choose_queueaware,
        choose_minsrtt,
        choose_jsq,
        lambda v: choose_roundrobin(v, 0)[0],
        lambda v: choose_random(v, RandomStream(1, "scheduler")),
    ],
)
def test_nothing_eligible_returns_none(choose) -> None:
    assert choose(_views([0, 0], cwnd_available=False)) is None
