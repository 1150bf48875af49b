from __future__ import annotations

import itertools

import numpy as np
import pytest

from mpsched.core.exceptions import ConfigurationError
from mpsched.harness.validation import brute_force_argmin
from mpsched.queueing.policies import (
    HIGHEST,
    RoundRobinDispatch,
    argmin_index,
    make_dispatch_policy,
    override_tie_break,
    policy_jsq,
    policy_min_conditional_wait,
)
from mpsched.sim.rng import RandomStream

pytestmark = pytest.mark.unit


def test_min_conditional_wait_compares_expected_waits() -> None:
    # waits (3.0, 4.0)
    assert policy_min_conditional_wait((3, 2), (1.0, 0.5)) == 1


def test_min_conditional_wait_ties_go_to_lowest_index() -> None:
    assert policy_min_conditional_wait((0, 0), (3.0, 9.0)) == 1


def test_min_conditional_wait_matches_exhaustive_scan_on_random_cases() -> None:
    rng = np.random.default_rng(2024)
    for _ in range(10_000):
        k = int(rng.integers(1, 5))
        n = [int(x) for x in rng.integers(0, 101, size=k)]
        mu = [float(x) for x in rng.uniform(0.1, 10.0, size=k)]
        expected = brute_force_argmin([a / b for a, b in zip(n, mu)])
        assert policy_min_conditional_wait(n, mu) == expected


@pytest.mark.parametrize("scale", [0.25, 2.0, 1024.0])
def test_min_conditional_wait_is_scale_invariant(scale: float) -> None:
    rates = (1.0, 2.0, 4.0)
    for n in itertools.product(range(0, 12, 3), repeat=3):
        assert policy_min_conditional_wait(n, rates) == policy_min_conditional_wait(
            n, [r * scale for r in rates]
        )


@pytest.mark.parametrize(
    ("occupancies", "rates", "fragment"),
    [
        ((), (), "at least one facility"),
        ((1, 2), (1.0, 0.0), "facilities.2.service_rate"),
        ((1, 2), (1.0,), "service rates"),
    ],
)
def test_min_conditional_wait_rejects_bad_facilities(occupancies, rates, fragment) -> None:
    with pytest.raises(ConfigurationError, match=fragment):
        policy_min_conditional_wait(occupancies, rates)


def test_jsq_examples() -> None:
    assert policy_jsq((5, 2, 7)) == 2
    assert policy_jsq((4, 4)) == 1
    with pytest.raises(ConfigurationError):
        policy_jsq(())


def test_jsq_equals_min_conditional_wait_for_identical_rates() -> None:
    for n in itertools.product(range(0, 101, 4), repeat=2):
        assert policy_jsq(n) == policy_min_conditional_wait(n, (250.0, 250.0))


def test_argmin_index_respects_eligibility() -> None:
    assert argmin_index([0.0, 5.0, 1.0], [False, True, True]) == 3
    assert argmin_index([1.0, 2.0], [False, False]) is None


def test_tie_break_override_is_scoped() -> None:
    with override_tie_break(HIGHEST):
        assert policy_jsq((4, 4)) == 2
    assert policy_jsq((4, 4)) == 1


def test_tie_break_override_rejects_unknown_mode() -> None:
    with pytest.raises(ConfigurationError):
        with override_tie_break("middle"):
            pass


def test_round_robin_dispatch_cycles() -> None:
    dispatch = RoundRobinDispatch()
    assert [dispatch((0, 0, 0)) for _ in range(5)] == [1, 2, 3, 1, 2]


def test_random_dispatch_is_reproducible() -> None:
    first = make_dispatch_policy("random", RandomStream(4, "dispatch"))
    second = make_dispatch_policy("random", RandomStream(4, "dispatch"))
    picks = [first((0, 0)) for _ in range(40)]
    assert picks == [second((0, 0)) for _ in range(40)]
    assert set(picks) == {1, 2}


def test_unknown_dispatcher_lists_valid_names() -> None:
    with pytest.raises(ConfigurationError, match="min_conditional_wait"):
        make_dispatch_policy("fastest")
    with pytest.raises(ConfigurationError, match="random stream"):
        make_dispatch_policy("random")
