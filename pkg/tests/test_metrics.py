from __future__ import annotations

import numpy as np
import pytest

from mpsched.protocol.metrics import (
    DeliveryLog,
    assignment_run_lengths,
    interval_boundaries,
    measure_goodput,
    stickiness_p95,
)
from mpsched.sim.engine import seconds_to_ns

pytestmark = pytest.mark.unit


def _log(entries) -> DeliveryLog:
    log = DeliveryLog()
    for t, subflow, size in entries:
        log.record(seconds_to_ns(t), subflow, size)
    return log


def test_interval_boundaries_close_with_a_partial_interval() -> None:
    assert list(interval_boundaries(1.0, seconds_to_ns(3))) == [seconds_to_ns(s) for s in (1, 2, 3)]
    assert list(interval_boundaries(1.0, seconds_to_ns(2.5))) == [
        seconds_to_ns(1),
        seconds_to_ns(2),
        seconds_to_ns(2.5),
    ]
    assert list(interval_boundaries(1.0, seconds_to_ns(0.4))) == [seconds_to_ns(0.4)]


def test_goodput_bins_are_closed_on_the_right() -> None:
    log = _log([(0.5, 1, 1500), (1.0, 1, 1500), (1.2, 2, 1500)])
    series = measure_goodput(log, 1.0, 2, end=seconds_to_ns(2))
    np.testing.assert_allclose(series.per_subflow_bps[:, 0], [24_000.0, 0.0])
    np.testing.assert_allclose(series.per_subflow_bps[:, 1], [0.0, 12_000.0])


def test_empty_interval_reports_zero() -> None:
    series = measure_goodput(_log([(0.2, 1, 1000)]), 1.0, 1, end=seconds_to_ns(3))
    assert series.aggregate_bps.tolist() == [8000.0, 0.0, 0.0]


def test_aggregate_is_sum_of_subflows() -> None:
    rng = np.random.default_rng(5)
    times = np.sort(rng.uniform(0.0, 10.0, size=500))
    log = _log((t, int(rng.integers(1, 3)), 1500) for t in times)
    series = measure_goodput(log, 1.0, 2, end=seconds_to_ns(10))
    np.testing.assert_array_equal(series.aggregate_bps, series.per_subflow_bps.sum(axis=1))
    recounted = series.per_subflow_bps.sum() * 1.0 / 8
    assert recounted == pytest.approx(log.total_bytes)


def test_partial_last_interval_uses_its_own_length() -> None:
    log = _log([(2.2, 1, 1500)])
    series = measure_goodput(log, 1.0, 1, end=seconds_to_ns(2.5))
    assert series.per_subflow_bps[-1, 0] == pytest.approx(1500 * 8 / 0.5)


def test_explicit_boundaries_drop_later_deliveries() -> None:
    log = _log([(0.5, 1, 100), (3.5, 1, 100)])
    series = measure_goodput(log, 1.0, 1, boundaries=[seconds_to_ns(1), seconds_to_ns(2)])
    assert series.per_subflow_bps[:, 0].tolist() == [800.0, 0.0]


def test_assignment_run_lengths() -> None:
    assert assignment_run_lengths([1, 1, 2, 1, 1, 1, 2, 2]) == [2, 1, 3, 2]
    assert assignment_run_lengths([]) == []


def test_stickiness_percentile() -> None:
    assert stickiness_p95([]) == 0.0
    assert stickiness_p95([1] * 19 + [40]) == pytest.approx(np.percentile([1] * 19 + [40], 95))
