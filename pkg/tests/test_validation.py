from __future__ import annotations

import pytest

from mpsched.harness import validation
from mpsched.harness.validation import (
    brute_force_argmin,
    check_ewma,
    check_jsq_mmc_bounds,
    check_jsq_equivalence,
    check_min_conditional_wait,
    check_queueaware,
    run_checks,
)
from mpsched.queueing.policies import HIGHEST, override_tie_break

pytestmark = pytest.mark.unit


def test_brute_force_argmin_prefers_lowest_index() -> None:
    assert brute_force_argmin([3.0, 1.0, 1.0]) == 2
    assert brute_force_argmin([0.0, 0.0]) == 1
    assert brute_force_argmin([5.0]) == 1


@pytest.mark.parametrize("check", [check_queueaware, check_min_conditional_wait])
def test_oracle_checks_pass(check) -> None:
    assert "0 mismatches" in check(True)


@pytest.mark.parametrize("check", [check_queueaware, check_min_conditional_wait])
def test_oracle_checks_catch_flipped_tie_break(check) -> None:
    with override_tie_break(HIGHEST):
        with pytest.raises(AssertionError, match="differ from brute force"):
            check(True)


def test_ewma_and_jsq_checks_pass() -> None:
    assert check_ewma(True).startswith("weights exact")
    assert "agree" in check_jsq_equivalence(True)


def test_jsq_wait_lies_between_pooled_and_split_queues() -> None:
    detail = check_jsq_mmc_bounds(True)
    assert detail.startswith("0.9608s <= jsq ")
    assert detail.split(" <= ")[2].startswith("2.3333s")


def test_run_checks_reports_instead_of_raising(monkeypatch) -> None:
    def ok(quick: bool) -> str:
        return f"quick={quick}"

    def broken(quick: bool) -> str:
        raise AssertionError("off by one")

    monkeypatch.setattr(validation, "CHECKS", [("ok", ok), ("broken", broken)])
    results = run_checks(quick=True)
    assert [(r.name, r.passed, r.detail) for r in results] == [
        ("ok", True, "quick=True"),
        ("broken", False, "off by one"),
    ]
    assert all(r.duration_s >= 0.0 for r in results)


def test_run_checks_applies_fault_only_when_asked(monkeypatch) -> None:
    monkeypatch.setattr(validation, "CHECKS", [("queueaware oracle", check_queueaware)])
    assert run_checks(quick=True)[0].passed
    assert not run_checks(quick=True, inject_fault=True)[0].passed
    assert run_checks(quick=True)[0].passed


@pytest.mark.slow
def test_full_quick_suite_passes() -> None:
    results = run_checks(quick=True)
    assert [r.name for r in results if not r.passed] == []
    assert len(results) == len(validation.CHECKS)
