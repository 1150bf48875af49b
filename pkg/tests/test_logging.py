from __future__ import annotations

import json

import pytest
import structlog

from mpsched.core.logging_config import get_logger, run_context, setup_logging

pytestmark = [pytest.mark.unit, pytest.mark.usefixtures("restore_logging")]


@pytest.fixture(autouse=True)
def _clear_context():
    yield
    structlog.contextvars.clear_contextvars()


def _records(err: str) -> list:
    return [json.loads(line) for line in err.splitlines() if line.startswith("{")]


def test_json_lines_carry_event_and_run_context(capsys) -> None:
    setup_logging("INFO", "json")
    with run_context(scenario="wifi-4g", scheduler="queueaware", seed=3):
        get_logger("mpsched.test").info("seed run finished", aggregate_goodput_bps=1.5e7)

    captured = capsys.readouterr()
    assert captured.out == ""
    (record,) = _records(captured.err)
    assert record["event"] == "seed run finished"
    assert record["scenario"] == "wifi-4g"
    assert record["seed"] == 3
    assert record["aggregate_goodput_bps"] == 1.5e7


def test_level_filtering(capsys) -> None:
    setup_logging("WARNING", "json")
    logger = get_logger("mpsched.test")
    logger.info("hidden")
    logger.warning("shown")
    events = [r["event"] for r in _records(capsys.readouterr().err)]
    assert events == ["shown"]


def test_console_renderer_prints_key_values(capsys) -> None:
    setup_logging("INFO", "console")
    get_logger("mpsched.test").info("seed run finished", local_drops=4)
    err = capsys.readouterr().err
    assert "seed run finished" in err
    assert "local_drops=4" in err


def test_run_context_is_restored_on_exit(capsys) -> None:
    setup_logging("INFO", "json")
    logger = get_logger("mpsched.test")
    with run_context(scenario="a", seed=1):
        with run_context(seed=2):
            logger.info("inner")
        logger.info("outer")
    logger.info("after")
    inner, outer, after = _records(capsys.readouterr().err)
    assert (inner["scenario"], inner["seed"]) == ("a", 2)
    assert (outer["scenario"], outer["seed"]) == ("a", 1)
    assert "scenario" not in after
    assert "seed" not in after
