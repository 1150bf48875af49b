from __future__ import annotations

from typing import Any, Callable, Dict, List, Optional

import pytest

from mpsched.core.config import settings
from mpsched.core.logging_config import setup_logging
from mpsched.scenarios.schemas import ScenarioConfig, validate


def wifi(name: str = "wifi", rate_bps: float = 6e6, delay_s: float = 0.005, per: float = 0.0, **extra: Any) -> Dict[str, Any]:
    return {"name": name, "link_rate_bps": rate_bps, "one_way_delay_s": delay_s, "per": per, **extra}


def build_scenario(
    *,
    name: str = "test",
    subflows: Optional[List[Dict[str, Any]]] = None,
    rate_bps: Optional[float] = 50e6,
    file_size_bytes: Optional[int] = None,
    pattern: Optional[str] = None,
    scheduler: str = "queueaware",
    duration_s: float = 3.0,
    warmup_s: float = 0.0,
    interval_s: float = 1.0,
    seeds: Optional[List[int]] = None,
    protocol: Optional[Dict[str, Any]] = None,
) -> ScenarioConfig:
    if file_size_bytes is not None:
        load: Dict[str, Any] = {"pattern": "file", "file_size_bytes": file_size_bytes}
    else:
        load = {"pattern": pattern or "constant", "rate_bps": rate_bps}
    raw: Dict[str, Any] = {
        "name": name,
        "subflows": subflows if subflows is not None else [wifi("wifi-1"), wifi("wifi-2")],
        "load": load,
        "scheduler": scheduler,
        "duration_s": duration_s,
        "warmup_s": warmup_s,
        "interval_s": interval_s,
        "seeds": seeds or [1, 2],
    }
    if protocol:
        raw["protocol"] = protocol
    return validate(raw)


@pytest.fixture
def scenario_factory() -> Callable[..., ScenarioConfig]:
    return build_scenario


@pytest.fixture
def two_wifi() -> ScenarioConfig:
    return build_scenario(name="two-wifi")


@pytest.fixture
def lossy_two_wifi() -> ScenarioConfig:
    return build_scenario(name="lossy", subflows=[wifi("lossy", per=0.01), wifi("clean")], duration_s=5.0)


@pytest.fixture
def restore_logging():
    level, fmt = settings.LOG_LEVEL, settings.LOG_FORMAT
    yield
    settings.LOG_LEVEL, settings.LOG_FORMAT = level, fmt
    setup_logging(level, fmt)
