"""
mpsched - Scenario Presets
The two-path experiment matrix: identical, non-identical, WiFi+4G and
lossy rate-load runs, plus the matching 10 MB upload runs
"""

from typing import Callable, Dict, List

from mpsched.core.config import config
from mpsched.core.exceptions import ConfigurationError
from mpsched.scenarios.schemas import ScenarioConfig, validate


def _cfg(key: str, fallback):
    return config.get("simulation_config", key, fallback)


def _wifi(name: str = "wifi", per: float = 0.0) -> Dict:
    return {
        "name": name,
        "link_rate_bps": _cfg("links.wifi.rate_bps", 6e6),
        "one_way_delay_s": _cfg("links.wifi.one_way_delay_s", 0.005),
        "per": per,
    }


def _wifi_fast() -> Dict:
    return {
        "name": "wifi-fast",
        "link_rate_bps": _cfg("links.wifi_fast.rate_bps", 12e6),
        "one_way_delay_s": _cfg("links.wifi_fast.one_way_delay_s", 0.005),
    }


def _lte() -> Dict:
    return {
        "name": "4g",
        "link_rate_bps": _cfg("links.lte.rate_bps", 12e6),
        "one_way_delay_s": _cfg("links.lte.one_way_delay_s", 0.030),
    }


def _rate_load() -> Dict:
    return {"pattern": _cfg("load.pattern", "constant"), "rate_bps": _cfg("load.rate_bps", 50e6)}


def _file_load() -> Dict:
    return {"pattern": "file", "file_size_bytes": _cfg("load.file_size_bytes", 10_485_760)}


def _rate_scenario(name: str, subflows: List[Dict]) -> Dict:
    return {"name": name, "subflows": subflows, "load": _rate_load()}


def _upload_scenario(name: str, subflows: List[Dict]) -> Dict:
    return {
        "name": name,
        "subflows": subflows,
        "load": _file_load(),
        "warmup_s": 0.0,
        "duration_s": _cfg("run.file_horizon_s", 60.0),
    }


_PRESETS: Dict[str, Callable[[], Dict]] = {
    "wifi-identical": lambda: _rate_scenario("wifi-identical", [_wifi("wifi-1"), _wifi("wifi-2")]),
    "wifi-nonidentical": lambda: _rate_scenario("wifi-nonidentical", [_wifi(), _wifi_fast()]),
    "wifi-4g": lambda: _rate_scenario("wifi-4g", [_wifi(), _lte()]),
    "wifi-lossy": lambda: _rate_scenario(
        "wifi-lossy", [_wifi("wifi-lossy", per=_cfg("links.lossy_per", 0.01)), _wifi("wifi")]
    ),
    "upload-wifi-identical": lambda: _upload_scenario(
        "upload-wifi-identical", [_wifi("wifi-1"), _wifi("wifi-2")]
    ),
    "upload-wifi-lossy": lambda: _upload_scenario(
        "upload-wifi-lossy", [_wifi("wifi-lossy", per=_cfg("links.lossy_per", 0.01)), _wifi("wifi")]
    ),
    "upload-wifi-4g": lambda: _upload_scenario("upload-wifi-4g", [_wifi(), _lte()]),
}

PRESET_NAMES: List[str] = list(_PRESETS)


def preset(name: str) -> ScenarioConfig:
    """
    Build a named scenario.

    Raises:
        ConfigurationError: Unknown name (the message lists every preset)
    """
    builder = _PRESETS.get(name)
    if builder is None:
        raise ConfigurationError(
            [f"preset: unknown preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}"]
        )
    return validate(builder())


__all__ = ["PRESET_NAMES", "preset"]
