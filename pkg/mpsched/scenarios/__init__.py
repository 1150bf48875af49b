"""Scenario schemas, presets and configuration loading."""

from mpsched.scenarios.schemas import (
    LoadPattern,
    LoadSpec,
    ProtocolSpec,
    ScenarioConfig,
    SubflowSpec,
    validate,
)
from mpsched.scenarios.presets import PRESET_NAMES, preset
from mpsched.scenarios.loader import apply_override, dump_config, load_raw_config, resolve_scenario

__all__ = [
    "LoadPattern",
    "LoadSpec",
    "ProtocolSpec",
    "ScenarioConfig",
    "SubflowSpec",
    "validate",
    "PRESET_NAMES",
    "preset",
    "apply_override",
    "dump_config",
    "load_raw_config",
    "resolve_scenario",
]
