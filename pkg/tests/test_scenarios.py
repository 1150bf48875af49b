from __future__ import annotations

import json
from pathlib import Path

import pytest
import yaml

from mpsched.core.exceptions import ConfigurationError
from mpsched.scenarios import (
    PRESET_NAMES,
    LoadPattern,
    apply_override,
    dump_config,
    load_raw_config,
    preset,
    resolve_scenario,
    validate,
)
from tests.conftest import wifi

pytestmark = pytest.mark.unit


def _raw(**changes) -> dict:
    raw = {
        "name": "custom",
        "subflows": [wifi("a"), wifi("b")],
        "load": {"pattern": "constant", "rate_bps": 50e6},
    }
    raw.update(changes)
    return raw


# ================================
# Presets
# ================================

def test_seven_presets() -> None:
    assert PRESET_NAMES == [
        "wifi-identical",
        "wifi-nonidentical",
        "wifi-4g",
        "wifi-lossy",
        "upload-wifi-identical",
        "upload-wifi-lossy",
        "upload-wifi-4g",
    ]


def test_wifi_identical_preset() -> None:
    scenario = preset("wifi-identical")
    assert [s.link_rate_bps for s in scenario.subflows] == [6e6, 6e6]
    assert [s.per for s in scenario.subflows] == [0.0, 0.0]
    assert scenario.load.rate_bps == 50e6
    assert scenario.seeds == list(range(1, 11))
    assert scenario.protocol.backbone_rate_bps == 30e6
    assert scenario.protocol.core_rate_bps == 50e6


def test_wifi_nonidentical_and_4g_presets() -> None:
    assert [s.link_rate_bps for s in preset("wifi-nonidentical").subflows] == [6e6, 12e6]
    lte = preset("wifi-4g").subflows
    assert [s.link_rate_bps for s in lte] == [6e6, 12e6]
    assert lte[1].one_way_delay_s > lte[0].one_way_delay_s


def test_wifi_lossy_preset_has_one_lossy_path() -> None:
    assert [s.per for s in preset("wifi-lossy").subflows] == [0.01, 0.0]


@pytest.mark.parametrize("name", ["upload-wifi-identical", "upload-wifi-lossy", "upload-wifi-4g"])
def test_upload_presets_transfer_a_file(name: str) -> None:
    scenario = preset(name)
    assert scenario.load.pattern is LoadPattern.FILE
    assert scenario.load.file_size_bytes == 10 * 1024 * 1024
    assert scenario.warmup_s == 0.0
    assert scenario.is_file_transfer


@pytest.mark.parametrize("name", PRESET_NAMES)
def test_presets_validate_unchanged_and_are_pure(name: str) -> None:
    scenario = preset(name)
    assert validate(scenario.model_dump(mode="json")) == scenario
    assert preset(name) == scenario


def test_unknown_preset_names_every_preset() -> None:
    with pytest.raises(ConfigurationError) as info:
        preset("wifi-5g")
    for name in PRESET_NAMES:
        assert name in str(info.value)


# ================================
# Validation
# ================================

def test_defaults_are_filled() -> None:
    scenario = validate(_raw())
    assert scenario.seeds == list(range(1, 11))
    assert scenario.interval_s == 1.0
    assert scenario.warmup_s == 5.0
    assert scenario.duration_s == 60.0
    assert scenario.protocol.send_buffer_capacity == 130
    assert all(s.queue_capacity == 100 for s in scenario.subflows)
    assert scenario.scheduler == "queueaware"


def test_per_out_of_range_is_reported_with_its_path() -> None:
    raw = _raw(subflows=[wifi("a"), wifi("b", per=1.5)])
    with pytest.raises(ConfigurationError) as info:
        validate(raw)
    assert info.value.errors == ["subflows.2.per: per must be in [0,1)"]


def test_duration_must_exceed_warmup() -> None:
    with pytest.raises(ConfigurationError, match=r"duration_s \(3.0\) must be greater than warmup_s \(5.0\)"):
        validate(_raw(duration_s=3, warmup_s=5))


def test_every_violation_is_reported() -> None:
    raw = _raw(subflows=[wifi("a", rate_bps=-1)], scheduler="fastest", seeds=[-3])
    with pytest.raises(ConfigurationError) as info:
        validate(raw)
    paths = [message.split(":")[0] for message in info.value.errors]
    assert "subflows.1.link_rate_bps" in paths
    assert "scheduler" in paths
    assert "seeds" in paths


def test_file_pattern_needs_a_size() -> None:
    with pytest.raises(ConfigurationError, match="file_size_bytes is required"):
        validate(_raw(load={"pattern": "file"}))


def test_unknown_fields_are_rejected() -> None:
    with pytest.raises(ConfigurationError, match="colour"):
        validate(_raw(colour="blue"))


def test_scheduler_name_is_case_insensitive() -> None:
    assert validate(_raw(scheduler="MinSRTT")).scheduler == "minsrtt"


def test_with_scheduler_returns_a_new_validated_config() -> None:
    scenario = preset("wifi-identical")
    assert scenario.with_scheduler("jsq").scheduler == "jsq"
    assert scenario.scheduler == "queueaware"
    with pytest.raises(ConfigurationError):
        scenario.with_scheduler("nope")


# ================================
# Loading and overrides
# ================================

def test_json_and_yaml_files_load_alike(tmp_path: Path) -> None:
    raw = _raw()
    json_path = tmp_path / "scenario.json"
    yaml_path = tmp_path / "scenario.yaml"
    json_path.write_text(json.dumps(raw), encoding="utf-8")
    yaml_path.write_text(yaml.safe_dump(raw), encoding="utf-8")
    assert validate(load_raw_config(json_path)) == validate(load_raw_config(yaml_path))


def test_missing_or_broken_files_are_configuration_errors(tmp_path: Path) -> None:
    with pytest.raises(ConfigurationError, match="file not found"):
        load_raw_config(tmp_path / "absent.json")
    broken = tmp_path / "broken.json"
    broken.write_text("{not json", encoding="utf-8")
    with pytest.raises(ConfigurationError, match="cannot parse"):
        load_raw_config(broken)
    listing = tmp_path / "list.json"
    listing.write_text("[1, 2]", encoding="utf-8")
    with pytest.raises(ConfigurationError, match="mapping"):
        load_raw_config(listing)


def test_override_list_positions_are_one_based() -> None:
    raw = _raw()
    apply_override(raw, "subflows.2.one_way_delay_s=0.06")
    assert raw["subflows"][1]["one_way_delay_s"] == 0.06
    assert raw["subflows"][0]["one_way_delay_s"] == 0.005


def test_override_parses_values_and_creates_mappings() -> None:
    raw = _raw()
    apply_override(raw, "protocol.exclude_retransmission_samples=false")
    apply_override(raw, "seeds=[3, 4]")
    apply_override(raw, "name=renamed")
    assert raw["protocol"] == {"exclude_retransmission_samples": False}
    assert raw["seeds"] == [3, 4]
    assert validate(raw).name == "renamed"


@pytest.mark.parametrize(
    ("assignment", "fragment"),
    [
        ("subflows.3.per=0.1", "out of range 1..2"),
        ("subflows.first.per=0.1", "not a list position"),
        ("no-equals-sign", "expected dotted.path=value"),
        ("name.inner=1", "cannot descend"),
    ],
)
def test_bad_overrides(assignment: str, fragment: str) -> None:
    with pytest.raises(ConfigurationError, match=fragment):
        apply_override(_raw(), assignment)


def test_resolve_scenario_applies_overrides_and_scheduler() -> None:
    scenario = resolve_scenario(
        "wifi-4g", overrides=["subflows.2.one_way_delay_s=0.01"], scheduler="minsrtt"
    )
    assert scenario.subflows[1].one_way_delay_s == 0.01
    assert scenario.scheduler == "minsrtt"


def test_resolve_scenario_needs_exactly_one_source(tmp_path: Path) -> None:
    with pytest.raises(ConfigurationError, match="exactly one"):
        resolve_scenario()
    with pytest.raises(ConfigurationError, match="exactly one"):
        resolve_scenario("wifi-4g", tmp_path / "x.json")


def test_invalid_override_value_is_reported_by_path() -> None:
    with pytest.raises(ConfigurationError, match="subflows.1.per"):
        resolve_scenario("wifi-identical", overrides=["subflows.1.per=2"])


def test_dump_config_round_trips(tmp_path: Path) -> None:
    scenario = preset("upload-wifi-4g")
    path = tmp_path / "dumped.json"
    path.write_text(dump_config(scenario), encoding="utf-8")
    assert resolve_scenario(config_path=path) == scenario
