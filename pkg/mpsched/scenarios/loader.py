"""
mpsched - Scenario Loading
JSON/YAML scenario files, dotted overrides and JSON dumps
"""

import json
from pathlib import Path
from typing import Any, Dict, Iterable, Optional

import yaml

from mpsched.core.exceptions import ConfigurationError
from mpsched.core.logging_config import get_logger
from mpsched.scenarios.presets import preset
from mpsched.scenarios.schemas import ScenarioConfig, validate

logger = get_logger(__name__)


def load_raw_config(path: Path) -> Dict[str, Any]:
    """
    Parse a scenario file without validating it.

    ``.yaml``/``.yml`` files are read as YAML; anything else as JSON.

    Raises:
        ConfigurationError: Missing file or unparsable content
    """
    path = Path(path)
    if not path.exists():
        raise ConfigurationError([f"config: file not found: {path}"])
    text = path.read_text(encoding="utf-8")
    try:
        if path.suffix.lower() in (".yaml", ".yml"):
            data = yaml.safe_load(text)
        else:
            data = json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as e:
        raise ConfigurationError([f"config: cannot parse {path}: {e}"])
    if not isinstance(data, dict):
        raise ConfigurationError([f"config: {path} must contain a mapping at the top level"])
    return data


def _parse_value(text: str) -> Any:
    try:
        return yaml.safe_load(text)
    except yaml.YAMLError:
        return text


def apply_override(raw: Dict[str, Any], assignment: str) -> Dict[str, Any]:
    """
    Apply one ``dotted.path=value`` override in place.

    List positions are 1-based, so ``subflows.2.one_way_delay_s=0.06``
    changes the second subflow.
    """
    if "=" not in assignment:
        raise ConfigurationError([f"set: expected dotted.path=value, got {assignment!r}"])
    path, value_text = assignment.split("=", 1)
    keys = [k for k in path.strip().split(".") if k]
    if not keys:
        raise ConfigurationError([f"set: empty path in {assignment!r}"])

    node: Any = raw
    for depth, key in enumerate(keys):
        last = depth == len(keys) - 1
        if isinstance(node, list):
            try:
                position = int(key) - 1
            except ValueError:
                raise ConfigurationError([f"set: {path}: {key!r} is not a list position"])
            if not 0 <= position < len(node):
                raise ConfigurationError([f"set: {path}: position {key} out of range 1..{len(node)}"])
            if last:
                node[position] = _parse_value(value_text)
            else:
                node = node[position]
        elif isinstance(node, dict):
            if last:
                node[key] = _parse_value(value_text)
            else:
                node = node.setdefault(key, {})
        else:
            raise ConfigurationError([f"set: {path}: cannot descend into {'.'.join(keys[:depth])}"])
    return raw


def resolve_scenario(
    preset_name: Optional[str] = None,
    config_path: Optional[Path] = None,
    overrides: Iterable[str] = (),
    scheduler: Optional[str] = None,
) -> ScenarioConfig:
    """
    Build the scenario for a CLI invocation.

    Exactly one of ``preset_name`` and ``config_path`` must be given.
    Overrides and the scheduler are applied before validation.
    """
    if bool(preset_name) == bool(config_path):
        raise ConfigurationError(["scenario: give exactly one of --preset or --config"])

    if preset_name:
        raw = preset(preset_name).model_dump(mode="json")
    else:
        raw = load_raw_config(config_path)

    for assignment in overrides:
        apply_override(raw, assignment)
    if scheduler:
        raw["scheduler"] = scheduler

    scenario = validate(raw)
    logger.debug("scenario resolved", scenario=scenario.name, scheduler=scenario.scheduler)
    return scenario


def dump_config(scenario: ScenarioConfig) -> str:
    """Serialise a scenario as an editable JSON document."""
    return json.dumps(scenario.model_dump(mode="json"), indent=2) + "\n"


__all__ = ["load_raw_config", "apply_override", "resolve_scenario", "dump_config"]
