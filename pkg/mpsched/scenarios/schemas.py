"""
mpsched - Scenario Schemas
Pydantic models for scenario files, presets and CLI overrides

Defaults are read from config/simulation_config.yaml when present, with
built-in fallbacks otherwise. Subflow positions in error paths and
overrides are 1-based, like subflow indices everywhere else.
"""

from enum import Enum
from typing import Any, Callable, Dict, List, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from mpsched.core.config import config
from mpsched.core.exceptions import ConfigurationError
from mpsched.schedulers.base import SCHEDULER_NAMES


def _default(key: str, fallback: Any) -> Callable[[], Any]:
    """Default factory reading a dotted key of simulation_config.yaml."""
    return lambda: config.get("simulation_config", key, fallback)


def _default_seeds() -> List[int]:
    return list(config.get("simulation_config", "run.seeds", list(range(1, 11))))


# ================================
# Load Schemas
# ================================

class LoadPattern(str, Enum):
    """Application workload shape"""
    CONSTANT = "constant"
    POISSON = "poisson"
    FILE = "file"


class LoadSpec(BaseModel):
    """Offered load: a bit rate, or a file uploaded from t=0"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    pattern: LoadPattern = LoadPattern.CONSTANT
    rate_bps: Optional[float] = Field(default=None, gt=0)
    file_size_bytes: Optional[int] = Field(default=None, gt=0)

    @model_validator(mode="after")
    def check_pattern_fields(self) -> "LoadSpec":
        if self.pattern is LoadPattern.FILE and self.file_size_bytes is None:
            raise ValueError("file_size_bytes is required for the file pattern")
        if self.pattern is not LoadPattern.FILE and self.rate_bps is None:
            raise ValueError(f"rate_bps is required for the {self.pattern.value} pattern")
        return self


# ================================
# Path Schemas
# ================================

class SubflowSpec(BaseModel):
    """One access path: link, propagation delay, loss and device queue"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = ""
    link_rate_bps: float = Field(..., gt=0)
    one_way_delay_s: float = Field(..., ge=0)
    per: float = 0.0
    queue_capacity: int = Field(default_factory=_default("protocol.queue_capacity", 100), ge=1)

    @field_validator("per")
    @classmethod
    def validate_per(cls, v: float) -> float:
        if not 0 <= v < 1:
            raise ValueError("per must be in [0,1)")
        return v


class ProtocolSpec(BaseModel):
    """Sender knobs shared by every subflow of the connection"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    packet_size_bytes: int = Field(default_factory=_default("protocol.packet_size_bytes", 1500), gt=0)
    send_buffer_capacity: Optional[int] = Field(
        default_factory=_default("protocol.send_buffer_capacity", 130), ge=1
    )
    initial_cwnd: int = Field(default_factory=_default("protocol.initial_cwnd", 10), ge=1)
    dupack_threshold: int = Field(default_factory=_default("protocol.dupack_threshold", 3), ge=1)
    min_rto_s: float = Field(default_factory=_default("protocol.min_rto_s", 0.2), gt=0)
    initial_rto_s: float = Field(default_factory=_default("protocol.initial_rto_s", 1.0), gt=0)
    alpha: float = Field(default_factory=_default("protocol.alpha", 0.8), gt=0, lt=1)
    srtt_gain: float = Field(default_factory=_default("protocol.srtt_gain", 0.125), gt=0, lt=1)
    exclude_retransmission_samples: bool = Field(
        default_factory=_default("protocol.exclude_retransmission_samples", True)
    )
    backbone_rate_bps: float = Field(default_factory=_default("links.backbone_rate_bps", 30e6), gt=0)
    core_rate_bps: float = Field(default_factory=_default("links.core_rate_bps", 50e6), gt=0)


# ================================
# Scenario Schema
# ================================

class ScenarioConfig(BaseModel):
    """A complete experiment: paths, load, scheduler, run length and seeds"""
    model_config = ConfigDict(extra="forbid", frozen=True)

    name: str = Field(..., min_length=1)
    subflows: List[SubflowSpec] = Field(..., min_length=1)
    load: LoadSpec
    scheduler: str = "queueaware"
    duration_s: float = Field(default_factory=_default("run.duration_s", 60.0), gt=0)
    seeds: List[int] = Field(default_factory=_default_seeds, min_length=1)
    interval_s: float = Field(default_factory=_default("run.interval_s", 1.0), gt=0)
    warmup_s: float = Field(default_factory=_default("run.warmup_s", 5.0), ge=0)
    protocol: ProtocolSpec = Field(default_factory=ProtocolSpec)

    @field_validator("scheduler")
    @classmethod
    def validate_scheduler(cls, v: str) -> str:
        v = v.lower()
        if v not in SCHEDULER_NAMES:
            raise ValueError(f"unknown scheduler {v!r}; valid: {', '.join(SCHEDULER_NAMES)}")
        return v

    @field_validator("seeds")
    @classmethod
    def validate_seeds(cls, v: List[int]) -> List[int]:
        negative = [s for s in v if s < 0]
        if negative:
            raise ValueError(f"seeds must be nonnegative, got {negative}")
        return v

    @model_validator(mode="after")
    def check_run_length(self) -> "ScenarioConfig":
        if not self.duration_s > self.warmup_s:
            raise ValueError(
                f"duration_s ({self.duration_s}) must be greater than warmup_s ({self.warmup_s})"
            )
        return self

    @property
    def is_file_transfer(self) -> bool:
        return self.load.pattern is LoadPattern.FILE

    def with_scheduler(self, scheduler: str) -> "ScenarioConfig":
        return validate({**self.model_dump(mode="json"), "scheduler": scheduler})


# ================================
# Validation
# ================================

def _error_path(loc) -> str:
    parts: List[str] = []
    previous = None
    for item in loc:
        if isinstance(item, int) and previous == "subflows":
            parts.append(str(item + 1))
        else:
            parts.append(str(item))
        previous = item
    return ".".join(parts) or "config"


def format_validation_errors(exc: ValidationError) -> List[str]:
    """Render pydantic errors as 'dotted.path: message' strings."""
    messages = []
    for err in exc.errors():
        msg = err["msg"]
        if msg.startswith("Value error, "):
            msg = msg[len("Value error, "):]
        messages.append(f"{_error_path(err['loc'])}: {msg}")
    return messages


def validate(raw: Any) -> ScenarioConfig:
    """
    Check a parsed configuration and fill defaults.

    Args:
        raw: Mapping (from JSON/YAML) or an existing ScenarioConfig

    Returns:
        Validated, immutable ScenarioConfig

    Raises:
        ConfigurationError: Every violation, each prefixed with its field path
    """
    if isinstance(raw, ScenarioConfig):
        raw = raw.model_dump(mode="json")
    if not isinstance(raw, dict):
        raise ConfigurationError([f"config: expected a mapping, got {type(raw).__name__}"])
    try:
        return ScenarioConfig.model_validate(raw)
    except ValidationError as exc:
        raise ConfigurationError(format_validation_errors(exc)) from None


__all__ = [
    "LoadPattern",
    "LoadSpec",
    "SubflowSpec",
    "ProtocolSpec",
    "ScenarioConfig",
    "format_validation_errors",
    "validate",
]
